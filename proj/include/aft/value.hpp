#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace aft {

enum class ValueKind { Real, Integer, Boolean, Vector, Symbol };

std::string_view to_string(ValueKind kind);

/// Opaque token; only equality is meaningful.
struct Symbol {
  std::string token;
  bool operator==(const Symbol&) const = default;
};

/// A response or state value. Vectors within one scenario share a length.
class Value {
 public:
  Value() = default;

  static Value real(double v) { return Value(Storage{std::in_place_index<0>, v}); }
  static Value integer(std::int64_t v) { return Value(Storage{std::in_place_index<1>, v}); }
  static Value boolean(bool v) { return Value(Storage{std::in_place_index<2>, v}); }
  static Value vector(std::vector<double> v) {
    return Value(Storage{std::in_place_index<3>, std::move(v)});
  }
  static Value symbol(std::string token) {
    return Value(Storage{std::in_place_index<4>, Symbol{std::move(token)}});
  }

  ValueKind kind() const noexcept { return static_cast<ValueKind>(storage_.index()); }

  bool is_numeric() const noexcept {
    return kind() == ValueKind::Real || kind() == ValueKind::Integer;
  }

  double as_real() const;
  std::int64_t as_integer() const;
  bool as_boolean() const;
  const std::vector<double>& as_vector() const;
  const Symbol& as_symbol() const;

  /// Real or Integer widened to double; throws NonNumeric otherwise.
  double numeric() const;

  bool operator==(const Value&) const = default;

 private:
  using Storage = std::variant<double, std::int64_t, bool, std::vector<double>, Symbol>;
  explicit Value(Storage s) : storage_(std::move(s)) {}

  Storage storage_{std::in_place_index<0>, 0.0};
};

/// Shape of the values a scenario exchanges.
struct ValueShape {
  ValueKind kind = ValueKind::Real;
  std::size_t vector_length = 0;  // only for Vector

  bool operator==(const ValueShape&) const = default;
};

bool conforms(const Value& v, const ValueShape& shape);

/// Reals are written with 17 significant digits so they reparse bit-exactly.
std::string format_real(double v);

/// Compact text form used in CSV cells and scenario files.
std::string format_value(const Value& v);

/// Parses the text form of `format_value` for the given shape.
/// Throws DomainError on malformed text.
Value parse_value(std::string_view text, const ValueShape& shape);

/// Strict decimal parse of the whole string; throws DomainError.
double parse_real(std::string_view text);
std::int64_t parse_integer(std::string_view text);

}  // namespace aft
