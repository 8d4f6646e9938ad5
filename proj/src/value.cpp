#include "aft/value.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

#include "aft/error.hpp"
#include "text_util.hpp"

namespace aft {

std::string_view to_string(ValueKind kind) {
  switch (kind) {
    case ValueKind::Real: return "real";
    case ValueKind::Integer: return "integer";
    case ValueKind::Boolean: return "boolean";
    case ValueKind::Vector: return "vector";
    case ValueKind::Symbol: return "symbol";
  }
  return "?";
}

namespace {

[[noreturn]] void wrong_kind(ValueKind want, ValueKind got) {
  throw KindMismatch("expected " + std::string(to_string(want)) + " value, got " +
                     std::string(to_string(got)));
}

}  // namespace

double Value::as_real() const {
  if (kind() != ValueKind::Real) wrong_kind(ValueKind::Real, kind());
  return std::get<0>(storage_);
}

std::int64_t Value::as_integer() const {
  if (kind() != ValueKind::Integer) wrong_kind(ValueKind::Integer, kind());
  return std::get<1>(storage_);
}

bool Value::as_boolean() const {
  if (kind() != ValueKind::Boolean) wrong_kind(ValueKind::Boolean, kind());
  return std::get<2>(storage_);
}

const std::vector<double>& Value::as_vector() const {
  if (kind() != ValueKind::Vector) wrong_kind(ValueKind::Vector, kind());
  return std::get<3>(storage_);
}

const Symbol& Value::as_symbol() const {
  if (kind() != ValueKind::Symbol) wrong_kind(ValueKind::Symbol, kind());
  return std::get<4>(storage_);
}

double Value::numeric() const {
  switch (kind()) {
    case ValueKind::Real: return std::get<0>(storage_);
    case ValueKind::Integer: return static_cast<double>(std::get<1>(storage_));
    default:
      throw NonNumeric("value of kind " + std::string(to_string(kind())) + " is not numeric");
  }
}

bool conforms(const Value& v, const ValueShape& shape) {
  if (v.kind() != shape.kind) return false;
  if (shape.kind == ValueKind::Vector) return v.as_vector().size() == shape.vector_length;
  return true;
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_value(const Value& v) {
  switch (v.kind()) {
    case ValueKind::Real: return format_real(v.as_real());
    case ValueKind::Integer: return std::to_string(v.as_integer());
    case ValueKind::Boolean: return v.as_boolean() ? "true" : "false";
    case ValueKind::Vector: {
      std::string out = "[";
      const auto& xs = v.as_vector();
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ' ';
        out += format_real(xs[i]);
      }
      return out + "]";
    }
    case ValueKind::Symbol: return v.as_symbol().token;
  }
  return {};
}

double parse_real(std::string_view text) {
  text = detail::trim(text);
  if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  std::string_view body = text;
  if (!body.empty() && body.front() == '+') body.remove_prefix(1);
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), out);
  if (body.empty() || ec != std::errc{} || ptr != body.data() + body.size()) {
    throw DomainError("not a real number: '" + std::string(text) + "'");
  }
  return out;
}

std::int64_t parse_integer(std::string_view text) {
  text = detail::trim(text);
  std::string_view body = text;
  if (!body.empty() && body.front() == '+') body.remove_prefix(1);
  std::int64_t out = 0;
  auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), out);
  if (body.empty() || ec != std::errc{} || ptr != body.data() + body.size()) {
    throw DomainError("not an integer: '" + std::string(text) + "'");
  }
  return out;
}

Value parse_value(std::string_view text, const ValueShape& shape) {
  text = detail::trim(text);
  switch (shape.kind) {
    case ValueKind::Real: return Value::real(parse_real(text));
    case ValueKind::Integer: return Value::integer(parse_integer(text));
    case ValueKind::Boolean:
      if (text == "true" || text == "1") return Value::boolean(true);
      if (text == "false" || text == "0") return Value::boolean(false);
      throw DomainError("not a boolean: '" + std::string(text) + "'");
    case ValueKind::Vector: {
      if (text.size() < 2 || !((text.front() == '[' && text.back() == ']') ||
                               (text.front() == '(' && text.back() == ')'))) {
        throw DomainError("vector literal must be bracketed: '" + std::string(text) + "'");
      }
      std::vector<double> xs;
      for (auto part : detail::split_any(text.substr(1, text.size() - 2), ", \t")) {
        xs.push_back(parse_real(part));
      }
      if (xs.size() != shape.vector_length) {
        throw DomainError("vector literal has " + std::to_string(xs.size()) +
                          " components, expected " + std::to_string(shape.vector_length));
      }
      return Value::vector(std::move(xs));
    }
    case ValueKind::Symbol:
      if (text.empty() || text.find_first_of(" \t,[]()=#") != std::string_view::npos) {
        throw DomainError("invalid symbol token: '" + std::string(text) + "'");
      }
      return Value::symbol(std::string(text));
  }
  throw DomainError("unknown value kind");
}

}  // namespace aft
