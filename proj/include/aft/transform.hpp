#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "aft/value.hpp"

namespace aft {

// Built-in transformation functions F an adapter can apply. Each models one
// correlation setting:
//   Identity            exact copy                F(v) = v
//   Affine              perfect positive          F(v) = scale * v + offset
//   Negate              perfect negative          F(v) = -v
//   Reciprocal          self-inverse              F(v) = 1 / v
//   BoundedNoise        bounded strong            F(v) = v + e, |e| <= delta
//   StochasticPredictor unbounded strong          |F(v) - v| <= error_scale w.p. hit_prob
// AffineInverse is the coder paired with Affine: v / scale - offset / scale.

namespace transform {

struct Identity {
  bool operator==(const Identity&) const = default;
};

struct Affine {
  double scale = 1.0;
  double offset = 0.0;
  bool operator==(const Affine&) const = default;
};

struct AffineInverse {
  double scale = 1.0;
  double offset = 0.0;
  bool operator==(const AffineInverse&) const = default;
};

struct Negate {
  bool operator==(const Negate&) const = default;
};

struct Reciprocal {
  bool operator==(const Reciprocal&) const = default;
};

struct BoundedNoise {
  double delta = 0.0;
  std::uint64_t seed = 0;
  bool operator==(const BoundedNoise&) const = default;
};

struct StochasticPredictor {
  double error_scale = 0.0;
  double hit_prob = 1.0;
  std::uint64_t seed = 0;
  bool operator==(const StochasticPredictor&) const = default;
};

}  // namespace transform

using TransformSpec =
    std::variant<transform::Identity, transform::Affine, transform::AffineInverse,
                 transform::Negate, transform::Reciprocal, transform::BoundedNoise,
                 transform::StochasticPredictor>;

/// Applies F. Stochastic kinds are a pure function of (seed, draw_index);
/// deterministic kinds ignore draw_index.
/// Throws DomainError (reciprocal of zero) or KindMismatch (non-numeric input
/// to anything but Identity).
Value apply_transform(const TransformSpec& spec, const Value& input, std::uint64_t draw_index = 0);

bool is_stochastic(const TransformSpec& spec);

/// The coder matching a decoder: the mathematical inverse for the exact kinds,
/// Identity for BoundedNoise (the noise-free part), nothing for predictors.
std::optional<TransformSpec> default_inverse(const TransformSpec& spec);

/// True when `inverse` undoes `spec` exactly in real arithmetic.
bool is_perfect_inverse(const TransformSpec& spec, const TransformSpec& inverse);

/// Invariant violations of the parameters (e.g. zero affine scale); empty if valid.
std::vector<std::string> transform_violations(const TransformSpec& spec);

/// `affine(0.5555555555555556, -17.777777777777779)`, `bounded_noise(0.4, 7)`, ...
std::string format_transform(const TransformSpec& spec);

/// Inverse of format_transform. Throws DomainError on malformed text.
TransformSpec parse_transform(std::string_view text);

}  // namespace aft
