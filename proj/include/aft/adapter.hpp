#pragma once

#include <cstdint>
#include <span>
#include <utility>

#include "aft/artira.hpp"
#include "aft/metric.hpp"
#include "aft/value.hpp"

namespace aft {

/// Composed uncertainty of a read after a write through an imperfect coder:
/// accuracy bounds add (triangle inequality) and certainties multiply
/// (independent errors).
struct Uncertainty {
  double epsilon = 0.0;
  double alpha = 1.0;
  bool operator==(const Uncertainty&) const = default;
};

Uncertainty widen_for_inverse(const ArtiraTriple& triple, double inverse_epsilon,
                              double inverse_alpha);

/// Wrapper around an artificial replica. The decoder applies F to values
/// leaving the artira; the coder applies F^-1 to values written into it.
///
/// Stochastic transforms consume one draw per decode from a counter-based
/// generator, so an adapter replays identically given the same sequence of
/// calls. One adapter belongs to one simulated node.
class Adapter {
 public:
  /// Throws ValidationError if the triple is malformed or if a non-trivial
  /// inverse uncertainty is claimed for a perfect inverse.
  explicit Adapter(ArtiraTriple triple, MetricSpace space = MetricSpace::AbsoluteDifference,
                   double inverse_epsilon = 0.0, double inverse_alpha = 1.0);

  const ArtiraTriple& triple() const noexcept { return triple_; }
  MetricSpace space() const noexcept { return space_; }
  double effective_epsilon() const noexcept { return effective_.epsilon; }
  double effective_alpha() const noexcept { return effective_.alpha; }
  double inverse_epsilon() const noexcept { return inverse_.epsilon; }
  double inverse_alpha() const noexcept { return inverse_.alpha; }
  bool has_inverse() const noexcept { return triple_.inverse.has_value(); }

  /// F(raw).
  Value decode(const Value& raw);
  /// F^-1(value); throws NoInverse when the triple has no coder.
  Value encode(const Value& value) const;

  std::uint64_t draws() const noexcept { return draws_; }

  bool operator==(const Adapter&) const = default;

 private:
  ArtiraTriple triple_;
  MetricSpace space_;
  Uncertainty inverse_;
  Uncertainty effective_;
  std::uint64_t draws_ = 0;
};

/// True iff decode(encode(v)) == v exactly for every probe.
bool roundtrip_check(Adapter& adapter, std::span<const Value> probes);

}  // namespace aft
