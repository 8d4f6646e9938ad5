#include "aft/adapter.hpp"

#include "aft/error.hpp"

namespace aft {

Uncertainty widen_for_inverse(const ArtiraTriple& triple, double inverse_epsilon,
                              double inverse_alpha) {
  if (!(inverse_epsilon >= 0.0)) throw DomainError("inverse epsilon must be >= 0");
  if (!(inverse_alpha >= 0.0 && inverse_alpha <= 1.0)) {
    throw DomainError("inverse alpha must lie in [0, 1]");
  }
  return {triple.epsilon + inverse_epsilon, triple.alpha * inverse_alpha};
}

Adapter::Adapter(ArtiraTriple triple, MetricSpace space, double inverse_epsilon,
                 double inverse_alpha)
    : triple_(std::move(triple)), space_(space), inverse_{inverse_epsilon, inverse_alpha} {
  auto violations = triple_violations(triple_);
  const bool widened = inverse_epsilon != 0.0 || inverse_alpha != 1.0;
  if (widened && !triple_.inverse) {
    violations.emplace_back("inverse uncertainty given but the triple has no inverse");
  }
  if (widened && triple_.inverse && is_perfect_inverse(triple_.transform, *triple_.inverse)) {
    violations.emplace_back("a perfect inverse carries no extra uncertainty");
  }
  if (!(inverse_epsilon >= 0.0)) violations.emplace_back("inverse epsilon must be >= 0");
  if (!(inverse_alpha >= 0.0 && inverse_alpha <= 1.0)) {
    violations.emplace_back("inverse alpha must lie in [0, 1]");
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));
  effective_ = widen_for_inverse(triple_, inverse_epsilon, inverse_alpha);
}

Value Adapter::decode(const Value& raw) {
  const auto index = draws_;
  if (is_stochastic(triple_.transform)) ++draws_;
  return apply_transform(triple_.transform, raw, index);
}

Value Adapter::encode(const Value& value) const {
  if (!triple_.inverse) {
    throw NoInverse("transform " + format_transform(triple_.transform) + " has no coder");
  }
  return apply_transform(*triple_.inverse, value);
}

bool roundtrip_check(Adapter& adapter, std::span<const Value> probes) {
  bool all = true;
  for (const auto& p : probes) {
    if (!(adapter.decode(adapter.encode(p)) == p)) all = false;
  }
  return all;
}

}  // namespace aft
