#pragma once

#include <cstddef>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "aft/artira.hpp"
#include "aft/metric.hpp"
#include "aft/transform.hpp"
#include "aft/value.hpp"

namespace aft {

/// Paired observations (x of the candidate, y of the reference) taken under
/// matched conditions.
class PairedSamples {
 public:
  using Pair = std::pair<Value, Value>;

  /// Throws ValidationError if fewer than two pairs or mixed kinds on a side.
  explicit PairedSamples(std::vector<Pair> pairs);

  static PairedSamples from_reals(const std::vector<double>& xs, const std::vector<double>& ys);

  /// Two numeric columns with an `x,y` header row. Throws ParseError.
  static PairedSamples from_csv(std::istream& in);

  const std::vector<Pair>& pairs() const noexcept { return pairs_; }
  std::size_t size() const noexcept { return pairs_.size(); }

 private:
  std::vector<Pair> pairs_;
};

struct CorrelationReport {
  double zeta = 0.0;  // signed Pearson coefficient
  double tau = 0.0;
  bool accepted = false;  // |zeta| >= tau
  double beta = 0.0;      // empirical P(R | Q)
  std::size_t count = 0;
};

/// Two-pass Pearson product-moment coefficient.
/// Throws NonNumeric or DegenerateSamples (a constant marginal).
double estimate_correlation(const PairedSamples& samples);

/// Acceptance is |zeta| >= tau, so perfect negative correlation counts as
/// strongly as perfect positive correlation.
CorrelationReport check_redundancy(const PairedSamples& samples, double tau);

using SamplePredicate = std::function<bool(const Value& x, const Value& y)>;

/// count(R and Q) / count(Q) over the samples. Predicates see the whole pair
/// so that R can relate x to y. Throws EmptyCondition if Q never holds.
double estimate_beta(const PairedSamples& samples, const SamplePredicate& r,
                     const SamplePredicate& q);

enum class RedundancyLevel { None, Partial, Full };

std::string_view to_string(RedundancyLevel level);

/// Correspondence from each action of the reference component to (maybe) an
/// action of the candidate, with the correlation measured for that pair.
struct ActionMapping {
  std::optional<std::string> counterpart;
  CorrelationReport report;
};

using ActionMap = std::map<std::string, ActionMapping>;

/// Full when every action has an accepted counterpart, Partial when at least
/// one does, None otherwise. An empty map is None.
RedundancyLevel check_partial_redundancy(const ActionMap& map, double tau);

struct Rejection {
  double best_alpha = 0.0;
  double best_epsilon = 0.0;
  bool operator==(const Rejection&) const = default;
};

using Qualification = std::variant<ArtiraTriple, Rejection>;

/// The accuracy grid scanned by qualify_artira: k * step for k = 0, 1, ...
/// while it stays <= max_epsilon, followed by max_epsilon itself when the
/// grid does not land on it. Each point is rounded to 15 significant digits
/// so 3 * 0.1 is 0.3 rather than 0.30000000000000004.
std::vector<double> epsilon_grid(double max_epsilon, double step);

/// Residuals d(F(x), y) for every pair; stochastic transforms use draw index i
/// for pair i.
std::vector<double> residuals(const PairedSamples& samples, const TransformSpec& transform,
                              MetricSpace space);

/// Scans epsilon_grid(target_epsilon, epsilon_step) upward and returns the
/// first point whose certainty (fraction of residuals <= epsilon') reaches
/// target_alpha, as a classified triple. Otherwise returns the certainty
/// reached at target_epsilon.
Qualification qualify_artira(const PairedSamples& samples, const TransformSpec& transform,
                             double target_alpha, double target_epsilon, MetricSpace space,
                             double epsilon_step);

}  // namespace aft
