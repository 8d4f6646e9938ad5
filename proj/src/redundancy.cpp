#include "aft/redundancy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "aft/error.hpp"
#include "text_util.hpp"

namespace aft {

PairedSamples::PairedSamples(std::vector<Pair> pairs) : pairs_(std::move(pairs)) {
  std::vector<std::string> violations;
  if (pairs_.size() < 2) {
    violations.emplace_back("at least two paired samples are required, got " +
                            std::to_string(pairs_.size()));
  }
  if (!pairs_.empty()) {
    const auto xk = pairs_.front().first.kind();
    const auto yk = pairs_.front().second.kind();
    for (const auto& [x, y] : pairs_) {
      if (x.kind() != xk) {
        violations.emplace_back("x samples mix kinds");
        break;
      }
      if (y.kind() != yk) {
        violations.emplace_back("y samples mix kinds");
        break;
      }
    }
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));
}

PairedSamples PairedSamples::from_reals(const std::vector<double>& xs,
                                        const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw ValidationError({"x and y sample counts differ"});
  std::vector<Pair> pairs;
  pairs.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    pairs.emplace_back(Value::real(xs[i]), Value::real(ys[i]));
  }
  return PairedSamples(std::move(pairs));
}

PairedSamples PairedSamples::from_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  std::vector<Pair> pairs;
  while (std::getline(in, line)) {
    ++lineno;
    const auto text = detail::trim(line);
    if (text.empty()) continue;
    const auto cells = detail::split_top_level(text);
    if (!header_seen) {
      if (cells.size() != 2 || cells[0] != "x" || cells[1] != "y") {
        throw ParseError(lineno, 1, "expected header row 'x,y'");
      }
      header_seen = true;
      continue;
    }
    if (cells.size() != 2) {
      throw ParseError(lineno, 1, "expected two columns, got " + std::to_string(cells.size()));
    }
    double xy[2];
    for (int c = 0; c < 2; ++c) {
      try {
        xy[c] = parse_real(cells[c]);
      } catch (const DomainError& e) {
        const auto col = static_cast<std::size_t>(cells[c].data() - line.data()) + 1;
        throw ParseError(lineno, col, e.what());
      }
    }
    pairs.emplace_back(Value::real(xy[0]), Value::real(xy[1]));
  }
  if (!header_seen) throw ParseError(lineno + 1, 1, "missing header row 'x,y'");
  return PairedSamples(std::move(pairs));
}

double estimate_correlation(const PairedSamples& samples) {
  const auto& pairs = samples.pairs();
  const auto n = static_cast<double>(pairs.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : pairs) {
    mx += x.numeric();
    my += y.numeric();
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (const auto& [x, y] : pairs) {
    const double dx = x.numeric() - mx;
    const double dy = y.numeric() - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw DegenerateSamples(sxx == 0.0 ? "x samples have zero variance"
                                       : "y samples have zero variance");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

CorrelationReport check_redundancy(const PairedSamples& samples, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw DomainError("tau must lie in [0, 1]");
  CorrelationReport r;
  r.zeta = estimate_correlation(samples);
  r.tau = tau;
  r.accepted = std::fabs(r.zeta) >= tau;
  // Q: y was observed. R: the paired x was observed too.
  const SamplePredicate observed = [](const Value&, const Value&) { return true; };
  r.beta = estimate_beta(samples, observed, observed);
  r.count = samples.size();
  return r;
}

double estimate_beta(const PairedSamples& samples, const SamplePredicate& r,
                     const SamplePredicate& q) {
  std::size_t given = 0, both = 0;
  for (const auto& [x, y] : samples.pairs()) {
    if (!q(x, y)) continue;
    ++given;
    if (r(x, y)) ++both;
  }
  if (given == 0) throw EmptyCondition("no sample satisfies the conditioning predicate");
  return static_cast<double>(both) / static_cast<double>(given);
}

std::string_view to_string(RedundancyLevel level) {
  switch (level) {
    case RedundancyLevel::None: return "none";
    case RedundancyLevel::Partial: return "partial";
    case RedundancyLevel::Full: return "full";
  }
  return "?";
}

RedundancyLevel check_partial_redundancy(const ActionMap& map, double tau) {
  std::size_t accepted = 0;
  for (const auto& [action, mapping] : map) {
    if (mapping.counterpart && std::fabs(mapping.report.zeta) >= tau) ++accepted;
  }
  if (accepted == 0) return RedundancyLevel::None;
  return accepted == map.size() ? RedundancyLevel::Full : RedundancyLevel::Partial;
}

namespace {

double round15(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return std::strtod(buf, nullptr);
}

}  // namespace

std::vector<double> epsilon_grid(double max_epsilon, double step) {
  if (!(step > 0.0)) throw DomainError("epsilon step must be > 0");
  if (!(max_epsilon >= 0.0) || !std::isfinite(max_epsilon)) {
    throw DomainError("target epsilon must be finite and >= 0");
  }
  std::vector<double> grid;
  for (std::size_t k = 0;; ++k) {
    const double point = round15(static_cast<double>(k) * step);
    if (point > max_epsilon) break;
    grid.push_back(point);
  }
  if (grid.back() < max_epsilon) grid.push_back(max_epsilon);
  return grid;
}

std::vector<double> residuals(const PairedSamples& samples, const TransformSpec& transform,
                              MetricSpace space) {
  std::vector<double> out;
  out.reserve(samples.size());
  std::uint64_t index = 0;
  for (const auto& [x, y] : samples.pairs()) {
    out.push_back(distance(space, apply_transform(transform, x, index++), y));
  }
  return out;
}

Qualification qualify_artira(const PairedSamples& samples, const TransformSpec& transform,
                             double target_alpha, double target_epsilon, MetricSpace space,
                             double epsilon_step) {
  if (!(target_alpha > 0.0 && target_alpha <= 1.0)) {
    throw DomainError("target alpha must lie in (0, 1]");
  }
  const auto grid = epsilon_grid(target_epsilon, epsilon_step);
  const auto res = residuals(samples, transform, space);
  const auto n = static_cast<double>(res.size());

  double alpha = 0.0;
  for (const double eps : grid) {
    const auto hits = std::count_if(res.begin(), res.end(), [&](double r) { return r <= eps; });
    alpha = static_cast<double>(hits) / n;
    if (alpha >= target_alpha) return make_triple(transform, alpha, eps);
  }
  return Rejection{alpha, grid.back()};
}

}  // namespace aft
