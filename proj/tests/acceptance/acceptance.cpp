// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "aft/consensus.hpp"
#include "aft/harness.hpp"
#include "aft/redundancy.hpp"
#include "aft/transform.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace aft;

namespace {

const std::filesystem::path kScenarios = AFT_SCENARIO_DIR;

Scenario bundled(const std::string& name) {
  return load_scenario(kScenarios / (name + ".scn")).scenario;
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// 1. With epsilon 0 and alpha 1 the generalized predicate and the classical
// one agree on the match and, at equal seeds, on the chosen value.
Verdict par_equals_ft() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  const int sizes[] = {3, 4, 5, 7};
  int sets = 0, mismatches = 0;
  for (int trial = 0; trial < 1200; ++trial) {
    const int n = sizes[trial % 4];
    // Few distinct values so duplicates are common.
    std::uniform_int_distribution<int> pick(0, 1 + trial % 3);
    std::vector<Response> rs;
    std::vector<double> values;
    for (int i = 0; i < n; ++i) {
      values.push_back(pick(rng) * 1.25);
      rs.push_back(replica_response(i, Value::real(values.back()), static_cast<std::uint64_t>(trial)));
    }
    std::shuffle(rs.begin(), rs.end(), rng);
    const QuorumConfig cfg{n, (n - 1) / 2, (n - 1) / 2 + 1, FaultModel::CrashStop};
    const auto ft = ft_match(rs, cfg);
    const auto aft = aft_match(rs, cfg, MetricSpace::AbsoluteDifference, 0.0, 1.0);
    bool same = ft == aft && ft.member_ids == oracle::largest_equal_group(values);
    if (same && ft.matched) {
      const auto seed = rng();
      same = ft_value(ft, rs, seed) == aft_value(aft, rs, Policy::random(seed));
    }
    ++sets;
    if (!same) ++mismatches;
  }
  const double t = seconds_since(t0);
  return {mismatches == 0 && t < 5.0,
          fmt("%d response sets, %d mismatches, %.3f s", sets, mismatches, t)};
}

// 2. Table conversions are exact and the reciprocal undoes itself.
Verdict transforms_exact() {
  const transform::Affine f_to_c{5.0 / 9.0, -32.0 * 5.0 / 9.0};
  const std::pair<double, double> table[] = {{212, 100}, {32, 0}, {-40, -40}};
  int bad = 0;
  for (const auto& [f, c] : table) {
    if (apply_transform(f_to_c, Value::real(f)).as_real() != c) ++bad;
  }
  const transform::Reciprocal r;
  const auto inv = *default_inverse(r);
  for (double x : {2.0, 4.0, 0.5}) {
    if (apply_transform(r, apply_transform(inv, Value::real(x))).as_real() != x) ++bad;
  }
  return {bad == 0, fmt("%d of 6 exact checks failed", bad)};
}

// 3. Up to f crashes at any tick never cost a commit; f+1 crashes stop
// commits without inventing values.
Verdict crash_safety() {
  const auto t0 = std::chrono::steady_clock::now();
  long runs = 0, failures = 0, fabricated = 0, blocked_ok = 0, blocked_bad = 0;

  auto scenario_for = [](int f) {
    Scenario s;
    s.name = "crash";
    s.seed = 40 + static_cast<std::uint64_t>(f);
    s.f = f;
    s.mode = ProtocolMode::LeaderState;
    for (int i = 0; i < 2 * f + 1; ++i) s.nodes.push_back({i, RoleSet{}, std::nullopt, std::nullopt, {}});
    s.workload = WorkloadGenerator{WorkloadGenerator::Pattern::Mixed, 20, -100, 100};
    return s;
  };
  auto honest = [&](const RunResult& r) {
    for (const auto& req : r.requests) {
      if (req.decision.committed && req.decision.learned && *req.decision.learned != req.reference) {
        ++fabricated;
      }
    }
  };

  for (int f : {1, 2}) {
    const auto base = scenario_for(f);
    const int n = 2 * f + 1;
    const Tick horizon = 20 * base.interval();
    // Every subset of at most f nodes, every crash tick in the run.
    std::vector<std::vector<int>> subsets;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      if (std::popcount(mask) > f) continue;
      std::vector<int> ids;
      for (int i = 0; i < n; ++i) {
        if (mask & (1u << i)) ids.push_back(i);
      }
      subsets.push_back(ids);
    }
    for (const auto& ids : subsets) {
      std::vector<Tick> when(ids.size(), 0);
      const std::function<void(std::size_t)> each = [&](std::size_t k) {
        if (k == ids.size()) {
          auto s = base;
          for (std::size_t j = 0; j < ids.size(); ++j) s.nodes[ids[j]].faults = {FaultEvent::crash(when[j])};
          const auto r = run(s);
          ++runs;
          if (r.metrics.commit_rate != 1.0) ++failures;
          honest(r);
          return;
        }
        for (Tick t = 0; t <= horizon; ++t) {
          when[k] = t;
          each(k + 1);
        }
      };
      each(0);
    }

    // f+1 simultaneous crashes at every request boundary and a few mid-request ticks.
    for (Tick t = 0; t <= horizon; t += 3) {
      auto s = base;
      for (int i = 0; i <= f; ++i) s.nodes[i].faults = {FaultEvent::crash(t)};
      const auto r = run(s);
      ++runs;
      honest(r);
      for (const auto& req : r.requests) {
        if (req.issued_at < t) continue;
        if (!req.decision.committed && req.decision.outcome == Outcome::NoQuorum) {
          ++blocked_ok;
        } else {
          ++blocked_bad;
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  return {failures == 0 && fabricated == 0 && blocked_bad == 0 && blocked_ok > 0 && secs < 10.0,
          fmt("%ld runs, %ld with a lost commit, %ld fabricated values, %ld/%ld requests "
              "refused after f+1 crashes, %.2f s",
              runs, failures, fabricated, blocked_ok, blocked_ok + blocked_bad, secs)};
}

// 4. Bounded sensor noise: everything commits and no learned value strays
// more than delta from the truth.
Verdict sar_bound() {
  const auto s = bundled("sar_medical");
  const auto r = run(s);
  double worst = 0.0;
  for (const auto& req : r.requests) {
    if (req.decision.learned) {
      worst = std::max(worst, std::fabs(req.decision.learned->as_real() - req.reference.as_real()));
    }
  }
  const bool shape = s.epsilon == 0.4 && s.alpha == 1.0 && r.requests.size() == 1000;
  return {shape && r.metrics.commit_rate == 1.0 && worst <= 0.4,
          fmt("%zu requests, commit_rate %.17g, max error %.17g", r.requests.size(),
              r.metrics.commit_rate, worst)};
}

// 5. A max-skew adversary against Max never pushes a learned value past
// reference + epsilon, and reaches it at least once.
Verdict byzantine_skew() {
  const auto s = bundled("byz_maxskew");
  const auto r = run(s);
  int above = 0, at_bound = 0, learned = 0;
  for (const auto& req : r.requests) {
    if (!req.decision.learned) continue;
    ++learned;
    const double v = req.decision.learned->as_real();
    const double cap = req.reference.as_real() + s.epsilon;
    if (v > cap) ++above;
    if (v == cap) ++at_bound;
  }
  int byzantine = 0;
  for (const auto& n : s.nodes) byzantine += n.faults.empty() ? 0 : 1;
  const auto cfg = s.quorum();
  const bool shape = s.policy == Policy::max() && cfg.n == 4 && cfg.q == 3 && byzantine == 1 &&
                     r.requests.size() == 1000;
  return {shape && above == 0 && at_bound >= 1 && learned == 1000,
          fmt("%d learned, %d above the cap, %d exactly at it", learned, above, at_bound)};
}

// 6. qualify_artira against sort-and-scan on ten fixtures.
Verdict qualification() {
  int agree = 0, total = 0;
  for (const auto& c : fixtures::qualify_cases()) {
    ++total;
    std::vector<double> res;
    std::uint64_t i = 0;
    for (const auto& [x, y] : c.samples.pairs()) {
      res.push_back(std::fabs(apply_transform(c.transform, x, i++).numeric() - y.numeric()));
    }
    const auto want = oracle::qualify(res, c.target_alpha, c.target_epsilon, c.step);
    const auto got = qualify_artira(c.samples, c.transform, c.target_alpha, c.target_epsilon,
                                    MetricSpace::AbsoluteDifference, c.step);
    bool same = false;
    if (const auto* t = std::get_if<ArtiraTriple>(&got)) {
      same = want.accepted && t->alpha == want.alpha && t->epsilon == want.epsilon;
    } else {
      const auto& rej = std::get<Rejection>(got);
      same = !want.accepted && rej.best_alpha == want.alpha && rej.best_epsilon == want.epsilon;
    }
    if (same) ++agree;
  }
  return {agree == total && total == 10, fmt("%d of %d fixtures agree exactly", agree, total)};
}

// 7. Correlation on exact lines and against the textbook formula.
Verdict correlation() {
  double worst_pos = 0, worst_neg = 0, worst_noise = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto up = fixtures::noisy_line(seed, 100, 0.5 + static_cast<double>(seed), 3.0, 0.0);
    const auto down = fixtures::noisy_line(seed + 10, 100, -1.0, 0.0, 0.0);
    worst_pos = std::max(worst_pos, std::fabs(estimate_correlation(up) - 1.0));
    worst_neg = std::max(worst_neg, std::fabs(estimate_correlation(down) + 1.0));
    const auto noisy = fixtures::noisy_line(seed + 20, 1000, 0.8, -2.0, 10.0);
    std::vector<double> xs, ys;
    for (const auto& [x, y] : noisy.pairs()) {
      xs.push_back(x.numeric());
      ys.push_back(y.numeric());
    }
    worst_noise = std::max(worst_noise, std::fabs(estimate_correlation(noisy) - oracle::pearson(xs, ys)));
  }
  return {worst_pos <= 1e-12 && worst_neg <= 1e-12 && worst_noise <= 1e-12,
          fmt("max deviation: positive %.3g, negative %.3g, noisy vs oracle %.3g", worst_pos,
              worst_neg, worst_noise)};
}

// 8. Every bundled scenario replays to identical CSV bytes.
Verdict determinism() {
  int same = 0, total = 0;
  for (const char* name : {"par_exact", "par_celsius", "par_negate", "sar_medical",
                           "war_recommender", "byz_maxskew"}) {
    ++total;
    const auto s = bundled(name);
    if (run_scenario(s).csv == run_scenario(s).csv) ++same;
  }
  return {same == total, fmt("%d of %d scenarios byte-identical", same, total)};
}

// 9. Weak artiras as detectors. Golden values recorded from the first run
// at the bundled seed.
Verdict war_detection() {
  constexpr double kGoldenPrecision = 0.91407678244972579;
  constexpr double kGoldenRecall = 1.0;
  const auto s = bundled("war_recommender");
  const auto r = run(s);
  const auto& m = r.metrics;
  const bool stats = m.detection_recall >= 0.95 && m.detection_precision >= 0.90;
  const bool golden = m.detection_precision == kGoldenPrecision && m.detection_recall == kGoldenRecall;
  return {stats && golden && r.requests.size() == 2000,
          fmt("%zu requests, precision %.17g, recall %.17g, golden %s", r.requests.size(),
              m.detection_precision, m.detection_recall, golden ? "match" : "differ")};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Verdict()>> criteria[] = {
      {"PAR matches FT", par_equals_ft},
      {"transform exactness", transforms_exact},
      {"quorum safety under crashes", crash_safety},
      {"SAR bound respected", sar_bound},
      {"byzantine skew bounded", byzantine_skew},
      {"qualification oracle", qualification},
      {"correlation ground truth", correlation},
      {"determinism", determinism},
      {"WAR detection", war_detection},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::printf("[%s] %d %s: %s\n", v.pass ? "PASS" : "FAIL", index, name, v.detail.c_str());
  }
  std::printf("%d of %d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
