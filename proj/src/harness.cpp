#include "aft/harness.hpp"

#include <charconv>
#include <cmath>
#include <future>
#include <sstream>

#include "aft/error.hpp"
#include "text_util.hpp"

namespace aft {

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, std::optional<std::uint64_t> file,
                           const char* env) {
  if (flag) return *flag;
  if (file) return *file;
  if (env && *env) {
    const std::string_view text = detail::trim(env);
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || p != text.data() + text.size()) {
      throw DomainError("AFT_SIM_SEED is not an unsigned integer: '" + std::string(env) + "'");
    }
    return v;
  }
  return 0;
}

std::string format_csv(const Scenario& scenario, const std::vector<RequestRecord>& requests) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : requests) {
    const auto& d = r.decision;
    const char* kind = d.detection ? "detect" : (r.kind == WorkloadOp::Kind::Write ? "write" : "read");
    out += std::to_string(r.index);
    out += ',';
    out += kind;
    out += d.committed ? ",1," : ",0,";
    if (d.learned) out += format_value(*d.learned);
    out += ',';
    out += format_value(r.reference);
    out += ',';
    if (d.learned) out += format_real(distance(scenario.space, *d.learned, r.reference));
    out += ',';
    out += std::to_string(d.match.member_ids.size());
    out += ',';
    out += format_real(d.match.aggregate_alpha);
    out += ',';
    out += std::to_string(d.message_count);
    out += '\n';
  }
  return out;
}

ScenarioReport run_scenario(const Scenario& scenario) {
  ScenarioReport report;
  report.result = run(scenario);
  report.csv = format_csv(scenario, report.result.requests);
  return report;
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Epsilon: return "epsilon";
    case SweepAxis::Alpha: return "alpha";
    case SweepAxis::DropProb: return "drop_prob";
    case SweepAxis::F: return "f";
  }
  return "?";
}

SweepAxis parse_sweep_axis(std::string_view text) {
  const auto t = detail::lower(detail::trim(text));
  if (t == "epsilon") return SweepAxis::Epsilon;
  if (t == "alpha") return SweepAxis::Alpha;
  if (t == "drop_prob") return SweepAxis::DropProb;
  if (t == "f") return SweepAxis::F;
  throw InvalidAxis("unknown sweep axis '" + std::string(text) +
                    "' (expected epsilon, alpha, drop_prob or f)");
}

Scenario with_axis(const Scenario& base, SweepAxis axis, double value) {
  Scenario s = base;
  switch (axis) {
    case SweepAxis::Epsilon: s.epsilon = value; break;
    case SweepAxis::Alpha: s.alpha = value; break;
    case SweepAxis::DropProb: s.net.drop_prob = value; break;
    case SweepAxis::F: {
      if (!(value >= 0.0) || value != std::floor(value) || value > 16.0) {
        throw InvalidAxis("f values must be small non-negative integers, got " + format_real(value));
      }
      s.f = static_cast<int>(value);
      s.n.reset();
      s.q.reset();
      const auto n = static_cast<std::size_t>(s.quorum().n);
      if (s.nodes.empty()) break;
      if (s.nodes.size() > n) s.nodes.resize(n);
      while (s.nodes.size() < n) {
        NodeSpec clone = s.nodes.back();
        clone.node_id = static_cast<int>(s.nodes.size());
        clone.faults.clear();
        s.nodes.push_back(std::move(clone));
      }
      break;
    }
  }
  return s;
}

std::vector<SweepRow> sweep(const Scenario& base, SweepAxis axis, const std::vector<double>& values) {
  std::vector<Scenario> variants;
  variants.reserve(values.size());
  for (double v : values) variants.push_back(with_axis(base, axis, v));

  std::vector<std::future<Metrics>> jobs;
  jobs.reserve(variants.size());
  for (const auto& s : variants) {
    jobs.push_back(std::async(std::launch::async, [&s] { return run(s).metrics; }));
  }
  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) rows.push_back({values[i], jobs[i].get()});
  return rows;
}

std::string format_sweep(SweepAxis axis, const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << to_string(axis)
      << ",requests,commit_rate,mean_abs_error,max_abs_error,messages_sent,messages_delivered,"
         "messages_dropped,replication_factor,detection_precision,detection_recall\n";
  for (const auto& r : rows) {
    const auto& m = r.metrics;
    out << format_real(r.value) << ',' << m.requests << ',' << format_real(m.commit_rate) << ','
        << format_real(m.mean_abs_error) << ',' << format_real(m.max_abs_error) << ','
        << m.messages_sent << ',' << m.messages_delivered << ',' << m.messages_dropped << ','
        << m.replication_factor << ',' << format_real(m.detection_precision) << ','
        << format_real(m.detection_recall) << '\n';
  }
  return out.str();
}

}  // namespace aft
