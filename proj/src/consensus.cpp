#include "aft/consensus.hpp"

#include <algorithm>
#include <numeric>

#include "aft/error.hpp"
#include "aft/random.hpp"
#include "clique.hpp"
#include "text_util.hpp"

namespace aft {

std::string_view to_string(FaultModel model) {
  switch (model) {
    case FaultModel::CrashStop: return "crash_stop";
    case FaultModel::CrashRecovery: return "crash_recovery";
    case FaultModel::Byzantine: return "byzantine";
  }
  return "?";
}

FaultModel parse_fault_model(std::string_view text) {
  const auto t = detail::lower(detail::trim(text));
  if (t == "crash_stop" || t == "crashstop") return FaultModel::CrashStop;
  if (t == "crash_recovery" || t == "crashrecovery") return FaultModel::CrashRecovery;
  if (t == "byzantine") return FaultModel::Byzantine;
  throw DomainError("unknown fault model '" + std::string(text) + "'");
}

QuorumConfig QuorumConfig::for_faults(int f, FaultModel model) {
  if (model == FaultModel::Byzantine) return {3 * f + 1, f, 2 * f + 1, model};
  return {2 * f + 1, f, f + 1, model};
}

std::vector<std::string> QuorumConfig::violations() const {
  std::vector<std::string> out;
  if (n < 1) out.emplace_back("n must be positive");
  if (f < 0) out.emplace_back("f must be non-negative");
  if (q < 1) out.emplace_back("q must be positive");
  if (q > n) out.emplace_back("q <= n violated (q = " + std::to_string(q) +
                              ", n = " + std::to_string(n) + ")");
  if (f >= n) out.emplace_back("f < n violated (f = " + std::to_string(f) +
                               ", n = " + std::to_string(n) + ")");
  return out;
}

Response replica_response(int node_id, Value value, std::uint64_t round) {
  Response r;
  r.node_id = node_id;
  r.value = std::move(value);
  r.round = round;
  return r;
}

std::string_view to_string(MatchMode mode) {
  switch (mode) {
    case MatchMode::Exact: return "exact";
    case MatchMode::EpsilonBounded: return "epsilon_bounded";
    case MatchMode::Probabilistic: return "probabilistic";
  }
  return "?";
}

bool MatchSet::contains(int node_id) const {
  return std::binary_search(member_ids.begin(), member_ids.end(), node_id);
}

namespace {

const Response& response_of(std::span<const Response> responses, int node_id) {
  for (const auto& r : responses) {
    if (r.node_id == node_id) return r;
  }
  throw NotMatched("match member " + std::to_string(node_id) + " has no response");
}

double alpha_product(std::span<const Response> responses, const std::vector<int>& ids) {
  double a = 1.0;
  for (int id : ids) a *= response_of(responses, id).declared_alpha;
  return a;
}

void check_size(std::span<const Response> responses, const QuorumConfig& cfg) {
  if (responses.size() > kMaxMatchNodes || cfg.n > kMaxMatchNodes) {
    throw TooManyNodes("exact matching supports at most " + std::to_string(kMaxMatchNodes) +
                       " nodes");
  }
}

std::uint64_t member_draw(std::span<const Response> responses, const MatchSet& match,
                          std::uint64_t seed) {
  const auto round = response_of(responses, match.member_ids.front()).round;
  return random::below(random::hash({random::kPolicyStream, seed, round}),
                       match.member_ids.size());
}

MatchMode mode_for(std::span<const Response> responses, double epsilon, double alpha) {
  bool certain = alpha >= 1.0;
  bool exact = epsilon == 0.0;
  for (const auto& r : responses) {
    if (r.declared_alpha < 1.0) certain = false;
    if (r.declared_epsilon != 0.0) exact = false;
  }
  if (!certain) return MatchMode::Probabilistic;
  return exact ? MatchMode::Exact : MatchMode::EpsilonBounded;
}

// Response indices in ascending node-id order.
std::vector<std::size_t> id_order(std::span<const Response> responses) {
  std::vector<std::size_t> order(responses.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return responses[a].node_id < responses[b].node_id;
  });
  return order;
}

struct CliquePick {
  MatchSet match;
  bool tied = false;
};

CliquePick clique_match(std::span<const Response> responses, const QuorumConfig& cfg,
                        MetricSpace space, double epsilon, double alpha,
                        std::optional<int> anchor) {
  check_size(responses, cfg);
  const auto order = id_order(responses);
  const auto n = order.size();
  std::vector<std::uint32_t> adjacency(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (responses_match(space, responses[order[i]], responses[order[j]], epsilon, alpha)) {
        adjacency[i] |= 1u << j;
        adjacency[j] |= 1u << i;
      }
    }
  }

  std::uint32_t allowed = n == 32 ? ~0u : (1u << n) - 1u;
  if (anchor) {
    allowed = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (responses[order[i]].node_id == *anchor) allowed = adjacency[i] | (1u << i);
    }
  }

  const detail::CliqueSearch search(adjacency, allowed);
  CliquePick pick;
  for (std::size_t i = 0; i < n; ++i) {
    if (search.result().members & (1u << i)) {
      pick.match.member_ids.push_back(responses[order[i]].node_id);
    }
  }
  pick.tied = search.result().tied;
  pick.match.matched = static_cast<int>(pick.match.member_ids.size()) >= cfg.q;
  pick.match.mode = mode_for(responses, epsilon, alpha);
  pick.match.aggregate_alpha = alpha_product(responses, pick.match.member_ids);
  return pick;
}

}  // namespace

MatchSet ft_match(std::span<const Response> responses, const QuorumConfig& cfg) {
  // Groups of identical values, each listed in ascending node-id order.
  const auto order = id_order(responses);
  std::vector<std::vector<int>> groups;
  std::vector<const Value*> representative;
  for (auto idx : order) {
    const auto& r = responses[idx];
    bool placed = false;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (*representative[g] == r.value) {
        groups[g].push_back(r.node_id);
        placed = true;
        break;
      }
    }
    if (!placed) {
      groups.push_back({r.node_id});
      representative.push_back(&r.value);
    }
  }

  MatchSet best;
  // Groups were opened in node-id order, so the first largest group holds
  // the lowest node id among the largest.
  for (auto& g : groups) {
    if (g.size() > best.member_ids.size()) best.member_ids = g;
  }
  best.matched = static_cast<int>(best.member_ids.size()) >= cfg.q;
  best.mode = MatchMode::Exact;
  best.aggregate_alpha = alpha_product(responses, best.member_ids);
  return best;
}

Value ft_value(const MatchSet& match, std::span<const Response> responses, std::uint64_t seed) {
  if (!match.matched || match.member_ids.empty()) throw NotMatched("no matching quorum");
  const auto pick = member_draw(responses, match, seed);
  return response_of(responses, match.member_ids[pick]).value;
}

double pair_radius(const Response& a, const Response& b, double epsilon) {
  return std::max(epsilon, a.declared_epsilon + b.declared_epsilon);
}

bool responses_match(MetricSpace space, const Response& a, const Response& b, double epsilon,
                     double alpha) {
  if (a.declared_alpha * b.declared_alpha < alpha) return false;
  return distance(space, a.value, b.value) <= pair_radius(a, b, epsilon);
}

MatchSet aft_match(std::span<const Response> responses, const QuorumConfig& cfg,
                   MetricSpace space, double epsilon, double alpha) {
  return clique_match(responses, cfg, space, epsilon, alpha, std::nullopt).match;
}

MatchSet aft_match_anchored(std::span<const Response> responses, const QuorumConfig& cfg,
                            MetricSpace space, double epsilon, double alpha, int anchor_id) {
  return clique_match(responses, cfg, space, epsilon, alpha, anchor_id).match;
}

std::string format_policy(const Policy& policy) {
  switch (policy.kind) {
    case Policy::Kind::Random: return "random(" + std::to_string(policy.seed) + ")";
    case Policy::Kind::Min: return "min";
    case Policy::Kind::Max: return "max";
    case Policy::Kind::Mean: return "mean";
    case Policy::Kind::Median: return "median";
    case Policy::Kind::PreferReplica: return "prefer_replica";
  }
  return "?";
}

Policy parse_policy(std::string_view text) {
  std::string_view name, args;
  if (!detail::split_call(text, name, args)) {
    throw DomainError("malformed policy '" + std::string(text) + "'");
  }
  const auto n = detail::lower(name);
  if (n == "random") {
    const auto seed = args.empty() ? 0 : parse_integer(args);
    if (seed < 0) throw DomainError("policy seed must be non-negative");
    return Policy::random(static_cast<std::uint64_t>(seed));
  }
  if (!args.empty()) throw DomainError("policy '" + n + "' takes no arguments");
  if (n == "min") return Policy::min();
  if (n == "max") return Policy::max();
  if (n == "mean") return Policy::mean();
  if (n == "median") return Policy::median();
  if (n == "prefer_replica") return Policy::prefer_replica();
  throw DomainError("unknown policy '" + std::string(text) + "'");
}

namespace {

std::vector<const Response*> members_of(const MatchSet& match,
                                        std::span<const Response> responses) {
  if (!match.matched || match.member_ids.empty()) throw NotMatched("no matching quorum");
  std::vector<const Response*> out;
  for (int id : match.member_ids) out.push_back(&response_of(responses, id));
  return out;
}

void require_numeric(const std::vector<const Response*>& members, const Policy& policy) {
  const auto kind = members.front()->value.kind();
  for (const auto* m : members) {
    if (!m->value.is_numeric() || m->value.kind() != kind) {
      throw NonNumericPolicy("policy " + format_policy(policy) +
                             " needs Real or Integer values of one kind");
    }
  }
}

__extension__ using i128 = __int128;

// a / d rounded half to even; d > 0.
std::int64_t divide_half_even(i128 a, i128 d) {
  i128 q = a / d;
  i128 r = a % d;
  if (r < 0) {
    r += d;
    q -= 1;
  }
  if (2 * r > d || (2 * r == d && (q % 2 != 0))) q += 1;
  return static_cast<std::int64_t>(q);
}

Value median_of(const std::vector<const Response*>& members) {
  const bool integral = members.front()->value.kind() == ValueKind::Integer;
  const auto n = members.size();
  if (integral) {
    std::vector<std::int64_t> xs;
    for (const auto* m : members) xs.push_back(m->value.as_integer());
    std::sort(xs.begin(), xs.end());
    if (n % 2 == 1) return Value::integer(xs[n / 2]);
    return Value::integer(
        divide_half_even(static_cast<i128>(xs[n / 2 - 1]) + xs[n / 2], 2));
  }
  std::vector<double> xs;
  for (const auto* m : members) xs.push_back(m->value.as_real());
  std::sort(xs.begin(), xs.end());
  if (n % 2 == 1) return Value::real(xs[n / 2]);
  return Value::real(std::midpoint(xs[n / 2 - 1], xs[n / 2]));
}

Value mean_of(const std::vector<const Response*>& members) {
  const auto n = members.size();
  if (members.front()->value.kind() == ValueKind::Integer) {
    i128 sum = 0;
    for (const auto* m : members) sum += m->value.as_integer();
    return Value::integer(divide_half_even(sum, static_cast<i128>(n)));
  }
  double sum = 0.0;
  for (const auto* m : members) sum += m->value.as_real();
  return Value::real(sum / static_cast<double>(n));
}

}  // namespace

std::optional<int> select_member(const MatchSet& match, std::span<const Response> responses,
                                 const Policy& policy) {
  const auto members = members_of(match, responses);
  switch (policy.kind) {
    case Policy::Kind::Random:
      return match.member_ids[member_draw(responses, match, policy.seed)];
    case Policy::Kind::Min:
    case Policy::Kind::Max: {
      require_numeric(members, policy);
      // Members are in ascending id order; strict comparison keeps the lowest id on ties.
      const Response* best = members.front();
      for (const auto* m : members) {
        const double v = m->value.numeric();
        const double b = best->value.numeric();
        if (policy.kind == Policy::Kind::Min ? v < b : v > b) best = m;
      }
      return best->node_id;
    }
    case Policy::Kind::PreferReplica:
      for (const auto* m : members) {
        if (!m->is_artira) return m->node_id;
      }
      return std::nullopt;
    case Policy::Kind::Mean:
    case Policy::Kind::Median: return std::nullopt;
  }
  return std::nullopt;
}

Value aft_value(const MatchSet& match, std::span<const Response> responses, const Policy& policy) {
  const auto members = members_of(match, responses);
  if (policy.needs_numeric()) require_numeric(members, policy);
  switch (policy.kind) {
    case Policy::Kind::Mean: return mean_of(members);
    case Policy::Kind::Median: return median_of(members);
    case Policy::Kind::PreferReplica:
      if (auto id = select_member(match, responses, policy)) return response_of(responses, *id).value;
      require_numeric(members, Policy::median());
      return median_of(members);
    default: return response_of(responses, *select_member(match, responses, policy)).value;
  }
}

FaultReport detect_fault(std::span<const Response> responses, const QuorumConfig& cfg,
                         MetricSpace space, double epsilon, double alpha) {
  auto pick = clique_match(responses, cfg, space, epsilon, alpha, std::nullopt);
  FaultReport report;
  for (const auto& r : responses) {
    if (!pick.match.contains(r.node_id)) report.suspects.push_back(r.node_id);
  }
  std::sort(report.suspects.begin(), report.suspects.end());
  report.confidence = pick.match.aggregate_alpha;
  report.ambiguous = pick.tied;
  report.clique = std::move(pick.match);
  return report;
}

}  // namespace aft
