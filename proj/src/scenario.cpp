#include "aft/scenario.hpp"

#include <algorithm>
#include <cmath>

#include "aft/adapter.hpp"
#include "aft/error.hpp"
#include "aft/random.hpp"
#include "text_util.hpp"

namespace aft {

std::string format_fault(const FaultEvent& e) {
  const auto at = "@" + std::to_string(e.at);
  switch (e.kind) {
    case FaultEvent::Kind::Crash: return "crash" + at;
    case FaultEvent::Kind::Recover: return "recover" + at;
    case FaultEvent::Kind::ByzantineOn:
      return "byzantine(" + format_strategy(e.strategy.value_or(ByzantineStrategy::mute())) + ")" +
             at;
    case FaultEvent::Kind::ByzantineOff: return "honest" + at;
  }
  return "?";
}

FaultEvent parse_fault(std::string_view text) {
  text = detail::trim(text);
  const auto atpos = text.rfind('@');
  if (atpos == std::string_view::npos) {
    throw DomainError("fault event needs a tick: '" + std::string(text) + "'");
  }
  const auto tick = parse_integer(text.substr(atpos + 1));
  if (tick < 0) throw DomainError("fault tick must be non-negative");
  const auto at = static_cast<Tick>(tick);

  std::string_view name, args;
  if (!detail::split_call(text.substr(0, atpos), name, args)) {
    throw DomainError("malformed fault event '" + std::string(text) + "'");
  }
  const auto n = detail::lower(name);
  if (n == "byzantine") return FaultEvent::byzantine_on(at, parse_strategy(args.empty() ? "mute" : args));
  if (!args.empty()) throw DomainError("fault '" + n + "' takes no arguments");
  if (n == "crash") return FaultEvent::crash(at);
  if (n == "recover") return FaultEvent::recover(at);
  if (n == "honest") return FaultEvent::byzantine_off(at);
  throw DomainError("unknown fault event '" + std::string(name) + "'");
}

std::optional<std::string> fault_model_violation(const FaultEvent& e, FaultModel model) {
  switch (e.kind) {
    case FaultEvent::Kind::Crash: return std::nullopt;
    case FaultEvent::Kind::Recover:
      if (model != FaultModel::CrashRecovery) {
        return "recover is only valid under the crash_recovery fault model";
      }
      return std::nullopt;
    case FaultEvent::Kind::ByzantineOn:
    case FaultEvent::Kind::ByzantineOff:
      if (model != FaultModel::Byzantine) {
        return "byzantine behavior is only valid under the byzantine fault model";
      }
      return std::nullopt;
  }
  return std::nullopt;
}

std::string_view to_string(ProtocolMode mode) {
  switch (mode) {
    case ProtocolMode::LeaderState: return "leader_state";
    case ProtocolMode::Vector: return "vector";
    case ProtocolMode::DetectOnly: return "detect_only";
  }
  return "?";
}

ProtocolMode parse_protocol_mode(std::string_view text) {
  const auto t = detail::lower(detail::trim(text));
  if (t == "leader_state" || t == "leader") return ProtocolMode::LeaderState;
  if (t == "vector") return ProtocolMode::Vector;
  if (t == "detect_only" || t == "detect") return ProtocolMode::DetectOnly;
  throw DomainError("unknown protocol mode '" + std::string(text) + "'");
}

std::string_view to_string(WorkloadOp::Kind kind) {
  return kind == WorkloadOp::Kind::Write ? "write" : "read";
}

QuorumConfig Scenario::quorum() const {
  auto cfg = QuorumConfig::for_faults(f, fault_model);
  if (n) cfg.n = *n;
  if (q) cfg.q = *q;
  return cfg;
}

Tick Scenario::interval() const {
  return request_interval.value_or(4 * (net.base_delay + net.jitter) + 1);
}

std::vector<WorkloadOp> Scenario::expand_workload() const {
  if (const auto* ops = std::get_if<std::vector<WorkloadOp>>(&workload)) return *ops;
  const auto& g = std::get<WorkloadGenerator>(workload);
  std::vector<WorkloadOp> out;
  out.reserve(g.count);
  for (std::size_t i = 0; i < g.count; ++i) {
    const bool write = g.pattern == WorkloadGenerator::Pattern::Writes ||
                       (g.pattern == WorkloadGenerator::Pattern::Mixed && i % 2 == 0);
    if (!write) {
      out.push_back(WorkloadOp::read());
      continue;
    }
    const auto bits = random::hash({random::kWorkloadStream, seed, i});
    switch (shape.kind) {
      case ValueKind::Integer: {
        const auto lo = static_cast<std::int64_t>(std::ceil(g.lo));
        const auto hi = static_cast<std::int64_t>(std::floor(g.hi));
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        out.push_back(
            WorkloadOp::write(Value::integer(lo + static_cast<std::int64_t>(random::below(bits, span)))));
        break;
      }
      case ValueKind::Boolean: out.push_back(WorkloadOp::write(Value::boolean(bits & 1u))); break;
      default:
        out.push_back(WorkloadOp::write(Value::real(g.lo + (g.hi - g.lo) * random::unit(bits))));
        break;
    }
  }
  return out;
}

namespace {

bool has_writes(const WorkloadSpec& w) {
  if (const auto* ops = std::get_if<std::vector<WorkloadOp>>(&w)) {
    return std::any_of(ops->begin(), ops->end(),
                       [](const WorkloadOp& o) { return o.kind == WorkloadOp::Kind::Write; });
  }
  const auto& g = std::get<WorkloadGenerator>(w);
  return g.count > 0 && g.pattern != WorkloadGenerator::Pattern::Reads;
}

}  // namespace

std::vector<std::string> Scenario::violations() const {
  std::vector<std::string> out;
  const auto cfg = quorum();
  for (auto& v : cfg.violations()) out.push_back(v);
  if (cfg.n > kMaxMatchNodes) {
    out.push_back("n <= " + std::to_string(kMaxMatchNodes) + " required for exact matching");
  }
  if (static_cast<int>(nodes.size()) != cfg.n) {
    out.push_back("scenario defines " + std::to_string(nodes.size()) + " node(s) but n = " +
                  std::to_string(cfg.n));
  }

  if (!(alpha > 0.0 && alpha <= 1.0)) out.emplace_back("protocol alpha must lie in (0, 1]");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    out.emplace_back("protocol epsilon must be finite and >= 0");
  }
  if (net.base_delay < 1) out.emplace_back("net.base_delay must be >= 1 tick");
  if (!(net.drop_prob >= 0.0 && net.drop_prob < 1.0)) {
    out.emplace_back("net.drop_prob must lie in [0, 1)");
  }
  if (request_interval && *request_interval < 1) out.emplace_back("request_interval must be >= 1");

  if (shape.kind == ValueKind::Vector && shape.vector_length == 0) {
    out.emplace_back("vector values need a positive length");
  }
  if (space == MetricSpace::EuclideanVector && shape.kind != ValueKind::Vector) {
    out.emplace_back("the euclidean space needs vector values");
  }
  if (space == MetricSpace::AbsoluteDifference && shape.kind == ValueKind::Vector) {
    out.emplace_back("the absolute space cannot measure vector values");
  }
  const bool numeric = shape.kind == ValueKind::Real || shape.kind == ValueKind::Integer;
  if (policy.kind != Policy::Kind::Random && !numeric) {
    out.push_back("policy " + format_policy(policy) + " needs real or integer values");
  }
  if (!conforms(initial, shape)) {
    out.push_back("initial value does not match kind " + std::string(to_string(shape.kind)));
  }

  const bool writes = has_writes(workload);
  if (mode == ProtocolMode::DetectOnly && writes) {
    out.emplace_back("detect_only mode forbids write operations");
  }
  if (const auto* ops = std::get_if<std::vector<WorkloadOp>>(&workload)) {
    for (std::size_t i = 0; i < ops->size(); ++i) {
      const auto& op = (*ops)[i];
      if (op.kind == WorkloadOp::Kind::Write && !conforms(op.value, shape)) {
        out.push_back("workload write #" + std::to_string(i) + " does not match the value kind");
      }
    }
  } else {
    const auto& g = std::get<WorkloadGenerator>(workload);
    if (!(g.lo <= g.hi)) out.emplace_back("workload generator needs lo <= hi");
    if (writes && !(shape.kind == ValueKind::Real || shape.kind == ValueKind::Integer ||
                    shape.kind == ValueKind::Boolean)) {
      out.emplace_back("generated writes need real, integer or boolean values");
    }
    if (writes && shape.kind == ValueKind::Integer && std::ceil(g.lo) > std::floor(g.hi)) {
      out.emplace_back("workload generator range holds no integer");
    }
  }

  bool proposer = false;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& node = nodes[i];
    const auto where = "node " + std::to_string(node.node_id) + ": ";
    if (node.node_id != static_cast<int>(i)) {
      out.push_back("node ids must be dense 0..n-1 in order; found " +
                    std::to_string(node.node_id) + " at position " + std::to_string(i));
    }
    if (node.roles.has(Role::Proposer)) proposer = true;
    if (node.roles.bits == 0 || node.roles.bits > 7) out.push_back(where + "invalid role set");
    if (node.artira) {
      try {
        Adapter probe(node.artira->triple, space, node.artira->inverse_epsilon,
                      node.artira->inverse_alpha);
        if (writes && !probe.has_inverse()) {
          out.push_back(where + "artira without an inverse cannot accept writes");
        }
      } catch (const ValidationError& e) {
        for (const auto& v : e.violations()) out.push_back(where + v);
      }
      const bool identity = std::holds_alternative<transform::Identity>(node.artira->triple.transform);
      if (!identity && !numeric) out.push_back(where + "transforms need real or integer values");
      if (node.initial && (identity ? !conforms(*node.initial, shape) : !node.initial->is_numeric())) {
        out.push_back(where + "initial state does not fit the transform's domain");
      }
    } else if (node.initial && !conforms(*node.initial, shape)) {
      out.push_back(where + "initial value does not match the value kind");
    }
    for (const auto& ev : node.faults) {
      if (auto v = fault_model_violation(ev, fault_model)) out.push_back(where + *v);
    }
  }
  if (!nodes.empty() && !proposer) out.emplace_back("at least one node needs the proposer role");
  return out;
}

void validate(const Scenario& scenario) {
  auto v = scenario.violations();
  if (!v.empty()) throw ValidationError(std::move(v));
}

}  // namespace aft
