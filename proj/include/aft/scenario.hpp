#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "aft/artira.hpp"
#include "aft/consensus.hpp"
#include "aft/metric.hpp"
#include "aft/protocol.hpp"
#include "aft/value.hpp"

namespace aft {

using Tick = std::uint64_t;

struct FaultEvent {
  enum class Kind { Crash, Recover, ByzantineOn, ByzantineOff };
  Tick at = 0;
  Kind kind = Kind::Crash;
  std::optional<ByzantineStrategy> strategy;  // ByzantineOn only

  static FaultEvent crash(Tick at) { return {at, Kind::Crash, std::nullopt}; }
  static FaultEvent recover(Tick at) { return {at, Kind::Recover, std::nullopt}; }
  static FaultEvent byzantine_on(Tick at, ByzantineStrategy s) { return {at, Kind::ByzantineOn, s}; }
  static FaultEvent byzantine_off(Tick at) { return {at, Kind::ByzantineOff, std::nullopt}; }

  bool operator==(const FaultEvent&) const = default;
};

std::string format_fault(const FaultEvent& e);
FaultEvent parse_fault(std::string_view text);

/// Violation message if the event is not allowed under the fault model.
std::optional<std::string> fault_model_violation(const FaultEvent& e, FaultModel model);

/// Certification of an artira node plus the uncertainty of its coder.
struct ArtiraSpec {
  ArtiraTriple triple;
  double inverse_epsilon = 0.0;
  double inverse_alpha = 1.0;

  bool operator==(const ArtiraSpec&) const = default;
};

struct NodeSpec {
  int node_id = 0;
  RoleSet roles;
  std::optional<ArtiraSpec> artira;  // exact replica when empty
  std::optional<Value> initial;      // stored state in the node's own domain
  std::vector<FaultEvent> faults;

  bool operator==(const NodeSpec&) const = default;
};

struct NetModel {
  Tick base_delay = 1;
  Tick jitter = 0;
  double drop_prob = 0.0;

  bool operator==(const NetModel&) const = default;
};

enum class ProtocolMode { LeaderState, Vector, DetectOnly };

std::string_view to_string(ProtocolMode mode);
ProtocolMode parse_protocol_mode(std::string_view text);

struct WorkloadOp {
  enum class Kind { Write, Read };
  Kind kind = Kind::Read;
  Value value;  // Write only

  static WorkloadOp write(Value v) { return {Kind::Write, std::move(v)}; }
  static WorkloadOp read() { return {Kind::Read, Value{}}; }

  bool operator==(const WorkloadOp&) const = default;
};

std::string_view to_string(WorkloadOp::Kind kind);

/// Seeded workload: `count` operations, write values uniform in [lo, hi].
/// Mixed alternates write, read, write, ...
struct WorkloadGenerator {
  enum class Pattern { Writes, Reads, Mixed };
  Pattern pattern = Pattern::Writes;
  std::size_t count = 0;
  double lo = 0.0;
  double hi = 1.0;

  bool operator==(const WorkloadGenerator&) const = default;
};

using WorkloadSpec = std::variant<std::vector<WorkloadOp>, WorkloadGenerator>;

/// A complete reproducible experiment.
struct Scenario {
  std::string name = "scenario";
  std::uint64_t seed = 0;
  FaultModel fault_model = FaultModel::CrashStop;
  int f = 1;
  std::optional<int> n;  // defaults from f and the fault model
  std::optional<int> q;
  std::vector<NodeSpec> nodes;
  NetModel net;
  ProtocolMode mode = ProtocolMode::Vector;
  Policy policy = Policy::median();
  double epsilon = 0.0;
  double alpha = 1.0;
  MetricSpace space = MetricSpace::AbsoluteDifference;
  ValueShape shape;
  Value initial = Value::real(0.0);  // reference-domain starting state
  WorkloadSpec workload = std::vector<WorkloadOp>{};
  std::optional<Tick> request_interval;

  QuorumConfig quorum() const;

  /// Ticks between request starts; long enough for one request to finish.
  Tick interval() const;

  /// Concrete operation list; generated workloads are keyed by the seed.
  std::vector<WorkloadOp> expand_workload() const;

  /// Every violated invariant; empty when valid.
  std::vector<std::string> violations() const;

  bool operator==(const Scenario&) const = default;
};

/// Throws ValidationError listing every violation.
void validate(const Scenario& scenario);

struct Metrics {
  std::size_t requests = 0;
  double commit_rate = 0.0;
  double mean_abs_error = 0.0;
  double max_abs_error = 0.0;
  std::size_t messages_sent = 0;
  std::size_t messages_delivered = 0;
  std::size_t messages_dropped = 0;
  int replication_factor = 0;
  // Vacuously 1 when the run performed no detection.
  double detection_precision = 1.0;
  double detection_recall = 1.0;

  bool operator==(const Metrics&) const = default;
};

}  // namespace aft
