#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aft/adapter.hpp"
#include "aft/consensus.hpp"
#include "aft/metric.hpp"
#include "aft/value.hpp"

namespace aft {

/// How a corrupt node bends its replies.
///   Arbitrary: honest value pushed out by magnitude * (1 + U[0,1)) with a random sign.
///   MaxSkew:   the largest value still within `skew` of the honest one
///              (the protocol epsilon when skew is unset).
///   Mute:      no reply at all.
struct ByzantineStrategy {
  enum class Kind { Arbitrary, MaxSkew, Mute };
  Kind kind = Kind::Mute;
  std::uint64_t seed = 0;
  double magnitude = 100.0;
  std::optional<double> skew;

  static ByzantineStrategy arbitrary(std::uint64_t seed, double magnitude = 100.0) {
    return {Kind::Arbitrary, seed, magnitude, std::nullopt};
  }
  static ByzantineStrategy max_skew(std::optional<double> skew = std::nullopt) {
    return {Kind::MaxSkew, 0, 100.0, skew};
  }
  static ByzantineStrategy mute() { return {}; }

  bool operator==(const ByzantineStrategy&) const = default;
};

std::string format_strategy(const ByzantineStrategy& s);
ByzantineStrategy parse_strategy(std::string_view text);

enum class Role : unsigned { Proposer = 1, Acceptor = 2, Learner = 4 };

struct RoleSet {
  unsigned bits = 7;
  bool has(Role r) const noexcept { return (bits & static_cast<unsigned>(r)) != 0; }
  bool operator==(const RoleSet&) const = default;
};

/// Runtime state of one simulated node: an exact replica, or an artira whose
/// stored state lives in its own domain behind an adapter.
class ReplicaNode {
 public:
  ReplicaNode(int id, RoleSet roles, Value initial_state, std::optional<Adapter> adapter = {});

  int id() const noexcept { return id_; }
  const RoleSet& roles() const noexcept { return roles_; }
  bool is_artira() const noexcept { return adapter_.has_value(); }
  const std::optional<Adapter>& adapter() const noexcept { return adapter_; }
  double declared_epsilon() const noexcept;
  double declared_alpha() const noexcept;

  bool up() const noexcept { return up_; }
  void crash() noexcept { up_ = false; }
  void recover() noexcept { up_ = true; }

  const std::optional<ByzantineStrategy>& byzantine() const noexcept { return byzantine_; }
  void set_byzantine(std::optional<ByzantineStrategy> s) { byzantine_ = std::move(s); }

  /// Stored state, in the node's own domain.
  const Value& raw_state() const noexcept { return state_; }

  /// Executes a write: artiras store F^-1(value) and report F of what they
  /// stored; replicas store and report the value itself.
  Value execute_write(const Value& value);

  /// Honest read of the stored state in the reference domain.
  Value read_state();

  /// What the node actually sends for an honest value: the value itself, a
  /// corrupted one, or nothing (mute).
  std::optional<Value> reply(const Value& honest, double protocol_epsilon);

 private:
  int id_;
  RoleSet roles_;
  Value state_;
  std::optional<Adapter> adapter_;
  bool up_ = true;
  std::optional<ByzantineStrategy> byzantine_;
  std::uint64_t corruptions_ = 0;
};

/// The requester (client) sits outside the quorum.
inline constexpr int kRequesterId = -1;

enum class MessageKind { Request, Propose, Accepted, Learn, Read, ReadReply };

std::string_view to_string(MessageKind kind);

struct Envelope {
  int from = kRequesterId;
  int to = kRequesterId;
  MessageKind kind = MessageKind::Request;
};

struct ExchangeStats {
  std::size_t sent = 0;
  std::size_t delivered = 0;
};

/// Message delivery seen by the protocol. One call carries one round: every
/// envelope in the batch leaves together, and `deliver` runs for each one
/// that reaches a live receiver, in arrival order. Messages from a node that
/// is down are never sent.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual ExchangeStats exchange(std::span<const Envelope> batch,
                                 const std::function<void(const Envelope&)>& deliver) = 0;
};

/// Lossless zero-delay delivery among the given nodes; down nodes neither
/// send nor receive.
class InstantTransport final : public Transport {
 public:
  explicit InstantTransport(std::span<const ReplicaNode> nodes) : nodes_(nodes) {}
  ExchangeStats exchange(std::span<const Envelope> batch,
                         const std::function<void(const Envelope&)>& deliver) override;

 private:
  bool up(int id) const;
  std::span<const ReplicaNode> nodes_;
};

enum class WriteMode { LeaderState, Vector };

std::string_view to_string(WriteMode mode);

enum class Outcome { Committed, NoQuorum, LearnLost, Detected };

std::string_view to_string(Outcome outcome);

/// Everything one request produced.
struct Decision {
  bool committed = false;
  Outcome outcome = Outcome::NoQuorum;
  std::optional<Value> learned;  // set only when the requester learned a value
  std::map<int, Value> per_node_states;  // replies as received
  std::set<int> vetoes;  // acceptors whose state broke the bound against the proposer
  std::size_t message_count = 0;
  MatchSet match;
  int proposer_id = kRequesterId;
  std::optional<FaultReport> detection;
};

/// Protocol parameters shared by reads, writes and detection.
struct PhaseParams {
  QuorumConfig cfg;
  Policy policy = Policy::median();
  MetricSpace space = MetricSpace::AbsoluteDifference;
  double epsilon = 0.0;
  double alpha = 1.0;
  std::uint64_t round = 0;
};

/// Propose / Accept / Learn for one write, one message round per phase.
///
/// Propose: the requester hands the value to the lowest-id live proposer,
/// which executes it and broadcasts the value with its own post-state.
/// Accept: every receiving node executes the value and replies with its
/// post-state; a node whose state is farther from the proposer's than the
/// pair radius vetoes. The proposer matches its state with the non-vetoing
/// replies and commits on a quorum. LeaderState learns the proposer's state
/// (the quorum must include it); Vector applies the policy to the matched
/// states. Learn: the proposer reports to the requester.
Decision run_phase_write(const Value& proposal, std::span<ReplicaNode> nodes, WriteMode mode,
                         const PhaseParams& params, Transport& transport);

/// The requester asks every node directly and applies the policy to the
/// matched replies.
Decision run_phase_read(std::span<ReplicaNode> nodes, const PhaseParams& params,
                        Transport& transport);

/// As a read, but the replies only feed detect_fault; nothing is committed.
Decision run_phase_detect(std::span<ReplicaNode> nodes, const PhaseParams& params,
                          Transport& transport);

}  // namespace aft
