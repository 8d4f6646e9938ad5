#include "aft/protocol.hpp"

#include <algorithm>
#include <cmath>

#include "aft/error.hpp"
#include "aft/random.hpp"
#include "text_util.hpp"

namespace aft {

std::string format_strategy(const ByzantineStrategy& s) {
  switch (s.kind) {
    case ByzantineStrategy::Kind::Arbitrary:
      return "arbitrary(" + std::to_string(s.seed) + ", " + format_real(s.magnitude) + ")";
    case ByzantineStrategy::Kind::MaxSkew:
      return s.skew ? "maxskew(" + format_real(*s.skew) + ")" : "maxskew";
    case ByzantineStrategy::Kind::Mute: return "mute";
  }
  return "?";
}

ByzantineStrategy parse_strategy(std::string_view text) {
  std::string_view name, args;
  if (!detail::split_call(text, name, args)) {
    throw DomainError("malformed byzantine strategy '" + std::string(text) + "'");
  }
  const auto n = detail::lower(name);
  std::vector<std::string_view> argv;
  if (!args.empty()) argv = detail::split_top_level(args);
  if (n == "mute" && argv.empty()) return ByzantineStrategy::mute();
  if (n == "maxskew" || n == "max_skew") {
    if (argv.empty()) return ByzantineStrategy::max_skew();
    if (argv.size() == 1) {
      const double skew = parse_real(argv[0]);
      if (!(skew >= 0.0)) throw DomainError("maxskew bound must be >= 0");
      return ByzantineStrategy::max_skew(skew);
    }
  }
  if (n == "arbitrary" && (argv.size() == 1 || argv.size() == 2)) {
    const auto seed = parse_integer(argv[0]);
    if (seed < 0) throw DomainError("arbitrary seed must be non-negative");
    const double magnitude = argv.size() == 2 ? parse_real(argv[1]) : 100.0;
    if (!(magnitude > 0.0)) throw DomainError("arbitrary magnitude must be > 0");
    return ByzantineStrategy::arbitrary(static_cast<std::uint64_t>(seed), magnitude);
  }
  throw DomainError("unknown byzantine strategy '" + std::string(text) + "'");
}

ReplicaNode::ReplicaNode(int id, RoleSet roles, Value initial_state, std::optional<Adapter> adapter)
    : id_(id), roles_(roles), state_(std::move(initial_state)), adapter_(std::move(adapter)) {}

double ReplicaNode::declared_epsilon() const noexcept {
  return adapter_ ? adapter_->effective_epsilon() : 0.0;
}

double ReplicaNode::declared_alpha() const noexcept {
  return adapter_ ? adapter_->effective_alpha() : 1.0;
}

Value ReplicaNode::execute_write(const Value& value) {
  if (!adapter_) {
    state_ = value;
    return state_;
  }
  state_ = adapter_->encode(value);
  return adapter_->decode(state_);
}

Value ReplicaNode::read_state() { return adapter_ ? adapter_->decode(state_) : state_; }

std::optional<Value> ReplicaNode::reply(const Value& honest, double protocol_epsilon) {
  if (!byzantine_) return honest;
  const auto& s = *byzantine_;
  switch (s.kind) {
    case ByzantineStrategy::Kind::Mute: return std::nullopt;
    case ByzantineStrategy::Kind::MaxSkew: {
      const double skew = s.skew.value_or(protocol_epsilon);
      if (honest.kind() == ValueKind::Real) return Value::real(max_within(honest.as_real(), skew));
      if (honest.kind() == ValueKind::Integer) {
        return Value::integer(honest.as_integer() + static_cast<std::int64_t>(std::floor(skew)));
      }
      return honest;
    }
    case ByzantineStrategy::Kind::Arbitrary: {
      const auto n = corruptions_++;
      const auto bits = [&](std::uint64_t lane) {
        return random::hash({random::kByzantineStream, s.seed, static_cast<std::uint64_t>(id_),
                             n, lane});
      };
      const double sign = (bits(0) & 1u) ? 1.0 : -1.0;
      const double shift = sign * s.magnitude * (1.0 + random::unit(bits(1)));
      if (honest.kind() == ValueKind::Real) return Value::real(honest.as_real() + shift);
      if (honest.kind() == ValueKind::Integer) {
        return Value::integer(honest.as_integer() + static_cast<std::int64_t>(std::llround(shift)));
      }
      if (honest.kind() == ValueKind::Boolean) return Value::boolean(!honest.as_boolean());
      return honest;
    }
  }
  return honest;
}

std::string_view to_string(MessageKind kind) {
  switch (kind) {
    case MessageKind::Request: return "request";
    case MessageKind::Propose: return "propose";
    case MessageKind::Accepted: return "accepted";
    case MessageKind::Learn: return "learn";
    case MessageKind::Read: return "read";
    case MessageKind::ReadReply: return "read_reply";
  }
  return "?";
}

bool InstantTransport::up(int id) const {
  if (id == kRequesterId) return true;
  for (const auto& n : nodes_) {
    if (n.id() == id) return n.up();
  }
  return false;
}

ExchangeStats InstantTransport::exchange(std::span<const Envelope> batch,
                                         const std::function<void(const Envelope&)>& deliver) {
  ExchangeStats stats;
  std::vector<const Envelope*> sent;
  for (const auto& e : batch) {
    if (!up(e.from)) continue;
    ++stats.sent;
    sent.push_back(&e);
  }
  for (const auto* e : sent) {
    if (!up(e->to)) continue;
    ++stats.delivered;
    deliver(*e);
  }
  return stats;
}

std::string_view to_string(WriteMode mode) {
  switch (mode) {
    case WriteMode::LeaderState: return "leader_state";
    case WriteMode::Vector: return "vector";
  }
  return "?";
}

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Committed: return "committed";
    case Outcome::NoQuorum: return "no_quorum";
    case Outcome::LearnLost: return "learn_lost";
    case Outcome::Detected: return "detected";
  }
  return "?";
}

namespace {

ReplicaNode* find_node(std::span<ReplicaNode> nodes, int id) {
  for (auto& n : nodes) {
    if (n.id() == id) return &n;
  }
  return nullptr;
}

Response response_for(const ReplicaNode& node, Value value, std::uint64_t round) {
  Response r;
  r.node_id = node.id();
  r.value = std::move(value);
  r.is_artira = node.is_artira();
  r.declared_epsilon = node.declared_epsilon();
  r.declared_alpha = node.declared_alpha();
  r.round = round;
  return r;
}

// Request broadcast to every node and the replies straight back.
std::vector<Response> collect_reads(std::span<ReplicaNode> nodes, const PhaseParams& params,
                                    Transport& transport, Decision& d) {
  std::vector<Envelope> requests;
  for (const auto& n : nodes) requests.push_back({kRequesterId, n.id(), MessageKind::Read});

  std::vector<std::pair<int, Value>> pending;
  d.message_count += transport.exchange(requests, [&](const Envelope& e) {
    auto* node = find_node(nodes, e.to);
    if (auto v = node->reply(node->read_state(), params.epsilon)) {
      pending.emplace_back(node->id(), std::move(*v));
    }
  }).sent;

  std::vector<Envelope> replies;
  for (const auto& [id, v] : pending) replies.push_back({id, kRequesterId, MessageKind::ReadReply});

  std::vector<Response> responses;
  d.message_count += transport.exchange(replies, [&](const Envelope& e) {
    for (auto& [id, v] : pending) {
      if (id != e.from) continue;
      responses.push_back(response_for(*find_node(nodes, id), v, params.round));
      d.per_node_states.emplace(id, v);
    }
  }).sent;
  return responses;
}

}  // namespace

Decision run_phase_write(const Value& proposal, std::span<ReplicaNode> nodes, WriteMode mode,
                         const PhaseParams& params, Transport& transport) {
  Decision d;
  ReplicaNode* proposer = nullptr;
  for (auto& n : nodes) {
    if (n.up() && n.roles().has(Role::Proposer) && (!proposer || n.id() < proposer->id())) {
      proposer = &n;
    }
  }
  if (!proposer) return d;
  d.proposer_id = proposer->id();

  // Propose.
  bool received = false;
  const Envelope request{kRequesterId, proposer->id(), MessageKind::Request};
  d.message_count +=
      transport.exchange({&request, 1}, [&](const Envelope&) { received = true; }).sent;
  if (!received) return d;

  const auto leader_reply = proposer->reply(proposer->execute_write(proposal), params.epsilon);
  if (!leader_reply) return d;  // a mute proposer stalls the request
  const Response leader = response_for(*proposer, *leader_reply, params.round);

  std::vector<Envelope> proposals;
  for (const auto& n : nodes) {
    if (n.id() != proposer->id() && n.roles().has(Role::Acceptor)) {
      proposals.push_back({proposer->id(), n.id(), MessageKind::Propose});
    }
  }

  // Accept.
  struct Ack {
    int id;
    Value state;
    bool veto;
  };
  std::vector<Ack> acks;
  d.message_count += transport.exchange(proposals, [&](const Envelope& e) {
    auto* node = find_node(nodes, e.to);
    const Value state = node->execute_write(proposal);
    const auto own = response_for(*node, state, params.round);
    // Bound check against the piggybacked proposer state.
    const bool veto = distance(params.space, state, leader.value) >
                      pair_radius(own, leader, params.epsilon);
    if (auto v = node->reply(state, params.epsilon)) acks.push_back({node->id(), std::move(*v), veto});
  }).sent;

  std::vector<Envelope> replies;
  for (const auto& a : acks) replies.push_back({a.id, proposer->id(), MessageKind::Accepted});

  std::vector<Response> states{leader};
  d.per_node_states.emplace(leader.node_id, leader.value);
  d.message_count += transport.exchange(replies, [&](const Envelope& e) {
    for (const auto& a : acks) {
      if (a.id != e.from) continue;
      d.per_node_states.emplace(a.id, a.state);
      if (a.veto) {
        d.vetoes.insert(a.id);
      } else {
        states.push_back(response_for(*find_node(nodes, a.id), a.state, params.round));
      }
    }
  }).sent;

  d.match = mode == WriteMode::LeaderState
                ? aft_match_anchored(states, params.cfg, params.space, params.epsilon,
                                     params.alpha, leader.node_id)
                : aft_match(states, params.cfg, params.space, params.epsilon, params.alpha);
  if (!d.match.matched) return d;

  // Committed at the end of Accept.
  d.committed = true;
  d.outcome = Outcome::LearnLost;
  const Value chosen = mode == WriteMode::LeaderState ? leader.value
                                                      : aft_value(d.match, states, params.policy);

  // Learn.
  const Envelope learn{proposer->id(), kRequesterId, MessageKind::Learn};
  d.message_count += transport.exchange({&learn, 1}, [&](const Envelope&) {
    d.learned = chosen;
    d.outcome = Outcome::Committed;
  }).sent;
  return d;
}

Decision run_phase_read(std::span<ReplicaNode> nodes, const PhaseParams& params,
                        Transport& transport) {
  Decision d;
  const auto responses = collect_reads(nodes, params, transport, d);
  d.match = aft_match(responses, params.cfg, params.space, params.epsilon, params.alpha);
  if (!d.match.matched) return d;
  d.committed = true;
  d.outcome = Outcome::Committed;
  d.learned = aft_value(d.match, responses, params.policy);
  return d;
}

Decision run_phase_detect(std::span<ReplicaNode> nodes, const PhaseParams& params,
                          Transport& transport) {
  Decision d;
  const auto responses = collect_reads(nodes, params, transport, d);
  d.outcome = Outcome::Detected;
  d.detection = detect_fault(responses, params.cfg, params.space, params.epsilon, params.alpha);
  d.match = d.detection->clique;
  return d;
}

}  // namespace aft
