#include "aft/simnet.hpp"

#include <algorithm>

#include "aft/random.hpp"

namespace aft {

/// Transport backed by the event queue. Each exchange schedules its
/// deliveries, then runs the queue until they have all landed, applying any
/// fault events that fall in between.
class Simulation::Network final : public Transport {
 public:
  explicit Network(Simulation& sim) : sim_(sim) {}

  ExchangeStats exchange(std::span<const Envelope> batch,
                         const std::function<void(const Envelope&)>& deliver) override {
    const auto& net = sim_.scenario_.net;
    const Tick start = sim_.queue_.now();
    ExchangeStats stats;
    std::vector<std::pair<std::size_t, std::size_t>> slots;  // (batch index, message record)
    std::size_t pending = 0;

    for (std::size_t i = 0; i < batch.size(); ++i) {
      const auto& e = batch[i];
      if (!up(e.from)) continue;
      ++stats.sent;
      const auto n = channel_counter_[{e.from, e.to}]++;
      const auto key = [&](std::uint64_t stream) {
        return random::hash({stream, sim_.scenario_.seed, static_cast<std::uint64_t>(e.from + 1),
                             static_cast<std::uint64_t>(e.to + 1), n});
      };
      MessageRecord rec;
      rec.sent_at = start;
      rec.from = e.from;
      rec.to = e.to;
      rec.kind = e.kind;
      rec.request = sim_.request_counter_;
      rec.arrive_at = start + net.base_delay +
                      (net.jitter ? random::below(key(random::kJitterStream), net.jitter + 1) : 0);
      const bool dropped =
          net.drop_prob > 0.0 && random::unit(key(random::kDropStream)) < net.drop_prob;
      sim_.messages_.push_back(rec);
      if (dropped) continue;
      slots.emplace_back(i, sim_.messages_.size() - 1);
      sim_.queue_.schedule(rec.arrive_at, Delivery{slots.size() - 1});
      ++pending;
    }

    while (pending > 0) {
      auto ev = sim_.queue_.pop();
      if (auto* f = std::get_if<FaultAction>(&ev.payload)) {
        sim_.apply(*f);
        continue;
      }
      const auto [index, record] = slots[std::get<Delivery>(ev.payload).slot];
      --pending;
      const auto& e = batch[index];
      if (!up(e.to)) continue;  // lost at a crashed receiver
      sim_.messages_[record].delivered = true;
      ++stats.delivered;
      deliver(e);
    }
    // The round lasts its worst-case delay whether or not messages arrived early.
    sim_.advance_to(start + net.base_delay + net.jitter);
    return stats;
  }

 private:
  bool up(int id) const {
    return id == kRequesterId || sim_.nodes_.at(static_cast<std::size_t>(id)).up();
  }

  Simulation& sim_;
  std::map<std::pair<int, int>, std::uint64_t> channel_counter_;
};

Simulation::Simulation(Scenario scenario)
    : scenario_(std::move(scenario)), cfg_(scenario_.quorum()), reference_(scenario_.initial) {
  validate(scenario_);
  network_ = std::make_unique<Network>(*this);
  nodes_.reserve(scenario_.nodes.size());
  for (const auto& spec : scenario_.nodes) {
    std::optional<Adapter> adapter;
    if (spec.artira) {
      adapter.emplace(spec.artira->triple, scenario_.space, spec.artira->inverse_epsilon,
                      spec.artira->inverse_alpha);
    }
    Value initial = scenario_.initial;
    if (spec.initial) {
      initial = *spec.initial;
    } else if (adapter && adapter->has_inverse()) {
      initial = adapter->encode(scenario_.initial);
    }
    nodes_.emplace_back(spec.node_id, spec.roles, std::move(initial), std::move(adapter));
  }
  for (const auto& spec : scenario_.nodes) {
    for (const auto& ev : spec.faults) schedule_fault(spec.node_id, ev);
  }
}

Simulation::~Simulation() = default;

Tick Simulation::now() const noexcept { return queue_.now(); }

void Simulation::schedule_fault(int node_id, const FaultEvent& event) {
  if (node_id < 0 || node_id >= static_cast<int>(nodes_.size())) {
    throw ValidationError({"no node " + std::to_string(node_id)});
  }
  if (auto v = fault_model_violation(event, scenario_.fault_model)) throw ModelMismatch(*v);
  queue_.schedule(event.at, FaultAction{node_id, event});
}

void Simulation::inject(int node_id, const FaultEvent& event) {
  if (node_id < 0 || node_id >= static_cast<int>(nodes_.size())) {
    throw ValidationError({"no node " + std::to_string(node_id)});
  }
  if (auto v = fault_model_violation(event, scenario_.fault_model)) throw ModelMismatch(*v);
  apply({node_id, event});
}

void Simulation::apply(const FaultAction& action) {
  auto& node = nodes_.at(static_cast<std::size_t>(action.node_id));
  switch (action.event.kind) {
    case FaultEvent::Kind::Crash:
      // Stored state and adapter counters are durable; a crash-stop node
      // simply never comes back.
      node.crash();
      break;
    case FaultEvent::Kind::Recover: node.recover(); break;
    case FaultEvent::Kind::ByzantineOn:
      node.set_byzantine(action.event.strategy.value_or(ByzantineStrategy::mute()));
      break;
    case FaultEvent::Kind::ByzantineOff: node.set_byzantine(std::nullopt); break;
  }
}

void Simulation::advance_to(Tick tick) {
  while (!queue_.empty() && queue_.next_time() <= tick) {
    auto ev = queue_.pop();
    // Deliveries never outlive their exchange, so only faults remain here.
    if (auto* f = std::get_if<FaultAction>(&ev.payload)) apply(*f);
  }
  queue_.advance(tick);
}

PhaseParams Simulation::params() const {
  PhaseParams p;
  p.cfg = cfg_;
  p.policy = scenario_.policy;
  p.space = scenario_.space;
  p.epsilon = scenario_.epsilon;
  p.alpha = scenario_.alpha;
  p.round = request_counter_;
  return p;
}

Decision Simulation::issue(const WorkloadOp& op, RequestRecord* record) {
  if (record) {
    record->index = request_counter_;
    record->kind = op.kind;
    record->issued_at = now();
    for (const auto& n : nodes_) {
      if (n.byzantine()) record->faulty.insert(n.id());
    }
  }
  Decision d;
  Value reference = reference_;
  if (op.kind == WorkloadOp::Kind::Write) {
    const auto mode = scenario_.mode == ProtocolMode::LeaderState ? WriteMode::LeaderState
                                                                  : WriteMode::Vector;
    d = run_phase_write(op.value, nodes_, mode, params(), *network_);
    // A proposer that died mid-request is replaced: the requester times out
    // and hands the value to the next live proposer. Other failures stand.
    std::size_t messages = d.message_count;
    for (std::size_t attempt = 1; attempt < nodes_.size() && !d.committed &&
                                  d.proposer_id != kRequesterId &&
                                  !nodes_[static_cast<std::size_t>(d.proposer_id)].up();
         ++attempt) {
      d = run_phase_write(op.value, nodes_, mode, params(), *network_);
      messages += d.message_count;
    }
    d.message_count = messages;
    reference = op.value;
    if (d.committed) reference_ = op.value;
  } else if (scenario_.mode == ProtocolMode::DetectOnly) {
    d = run_phase_detect(nodes_, params(), *network_);
  } else {
    d = run_phase_read(nodes_, params(), *network_);
  }
  ++request_counter_;
  if (record) {
    record->reference = std::move(reference);
    record->decision = d;
  }
  return d;
}

Decision Simulation::write(const Value& proposal) {
  return issue(WorkloadOp::write(proposal), nullptr);
}

Decision Simulation::read() { return issue(WorkloadOp::read(), nullptr); }

Decision Simulation::detect() {
  if (scenario_.mode == ProtocolMode::DetectOnly) return issue(WorkloadOp::read(), nullptr);
  PhaseParams p = params();
  auto d = run_phase_detect(nodes_, p, *network_);
  ++request_counter_;
  return d;
}

RunResult Simulation::run() {
  RunResult result;
  const auto ops = scenario_.expand_workload();
  const Tick base = now();
  result.requests.reserve(ops.size());
  for (std::size_t i = 0; i < ops.size(); ++i) {
    advance_to(std::max(now(), base + static_cast<Tick>(i) * scenario_.interval()));
    RequestRecord rec;
    issue(ops[i], &rec);
    result.requests.push_back(std::move(rec));
  }
  result.messages = messages_;
  result.metrics = summarize(scenario_, result.requests, result.messages);
  return result;
}

Metrics summarize(const Scenario& scenario, const std::vector<RequestRecord>& requests,
                  const std::vector<MessageRecord>& messages) {
  Metrics m;
  m.requests = requests.size();
  m.replication_factor = scenario.quorum().n;
  m.messages_sent = messages.size();
  m.messages_delivered = static_cast<std::size_t>(
      std::count_if(messages.begin(), messages.end(), [](const auto& r) { return r.delivered; }));
  m.messages_dropped = m.messages_sent - m.messages_delivered;

  std::size_t committed = 0, learned = 0;
  double error_sum = 0.0;
  std::size_t tp = 0, fp = 0, fn = 0;
  for (const auto& r : requests) {
    const auto& d = r.decision;
    if (d.committed) ++committed;
    if (d.learned) {
      const double e = distance(scenario.space, *d.learned, r.reference);
      error_sum += e;
      m.max_abs_error = std::max(m.max_abs_error, e);
      ++learned;
    }
    if (d.detection) {
      const auto& suspects = d.detection->suspects;
      for (int s : suspects) (r.faulty.count(s) ? tp : fp) += 1;
      for (int bad : r.faulty) {
        const bool responded = d.per_node_states.count(bad) > 0;
        const bool caught = std::find(suspects.begin(), suspects.end(), bad) != suspects.end();
        if (responded && !caught) ++fn;
      }
    }
  }
  if (!requests.empty()) {
    m.commit_rate = static_cast<double>(committed) / static_cast<double>(requests.size());
  }
  if (learned) m.mean_abs_error = error_sum / static_cast<double>(learned);
  if (tp + fp) m.detection_precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  if (tp + fn) m.detection_recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  return m;
}

RunResult run(const Scenario& scenario) { return Simulation(scenario).run(); }

}  // namespace aft
