#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "aft/error.hpp"
#include "aft/protocol.hpp"
#include "aft/scenario.hpp"

namespace aft {

/// Priority queue of timed events ordered by (time, insertion sequence), so
/// events at equal times come out first-in first-out. Popping advances the
/// clock to the event's time.
template <class Payload>
class EventQueue {
 public:
  struct Entry {
    Tick at;
    std::uint64_t seq;
    Payload payload;
  };

  Tick now() const noexcept { return now_; }
  bool empty() const noexcept { return heap_.empty(); }
  std::size_t size() const noexcept { return heap_.size(); }

  /// Throws PastEvent when `at` is earlier than the current clock.
  void schedule(Tick at, Payload payload) {
    if (at < now_) {
      throw PastEvent("event at tick " + std::to_string(at) + " is before now (" +
                      std::to_string(now_) + ")");
    }
    heap_.push(Entry{at, next_seq_++, std::move(payload)});
  }

  Tick next_time() const { return heap_.top().at; }

  Entry pop() {
    Entry e = heap_.top();
    heap_.pop();
    now_ = e.at;
    return e;
  }

  /// Moves the clock forward without an event; never backward.
  void advance(Tick to) {
    if (to > now_) now_ = to;
  }

 private:
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      return a.at != b.at ? a.at > b.at : a.seq > b.seq;
    }
  };

  std::priority_queue<Entry, std::vector<Entry>, Later> heap_;
  Tick now_ = 0;
  std::uint64_t next_seq_ = 0;
};

struct MessageRecord {
  Tick sent_at = 0;
  Tick arrive_at = 0;
  int from = kRequesterId;
  int to = kRequesterId;
  MessageKind kind = MessageKind::Request;
  bool delivered = false;
  std::size_t request = 0;
};

struct RequestRecord {
  std::size_t index = 0;
  WorkloadOp::Kind kind = WorkloadOp::Kind::Read;
  Tick issued_at = 0;
  Value reference;
  Decision decision;
  std::set<int> faulty;  // nodes behaving byzantine when the request was issued
};

struct RunResult {
  std::vector<RequestRecord> requests;
  Metrics metrics;
  std::vector<MessageRecord> messages;
};

/// One simulation instance: nodes, network and fault schedule, all driven by
/// a logical clock and replayable from the scenario seed. Single-threaded;
/// distinct instances share nothing.
class Simulation {
 public:
  /// Validates the scenario (ValidationError) and schedules its fault events.
  explicit Simulation(Scenario scenario);
  ~Simulation();
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  Tick now() const noexcept;
  const Scenario& scenario() const noexcept { return scenario_; }
  const ReplicaNode& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }

  /// Queues a fault for a future tick. Throws PastEvent or ModelMismatch.
  void schedule_fault(int node_id, const FaultEvent& event);

  /// Applies a fault immediately. Throws ModelMismatch when the event is not
  /// allowed under the scenario's fault model.
  void inject(int node_id, const FaultEvent& event);

  /// Applies every queued fault up to and including `tick`.
  void advance_to(Tick tick);

  /// Issue one request at the current tick.
  Decision write(const Value& proposal);
  Decision read();
  Decision detect();

  /// Runs the scenario workload, one request every scenario().interval() ticks.
  RunResult run();

  const std::vector<MessageRecord>& messages() const noexcept { return messages_; }

 private:
  class Network;
  struct FaultAction {
    int node_id;
    FaultEvent event;
  };
  struct Delivery {
    std::size_t slot;
  };
  using Event = std::variant<FaultAction, Delivery>;

  void apply(const FaultAction& action);
  PhaseParams params() const;
  Decision issue(const WorkloadOp& op, RequestRecord* record);

  Scenario scenario_;
  QuorumConfig cfg_;
  std::vector<ReplicaNode> nodes_;
  EventQueue<Event> queue_;
  std::unique_ptr<Network> network_;
  std::vector<MessageRecord> messages_;
  std::size_t request_counter_ = 0;
  Value reference_;
};

/// Metrics over finished requests.
Metrics summarize(const Scenario& scenario, const std::vector<RequestRecord>& requests,
                  const std::vector<MessageRecord>& messages);

/// Simulation(scenario).run().
RunResult run(const Scenario& scenario);

}  // namespace aft
