#include <doctest.h>

#include <random>
#include <vector>

#include "aft/error.hpp"
#include "aft/protocol.hpp"

using namespace aft;

namespace {

std::vector<ReplicaNode> three_replicas(double initial = 0.0) {
  std::vector<ReplicaNode> nodes;
  for (int i = 0; i < 3; ++i) nodes.emplace_back(i, RoleSet{}, Value::real(initial));
  return nodes;
}

PhaseParams params(int n, int q, double eps = 0.0, Policy policy = Policy::median()) {
  PhaseParams p;
  p.cfg = {n, 1, q, FaultModel::Byzantine};
  p.epsilon = eps;
  p.policy = policy;
  return p;
}

// Delivers everything except one message kind.
class Dropping final : public Transport {
 public:
  Dropping(std::span<const ReplicaNode> nodes, MessageKind lost) : inner_(nodes), lost_(lost) {}
  ExchangeStats exchange(std::span<const Envelope> batch,
                         const std::function<void(const Envelope&)>& deliver) override {
    return inner_.exchange(batch, [&](const Envelope& e) {
      if (e.kind != lost_) deliver(e);
    });
  }

 private:
  InstantTransport inner_;
  MessageKind lost_;
};

}  // namespace

TEST_CASE("a fault-free write commits everywhere") {
  auto nodes = three_replicas();
  InstantTransport t(nodes);
  const auto d = run_phase_write(Value::real(4.5), nodes, WriteMode::LeaderState, params(3, 2), t);
  CHECK(d.committed);
  CHECK(d.outcome == Outcome::Committed);
  CHECK(d.learned == Value::real(4.5));
  CHECK(d.proposer_id == 0);
  CHECK(d.match.member_ids == std::vector<int>{0, 1, 2});
  // request, two proposals, two replies, learn
  CHECK(d.message_count == 6);
  for (auto& n : nodes) CHECK(n.raw_state() == Value::real(4.5));
}

TEST_CASE("the proposer is the lowest live proposer") {
  auto nodes = three_replicas();
  nodes[0].crash();
  InstantTransport t(nodes);
  const auto d = run_phase_write(Value::real(1), nodes, WriteMode::LeaderState, params(3, 2), t);
  CHECK(d.committed);
  CHECK(d.proposer_id == 1);
  CHECK(nodes[0].raw_state() == Value::real(0));
}

TEST_CASE("too many crashes leave the write uncommitted") {
  auto nodes = three_replicas();
  nodes[1].crash();
  nodes[2].crash();
  InstantTransport t(nodes);
  const auto d = run_phase_write(Value::real(1), nodes, WriteMode::Vector, params(3, 2), t);
  CHECK_FALSE(d.committed);
  CHECK(d.outcome == Outcome::NoQuorum);
  CHECK_FALSE(d.learned.has_value());
}

TEST_CASE("a lost learn message still counts as committed") {
  auto nodes = three_replicas();
  Dropping t(nodes, MessageKind::Learn);
  const auto d = run_phase_write(Value::real(2), nodes, WriteMode::Vector, params(3, 2), t);
  CHECK(d.committed);
  CHECK(d.outcome == Outcome::LearnLost);
  CHECK_FALSE(d.learned.has_value());
}

TEST_CASE("artiras store the coded value") {
  std::vector<ReplicaNode> nodes = three_replicas();
  nodes[2] = ReplicaNode(2, RoleSet{}, Value::real(32),
                         Adapter(make_triple(transform::Affine{5.0 / 9.0, -160.0 / 9.0}, 1, 0)));
  InstantTransport t(nodes);
  const auto d = run_phase_write(Value::real(100), nodes, WriteMode::Vector, params(3, 3), t);
  CHECK(d.committed);
  CHECK(nodes[2].raw_state() == Value::real(212));
  CHECK(d.per_node_states.at(2) == Value::real(100));
  CHECK(run_phase_read(nodes, params(3, 3), t).learned == Value::real(100));
}

TEST_CASE("a lying acceptor is left out of the match") {
  auto nodes = three_replicas();
  nodes.emplace_back(3, RoleSet{}, Value::real(0));
  nodes[3].set_byzantine(ByzantineStrategy::arbitrary(1, 50));
  InstantTransport t(nodes);
  const auto d = run_phase_write(Value::real(7), nodes, WriteMode::LeaderState, params(4, 3, 0.5), t);
  CHECK(d.committed);
  CHECK(d.vetoes.empty());  // the honest post-state is checked, the lie goes out after
  CHECK_FALSE(d.match.contains(3));
  CHECK(d.learned == Value::real(7));
}

TEST_CASE("vector mode applies the policy to matched states") {
  std::vector<ReplicaNode> nodes = three_replicas();
  nodes[1] = ReplicaNode(1, RoleSet{}, Value::real(0),
                         Adapter(make_triple(transform::BoundedNoise{0.4, 3}, 1, 0.4)));
  InstantTransport t(nodes);
  for (int i = 0; i < 50; ++i) {
    const double v = i * 0.37;
    const auto d = run_phase_write(Value::real(v), nodes, WriteMode::Vector,
                                   params(3, 3, 0.4, Policy::mean()), t);
    REQUIRE(d.committed);
    CHECK(std::fabs(d.learned->as_real() - v) <= 0.4 / 3 + 1e-12);
  }
}

TEST_CASE("a mute proposer stalls writes") {
  auto nodes = three_replicas();
  nodes[0].set_byzantine(ByzantineStrategy::mute());
  InstantTransport t(nodes);
  const auto d = run_phase_write(Value::real(1), nodes, WriteMode::Vector, params(3, 2), t);
  CHECK_FALSE(d.committed);
}

TEST_CASE("reads match the replies") {
  auto nodes = three_replicas(2.5);
  nodes[2].set_byzantine(ByzantineStrategy::arbitrary(4));
  InstantTransport t(nodes);
  const auto d = run_phase_read(nodes, params(3, 2), t);
  CHECK(d.committed);
  CHECK(d.learned == Value::real(2.5));
  CHECK(d.per_node_states.size() == 3);
  CHECK(d.message_count == 6);
}

TEST_CASE("detection never commits") {
  auto nodes = three_replicas(1.0);
  nodes.emplace_back(3, RoleSet{}, Value::real(1.0));
  nodes[3].set_byzantine(ByzantineStrategy::arbitrary(9));
  InstantTransport t(nodes);
  const auto d = run_phase_detect(nodes, params(4, 3), t);
  CHECK_FALSE(d.committed);
  CHECK(d.outcome == Outcome::Detected);
  REQUIRE(d.detection);
  CHECK(d.detection->suspects == std::vector<int>{3});
}

TEST_CASE("max skew answers the largest value within the bound") {
  ReplicaNode n(0, RoleSet{}, Value::real(0));
  n.set_byzantine(ByzantineStrategy::max_skew());
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-100, 100);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng);
    const double y = n.reply(Value::real(x), 0.4)->as_real();
    CHECK(y <= x + 0.4);
    CHECK(y - x <= 0.4);
  }
  n.set_byzantine(ByzantineStrategy::max_skew(2.0));
  CHECK(n.reply(Value::real(1.0), 0.4) == Value::real(3.0));
  n.set_byzantine(ByzantineStrategy::mute());
  CHECK_FALSE(n.reply(Value::real(1.0), 0.4).has_value());
}

TEST_CASE("arbitrary corruption lands outside the band") {
  ReplicaNode n(3, RoleSet{}, Value::real(0));
  n.set_byzantine(ByzantineStrategy::arbitrary(8, 10));
  for (int i = 0; i < 500; ++i) {
    const double y = n.reply(Value::real(5.0), 0.4)->as_real();
    CHECK(std::fabs(y - 5.0) >= 10.0);
    CHECK(std::fabs(y - 5.0) < 20.0);
  }
}

TEST_CASE("strategy text round trips") {
  for (const auto& s : {ByzantineStrategy::arbitrary(3, 12.5), ByzantineStrategy::max_skew(),
                        ByzantineStrategy::max_skew(0.25), ByzantineStrategy::mute()}) {
    CHECK(parse_strategy(format_strategy(s)) == s);
  }
  CHECK(parse_strategy("arbitrary(7)") == ByzantineStrategy::arbitrary(7, 100));
  CHECK_THROWS_AS(parse_strategy("lie"), DomainError);
}

TEST_CASE("a miscertified artira gets vetoed out of the match") {
  std::vector<ReplicaNode> nodes = three_replicas();
  // Claims 0.1 but drifts up to 2.
  nodes[2] = ReplicaNode(2, RoleSet{}, Value::real(0),
                         Adapter(make_triple(transform::BoundedNoise{2.0, 6}, 1, 0.1)));
  InstantTransport t(nodes);
  int vetoed = 0;
  for (int i = 0; i < 50; ++i) {
    const auto d = run_phase_write(Value::real(i), nodes, WriteMode::Vector, params(3, 2, 0.5), t);
    CHECK(d.committed);
    if (d.vetoes.count(2)) {
      ++vetoed;
      CHECK_FALSE(d.match.contains(2));
      CHECK(d.learned == Value::real(i));
    }
  }
  CHECK(vetoed > 20);
}
