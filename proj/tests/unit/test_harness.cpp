#include <doctest.h>

#include <filesystem>
#include <random>
#include <string>

#include "aft/error.hpp"
#include "aft/harness.hpp"

using namespace aft;

namespace {

const std::filesystem::path kScenarios = AFT_SCENARIO_DIR;

const char* const kBundled[] = {"par_exact",   "par_celsius",     "par_negate",
                                "sar_medical", "war_recommender", "byz_maxskew"};

Scenario bundled(const char* name) {
  return load_scenario(kScenarios / (std::string(name) + ".scn")).scenario;
}

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

constexpr const char* kMinimal = R"(name = mini
f = 1
workload = write(1), read

[node.0]
[node.1]
[node.2]
)";

// Three nodes; two artiras that claim 0.1 but drift up to 1.0. Commits only
// once the protocol epsilon covers the drift.
constexpr const char* kNoisy = R"(name = noisy
seed = 12
f = 1
q = 3
mode = vector
policy = mean
workload = generate(writes, 300, 0, 10)

[node.0]
roles = all

[node.1]
transform = bounded_noise(1.0, 3)
epsilon = 0.1

[node.2]
transform = bounded_noise(1.0, 4)
epsilon = 0.1
)";

}  // namespace

TEST_CASE("bundled scenarios load") {
  const auto s = bundled("par_exact");
  CHECK(s.quorum().n == 3);
  CHECK(s.nodes.size() == 3);
  for (const auto& n : s.nodes) CHECK_FALSE(n.artira.has_value());
  for (const char* name : kBundled) CHECK_NOTHROW(bundled(name));
}

TEST_CASE("defaults fill in what a file leaves out") {
  const auto src = read_scenario(kMinimal);
  CHECK_FALSE(src.has_seed);
  const auto& s = src.scenario;
  CHECK(s.seed == 0);
  CHECK(s.policy == Policy::median());
  CHECK(s.mode == ProtocolMode::Vector);
  CHECK(s.quorum() == QuorumConfig{3, 1, 2, FaultModel::CrashStop});
  REQUIRE(std::holds_alternative<std::vector<WorkloadOp>>(s.workload));
  CHECK(std::get<std::vector<WorkloadOp>>(s.workload).size() == 2);
}

TEST_CASE("quorum larger than n is a validation error") {
  const std::string text = std::string(kMinimal) + "";
  try {
    parse_scenario("q = 5\nn = 3\n" + text);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    bool found = false;
    for (const auto& v : e.violations()) found = found || v.find("q <= n") != std::string::npos;
    CHECK(found);
  }
}

TEST_CASE("a PAR node with nonzero epsilon is a validation error") {
  const std::string text = std::string(kMinimal) + "model = PAR\ntransform = negate\nepsilon = 0.1\n";
  try {
    parse_scenario(text);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    REQUIRE(e.violations().size() == 1);
    CHECK(e.violations()[0] == "node 2: model PAR requires alpha = 1 and epsilon = 0");
  }
}

TEST_CASE("parse errors carry line and column") {
  auto expect = [](const std::string& text, std::size_t line, std::size_t column) {
    try {
      parse_scenario(text);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == line);
      CHECK(e.column() == column);
    }
  };
  expect("name = x\n  colour = red\n", 2, 3);
  expect("name = x\nepsilon = lots\n", 2, 11);
  expect("name = x\n[node.0]\nroles = chef\n", 3, 9);
  expect("name = x\n[edge.0]\n", 2, 1);
  expect("name = x\nname = y\n", 2, 1);
  expect("name = x\njust words\n", 2, 1);
  expect("[node.0]\nbehavior = replica\ntransform = negate\n", 3, 1);
  expect("workload = write(1), jump\n", 1, 12);
}

TEST_CASE("emitted scenarios parse back equal") {
  for (const char* name : kBundled) {
    CAPTURE(name);
    const auto s = bundled(name);
    CHECK(parse_scenario(emit_scenario(s)) == s);
  }
}

TEST_CASE("round trip holds for generated scenarios") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0, 1);
  const Policy policies[] = {Policy::min(), Policy::max(), Policy::mean(), Policy::median(),
                             Policy::random(5), Policy::prefer_replica()};
  for (int trial = 0; trial < 100; ++trial) {
    Scenario s;
    s.name = "gen" + std::to_string(trial);
    s.seed = rng();
    s.fault_model = trial % 2 ? FaultModel::Byzantine : FaultModel::CrashRecovery;
    s.f = 1 + trial % 2;
    s.policy = policies[trial % 6];
    s.epsilon = u(rng);
    s.alpha = 0.5 + u(rng) / 2;
    s.net = {1 + rng() % 3, rng() % 3, u(rng) / 2};
    if (trial % 3 == 0) s.request_interval = 50;
    const int n = s.quorum().n;
    for (int i = 0; i < n; ++i) {
      NodeSpec node{i, RoleSet{static_cast<unsigned>(1 + (i + trial) % 7)}, std::nullopt, std::nullopt, {}};
      if (i == 0) node.roles = RoleSet{};
      if (i % 3 == 1) {
        const double d = u(rng);
        node.artira = ArtiraSpec{make_triple(transform::BoundedNoise{d, rng() % 100}, 1.0, d), 0.01, 0.99};
        node.initial = Value::real(u(rng) * 10);
      }
      if (i % 3 == 2) {
        node.artira = ArtiraSpec{make_triple(transform::Affine{u(rng) + 0.5, u(rng)}, 1, 0), 0, 1};
      }
      if (s.fault_model == FaultModel::Byzantine) {
        node.faults = {FaultEvent::byzantine_on(3, ByzantineStrategy::max_skew(u(rng))),
                       FaultEvent::byzantine_off(9)};
      } else {
        node.faults = {FaultEvent::crash(rng() % 20), FaultEvent::recover(30)};
      }
      s.nodes.push_back(node);
    }
    if (trial % 2) {
      s.workload = WorkloadGenerator{WorkloadGenerator::Pattern::Mixed, 10, -u(rng), u(rng)};
    } else {
      s.workload = std::vector<WorkloadOp>{WorkloadOp::write(Value::real(u(rng))), WorkloadOp::read()};
    }
    REQUIRE(s.violations().empty());
    CHECK(parse_scenario(emit_scenario(s)) == s);
  }
}

TEST_CASE("value kinds beyond reals") {
  const auto s = parse_scenario(R"(kind = vector(2)
policy = random(1)
initial = [1 2]
workload = write([3 4]), read
[node.0]
[node.1]
[node.2]
)");
  CHECK(s.space == MetricSpace::EuclideanVector);
  CHECK(s.initial == Value::vector({1, 2}));
  const auto r = run_scenario(s);
  CHECK(r.metrics().commit_rate == 1.0);
  CHECK(parse_scenario(emit_scenario(s)) == s);

  const auto b = parse_scenario("kind = integer\nworkload = generate(mixed, 20, -5, 5)\n[node.0]\n[node.1]\n[node.2]\n");
  for (const auto& op : b.expand_workload()) {
    if (op.kind == WorkloadOp::Kind::Write) {
      CHECK(op.value.as_integer() >= -5);
      CHECK(op.value.as_integer() <= 5);
    }
  }
}

TEST_CASE("csv has one row per request and a fixed header") {
  const auto r = run_scenario(bundled("par_celsius"));
  CHECK(r.csv.substr(0, kCsvHeader.size()) == kCsvHeader);
  CHECK(count_lines(r.csv) == r.result.requests.size() + 1);
  CHECK(r.csv.find("\n0,write,1,100,100,0,3,1,6\n") != std::string::npos);
}

TEST_CASE("csv is byte-identical across runs") {
  for (const char* name : kBundled) {
    CAPTURE(name);
    const auto s = bundled(name);
    CHECK(run_scenario(s).csv == run_scenario(s).csv);
  }
}

TEST_CASE("detection rows leave the value columns empty") {
  const auto r = run_scenario(bundled("war_recommender"));
  const auto first_row = r.csv.substr(kCsvHeader.size() + 1, r.csv.find('\n', kCsvHeader.size() + 1) - kCsvHeader.size() - 1);
  CHECK(first_row.rfind("0,detect,0,,3.5,,", 0) == 0);
}

TEST_CASE("sweeping epsilon on a noise-only scenario never lowers the commit rate") {
  const auto base = parse_scenario(kNoisy);
  std::vector<double> values;
  for (int i = 0; i <= 12; ++i) values.push_back(i * 0.2);
  const auto rows = sweep(base, SweepAxis::Epsilon, values);
  REQUIRE(rows.size() == values.size());
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].value == values[i]);
    CHECK(rows[i].metrics.commit_rate >= rows[i - 1].metrics.commit_rate);
  }
  CHECK(rows.front().metrics.commit_rate < 1.0);
  CHECK(rows.back().metrics.commit_rate == 1.0);
}

TEST_CASE("sweeping f resizes the cluster") {
  auto base = bundled("par_exact");
  base.nodes[2].faults = {FaultEvent::crash(0)};
  const auto rows = sweep(base, SweepAxis::F, {1, 2, 3});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].metrics.replication_factor == 2 * static_cast<int>(i + 1) + 1);
    CHECK(rows[i].metrics.commit_rate == 1.0);
  }
  const auto shrunk = with_axis(bundled("byz_maxskew"), SweepAxis::F, 0);
  CHECK(shrunk.nodes.size() == 1);
  CHECK_THROWS_AS(with_axis(base, SweepAxis::F, 1.5), InvalidAxis);
}

TEST_CASE("sweep edge cases") {
  const auto base = bundled("par_exact");
  CHECK(sweep(base, SweepAxis::Alpha, {}).empty());
  CHECK(count_lines(format_sweep(SweepAxis::Alpha, {})) == 1);
  CHECK_THROWS_AS(parse_sweep_axis("temperature"), InvalidAxis);
  CHECK(parse_sweep_axis("drop_prob") == SweepAxis::DropProb);
  CHECK_THROWS_AS(sweep(base, SweepAxis::Alpha, {1.5}), ValidationError);
}

TEST_CASE("sweep rows match individual runs") {
  const auto base = bundled("sar_medical");
  const auto rows = sweep(base, SweepAxis::DropProb, {0.0, 0.05, 0.3});
  for (const auto& r : rows) {
    CHECK(r.metrics == run(with_axis(base, SweepAxis::DropProb, r.value)).metrics);
  }
}

TEST_CASE("seed precedence") {
  CHECK(resolve_seed(5, 7, "9") == 5);
  CHECK(resolve_seed(std::nullopt, 7, "9") == 7);
  CHECK(resolve_seed(std::nullopt, std::nullopt, "9") == 9);
  CHECK(resolve_seed(std::nullopt, std::nullopt, nullptr) == 0);
  CHECK(resolve_seed(std::nullopt, std::nullopt, "") == 0);
  CHECK_THROWS_AS(resolve_seed(std::nullopt, std::nullopt, "abc"), DomainError);
}
