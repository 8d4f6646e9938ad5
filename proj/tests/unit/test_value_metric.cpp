#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "aft/error.hpp"
#include "aft/metric.hpp"
#include "aft/value.hpp"

using namespace aft;

TEST_CASE("value accessors check the kind") {
  const auto r = Value::real(1.5);
  CHECK(r.kind() == ValueKind::Real);
  CHECK(r.as_real() == 1.5);
  CHECK_THROWS_AS(r.as_integer(), KindMismatch);
  CHECK_THROWS_AS(Value::boolean(true).numeric(), NonNumeric);
  CHECK(Value::integer(-4).numeric() == -4.0);
  CHECK(Value::symbol("a") == Value::symbol("a"));
  CHECK_FALSE(Value::integer(1) == Value::real(1.0));
}

TEST_CASE("format and parse round trip") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 500; ++i) {
    const double x = u(rng);
    CHECK(parse_real(format_real(x)) == x);
  }
  const ValueShape vec{ValueKind::Vector, 3};
  const auto v = Value::vector({0.1, -2.0, 1e-300});
  CHECK(parse_value(format_value(v), vec) == v);
  CHECK(parse_value("(0.1, -2, 1e-300)", vec) == v);
  CHECK(parse_value("true", {ValueKind::Boolean, 0}) == Value::boolean(true));
  CHECK(parse_value(" -17 ", {ValueKind::Integer, 0}) == Value::integer(-17));
  CHECK_THROWS_AS(parse_value("[1 2]", vec), DomainError);
  CHECK_THROWS_AS(parse_real("1.5x"), DomainError);
  CHECK_THROWS_AS(parse_integer("2.0"), DomainError);
}

TEST_CASE("absolute difference") {
  const auto m = MetricSpace::AbsoluteDifference;
  CHECK(distance(m, Value::real(3.0), Value::real(-1.5)) == 4.5);
  CHECK(distance(m, Value::integer(7), Value::integer(10)) == 3.0);
  CHECK(distance(m, Value::boolean(true), Value::boolean(false)) == 1.0);
  CHECK_THROWS_AS(distance(m, Value::real(1), Value::integer(1)), KindMismatch);
  CHECK_THROWS_AS(distance(m, Value::vector({1}), Value::vector({1})), KindMismatch);
}

TEST_CASE("euclidean distance of vectors") {
  const auto m = MetricSpace::EuclideanVector;
  CHECK(distance(m, Value::vector({0, 0}), Value::vector({3, 4})) == 5.0);
  CHECK_THROWS_AS(distance(m, Value::vector({0, 0}), Value::vector({3})), KindMismatch);
  CHECK_THROWS_AS(distance(m, Value::real(0), Value::real(1)), KindMismatch);
}

TEST_CASE("symbols compare by equality only") {
  const auto a = Value::symbol("left"), b = Value::symbol("right");
  CHECK(distance(MetricSpace::AbsoluteDifference, a, a) == 0.0);
  CHECK(std::isinf(distance(MetricSpace::AbsoluteDifference, a, b)));
  CHECK(distance(MetricSpace::Discrete01, a, b) == 1.0);
  CHECK(distance(MetricSpace::Discrete01, Value::real(1), Value::real(1.0000001)) == 1.0);
}

TEST_CASE("neighborhoods are closed balls") {
  const auto m = MetricSpace::AbsoluteDifference;
  CHECK(in_neighborhood(m, Value::real(1.0), 0.5, Value::real(1.5)));
  CHECK_FALSE(in_neighborhood(m, Value::real(1.0), 0.5, Value::real(1.5000000000000002)));
  CHECK(in_neighborhood(m, Value::real(2.0), 0.0, Value::real(2.0)));
  CHECK_THROWS_AS(in_neighborhood(m, Value::real(0), -1.0, Value::real(0)), DomainError);
}

TEST_CASE("metric axioms hold on random samples") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-100, 100);
  const auto m = MetricSpace::EuclideanVector;
  for (int i = 0; i < 300; ++i) {
    const auto x = Value::vector({u(rng), u(rng), u(rng)});
    const auto y = Value::vector({u(rng), u(rng), u(rng)});
    const auto z = Value::vector({u(rng), u(rng), u(rng)});
    CHECK(distance(m, x, x) == 0.0);
    CHECK(distance(m, x, y) == distance(m, y, x));
    CHECK(distance(m, x, z) <= distance(m, x, y) + distance(m, y, z) + 1e-9);
  }
}

TEST_CASE("max_within stays inside the bound and under the rounded sum") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1e4, 1e4);
  const double bounds[] = {0.4, 0.1, 1e-3, 3.0};
  for (int i = 0; i < 2000; ++i) {
    const double x = u(rng);
    for (double b : bounds) {
      const double y = max_within(x, b);
      CHECK(y - x <= b);
      CHECK(y <= x + b);
      CHECK(y >= x);
    }
  }
  CHECK(max_within(1.0, 0.0) == 1.0);
}
