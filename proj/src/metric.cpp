#include "aft/metric.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "aft/error.hpp"
#include "text_util.hpp"

namespace aft {

std::string_view to_string(MetricSpace space) {
  switch (space) {
    case MetricSpace::AbsoluteDifference: return "absolute";
    case MetricSpace::EuclideanVector: return "euclidean";
    case MetricSpace::Discrete01: return "discrete";
  }
  return "?";
}

MetricSpace parse_metric_space(std::string_view name) {
  const auto n = detail::lower(detail::trim(name));
  if (n == "absolute" || n == "absolute_difference") return MetricSpace::AbsoluteDifference;
  if (n == "euclidean" || n == "euclidean_vector") return MetricSpace::EuclideanVector;
  if (n == "discrete" || n == "discrete01") return MetricSpace::Discrete01;
  throw DomainError("unknown metric space '" + std::string(name) + "'");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void mismatch(MetricSpace space, const Value& u, const Value& v) {
  throw KindMismatch("cannot measure " + std::string(to_string(u.kind())) + " against " +
                     std::string(to_string(v.kind())) + " in the " +
                     std::string(to_string(space)) + " space");
}

}  // namespace

double distance(MetricSpace space, const Value& u, const Value& v) {
  if (u.kind() != v.kind()) mismatch(space, u, v);
  if (u.kind() == ValueKind::Vector && u.as_vector().size() != v.as_vector().size()) {
    throw KindMismatch("vector lengths differ: " + std::to_string(u.as_vector().size()) +
                       " vs " + std::to_string(v.as_vector().size()));
  }

  if (space == MetricSpace::Discrete01) return u == v ? 0.0 : 1.0;

  if (u.kind() == ValueKind::Symbol) return u == v ? 0.0 : kInf;

  switch (space) {
    case MetricSpace::AbsoluteDifference:
      switch (u.kind()) {
        case ValueKind::Real: return std::fabs(u.as_real() - v.as_real());
        case ValueKind::Integer: {
          // Difference taken in double; exact for |x| < 2^53.
          return std::fabs(static_cast<double>(u.as_integer()) -
                           static_cast<double>(v.as_integer()));
        }
        case ValueKind::Boolean: return u.as_boolean() == v.as_boolean() ? 0.0 : 1.0;
        default: mismatch(space, u, v);
      }
    case MetricSpace::EuclideanVector: {
      if (u.kind() != ValueKind::Vector) mismatch(space, u, v);
      const auto& a = u.as_vector();
      const auto& b = v.as_vector();
      double sum = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
      }
      return std::sqrt(sum);
    }
    case MetricSpace::Discrete01: break;
  }
  mismatch(space, u, v);
}

bool in_neighborhood(MetricSpace space, const Value& center, double radius,
                     const Value& candidate) {
  if (!(radius >= 0.0)) throw DomainError("neighborhood radius must be non-negative");
  return distance(space, center, candidate) <= radius;
}

double max_within(double x, double bound) {
  double y = x + bound;
  if (!std::isfinite(y)) return y;
  while (y - x > bound) y = std::nextafter(y, -kInf);
  return y;
}

}  // namespace aft
