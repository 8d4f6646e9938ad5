#pragma once

#include <string_view>

#include "aft/value.hpp"

namespace aft {

/// The three built-in metric spaces over response values.
///
/// AbsoluteDifference: |u - v| over Real, Integer and Boolean (as 0/1).
/// EuclideanVector: L2 norm of the difference of two equal-length vectors.
/// Discrete01: 0 when equal, 1 otherwise; any kind.
///
/// Symbols compare by equality only: equal tokens are at distance 0 and
/// unequal tokens at +inf, except under Discrete01 where they are at 1.
enum class MetricSpace { AbsoluteDifference, EuclideanVector, Discrete01 };

std::string_view to_string(MetricSpace space);
MetricSpace parse_metric_space(std::string_view name);

/// d(u, v). No epsilon slop: comparisons are exact IEEE arithmetic.
/// Throws KindMismatch for differing kinds, vector lengths, or a kind the
/// space does not measure.
double distance(MetricSpace space, const Value& u, const Value& v);

/// Closed ball test: d(center, candidate) <= radius.
bool in_neighborhood(MetricSpace space, const Value& center, double radius,
                     const Value& candidate);

/// x + bound, stepped back toward x until (y - x) <= bound also holds in
/// floating point. Never exceeds the rounded sum x + bound.
double max_within(double x, double bound);

}  // namespace aft
