#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aft/metric.hpp"
#include "aft/value.hpp"

namespace aft {

enum class FaultModel { CrashStop, CrashRecovery, Byzantine };

std::string_view to_string(FaultModel model);
FaultModel parse_fault_model(std::string_view text);

/// n nodes, f tolerated faults, quorum q.
struct QuorumConfig {
  int n = 3;
  int f = 1;
  int q = 2;
  FaultModel fault_model = FaultModel::CrashStop;

  /// n = 2f+1, q = f+1 for benign faults; n = 3f+1, q = 2f+1 for Byzantine.
  static QuorumConfig for_faults(int f, FaultModel model);

  std::vector<std::string> violations() const;

  bool operator==(const QuorumConfig&) const = default;
};

/// Exact replicas declare epsilon 0 and alpha 1; artiras declare their
/// adapter's effective certification.
struct Response {
  int node_id = 0;
  Value value;
  bool is_artira = false;
  double declared_epsilon = 0.0;
  double declared_alpha = 1.0;
  std::uint64_t round = 0;
};

Response replica_response(int node_id, Value value, std::uint64_t round = 0);

enum class MatchMode { Exact, EpsilonBounded, Probabilistic };

std::string_view to_string(MatchMode mode);

struct MatchSet {
  std::vector<int> member_ids;  // ascending
  bool matched = false;         // member_ids.size() >= q
  MatchMode mode = MatchMode::Exact;
  double aggregate_alpha = 1.0;

  bool contains(int node_id) const;
  bool operator==(const MatchSet&) const = default;
};

/// Classical quorum predicate: the largest group of responses with identical
/// values. Equal-size groups tie-break toward the one holding the lowest
/// node id.
MatchSet ft_match(std::span<const Response> responses, const QuorumConfig& cfg);

/// A uniformly drawn member's value, keyed by (seed, round of the responses).
/// Throws NotMatched.
Value ft_value(const MatchSet& match, std::span<const Response> responses, std::uint64_t seed);

/// Largest node count supported by the exact clique search.
inline constexpr int kMaxMatchNodes = 16;

/// Matching radius for a pair: the protocol epsilon, widened to the sum of the
/// two declared bounds (two artiras may sit that far apart while each is
/// within its bound of the truth).
double pair_radius(const Response& a, const Response& b, double epsilon);

/// True when responses a and b match: d <= pair_radius and the product of
/// declared certainties reaches alpha.
bool responses_match(MetricSpace space, const Response& a, const Response& b, double epsilon,
                     double alpha);

/// Generalized predicate: the maximum clique of the pairwise match graph,
/// tie-broken toward the lexicographically smallest id set. aggregate_alpha is
/// the product of the members' declared certainties.
/// Throws TooManyNodes above kMaxMatchNodes responses or cfg.n above it.
MatchSet aft_match(std::span<const Response> responses, const QuorumConfig& cfg,
                   MetricSpace space, double epsilon, double alpha);

/// As aft_match, restricted to cliques containing `anchor_id`. Used when the
/// proposer's own state is the value to be learned.
MatchSet aft_match_anchored(std::span<const Response> responses, const QuorumConfig& cfg,
                            MetricSpace space, double epsilon, double alpha, int anchor_id);

struct Policy {
  enum class Kind { Random, Min, Max, Mean, Median, PreferReplica };
  Kind kind = Kind::Median;
  std::uint64_t seed = 0;  // Random only

  static Policy random(std::uint64_t seed) { return {Kind::Random, seed}; }
  static Policy min() { return {Kind::Min}; }
  static Policy max() { return {Kind::Max}; }
  static Policy mean() { return {Kind::Mean}; }
  static Policy median() { return {Kind::Median}; }
  static Policy prefer_replica() { return {Kind::PreferReplica}; }

  /// Policies that aggregate rather than pick need numeric values.
  bool needs_numeric() const noexcept { return kind != Kind::Random && kind != Kind::PreferReplica; }

  bool operator==(const Policy&) const = default;
};

std::string format_policy(const Policy& policy);
Policy parse_policy(std::string_view text);

/// The member whose value a selecting policy returns, or nullopt for the
/// aggregating policies (Mean, Median) and for PreferReplica's fallback.
/// Throws NotMatched or NonNumericPolicy.
std::optional<int> select_member(const MatchSet& match, std::span<const Response> responses,
                                 const Policy& policy);

/// policy(R'_q). Min/Max/Mean/Median need Real or Integer values; Integer
/// Mean and Median round half to even. Throws NotMatched or NonNumericPolicy.
Value aft_value(const MatchSet& match, std::span<const Response> responses, const Policy& policy);

struct FaultReport {
  std::vector<int> suspects;  // responders outside the chosen clique, ascending
  double confidence = 0.0;    // aggregate_alpha of the clique
  bool ambiguous = false;     // another clique of the same size exists
  MatchSet clique;
};

/// Detection-only use of the generalized predicate: never yields a value.
FaultReport detect_fault(std::span<const Response> responses, const QuorumConfig& cfg,
                         MetricSpace space, double epsilon, double alpha);

}  // namespace aft
