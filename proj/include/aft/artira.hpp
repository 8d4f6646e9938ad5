#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aft/transform.hpp"

namespace aft {

/// Perfect (exact transform), strong (bounded error, certain) and weak
/// (uncertain) artificial replication.
enum class ReplicationModel { PAR, SAR, WAR };

std::string_view to_string(ReplicationModel model);
ReplicationModel parse_replication_model(std::string_view text);

/// The model implied by a certification: alpha = 1 and epsilon = 0 is PAR,
/// alpha = 1 with epsilon > 0 is SAR, anything less certain is WAR.
ReplicationModel classify(double alpha, double epsilon);

/// Certification (F, F^-1, alpha, epsilon) of an artificial replica: F maps
/// its output into the reference replica's space within epsilon with
/// probability at least alpha.
struct ArtiraTriple {
  TransformSpec transform = transform::Identity{};
  std::optional<TransformSpec> inverse;
  double alpha = 1.0;
  double epsilon = 0.0;
  ReplicationModel model = ReplicationModel::PAR;

  bool operator==(const ArtiraTriple&) const = default;
};

/// Builds a triple whose inverse is the transform's default coder and whose
/// model is classified from (alpha, epsilon).
ArtiraTriple make_triple(TransformSpec transform, double alpha, double epsilon);

/// Every violated invariant; empty when the triple is well formed.
std::vector<std::string> triple_violations(const ArtiraTriple& triple);

}  // namespace aft
