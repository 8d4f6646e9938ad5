#include "aft/artira.hpp"

#include <cmath>

#include "aft/error.hpp"
#include "text_util.hpp"

namespace aft {

std::string_view to_string(ReplicationModel model) {
  switch (model) {
    case ReplicationModel::PAR: return "PAR";
    case ReplicationModel::SAR: return "SAR";
    case ReplicationModel::WAR: return "WAR";
  }
  return "?";
}

ReplicationModel parse_replication_model(std::string_view text) {
  const auto t = detail::lower(detail::trim(text));
  if (t == "par") return ReplicationModel::PAR;
  if (t == "sar") return ReplicationModel::SAR;
  if (t == "war") return ReplicationModel::WAR;
  throw DomainError("unknown replication model '" + std::string(text) + "'");
}

ReplicationModel classify(double alpha, double epsilon) {
  if (alpha < 1.0) return ReplicationModel::WAR;
  return epsilon == 0.0 ? ReplicationModel::PAR : ReplicationModel::SAR;
}

ArtiraTriple make_triple(TransformSpec transform, double alpha, double epsilon) {
  ArtiraTriple t;
  t.inverse = default_inverse(transform);
  t.transform = std::move(transform);
  t.alpha = alpha;
  t.epsilon = epsilon;
  t.model = classify(alpha, epsilon);
  return t;
}

std::vector<std::string> triple_violations(const ArtiraTriple& triple) {
  auto out = transform_violations(triple.transform);
  if (triple.inverse) {
    for (auto& v : transform_violations(*triple.inverse)) out.push_back("inverse: " + v);
  }
  if (!(triple.alpha >= 0.0 && triple.alpha <= 1.0)) out.emplace_back("alpha must lie in [0, 1]");
  if (!(triple.epsilon >= 0.0) || !std::isfinite(triple.epsilon)) {
    out.emplace_back("epsilon must be finite and >= 0");
  }
  switch (triple.model) {
    case ReplicationModel::PAR:
      if (triple.alpha != 1.0 || triple.epsilon != 0.0)
        out.emplace_back("model PAR requires alpha = 1 and epsilon = 0");
      break;
    case ReplicationModel::SAR:
      if (triple.alpha != 1.0 || !(triple.epsilon > 0.0))
        out.emplace_back("model SAR requires alpha = 1 and epsilon > 0");
      break;
    case ReplicationModel::WAR:
      if (!(triple.alpha < 1.0)) out.emplace_back("model WAR requires alpha < 1");
      break;
  }
  return out;
}

}  // namespace aft
