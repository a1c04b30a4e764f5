#include "tripave/riesz.hpp"

#include <algorithm>
#include <cmath>

namespace tripave {

RieszBounds ComputeRieszBounds(const VectorFamily& family) {
  if (family.empty()) throw Error("Riesz bounds of an empty family");
  try {
    GramSchmidt(family);
  } catch (const Error&) {
    throw Error("lower Riesz bound is zero");
  }
  const EigBounds eig = HermitianEigBounds(Gram(family));
  if (!(eig.lambda_min > 0.0)) throw Error("lower Riesz bound is zero");
  return {std::sqrt(eig.lambda_min), std::sqrt(eig.lambda_max)};
}

EpsRieszResult IsEpsRiesz(const VectorFamily& family, double epsilon) {
  if (!(epsilon > 0.0)) throw Error("epsilon must be positive");
  RieszBounds b{};
  try {
    b = ComputeRieszBounds(family);
  } catch (const Error&) {
    const EigBounds eig = HermitianEigBounds(Gram(family));
    return {false, 0.0, std::sqrt(std::max(eig.lambda_max, 0.0))};
  }
  const bool pass = b.lower >= 1.0 - epsilon - kEpsRieszTol &&
                    b.upper <= 1.0 + epsilon + kEpsRieszTol;
  return {pass, b.lower, b.upper};
}

bool EpsRieszReport::AllPass() const {
  return std::all_of(blocks.begin(), blocks.end(),
                     [](const Block& b) { return b.pass; });
}

nlohmann::ordered_json EpsRieszReport::ToJson() const {
  nlohmann::ordered_json j;
  j["epsilon"] = epsilon;
  j["blocks"] = nlohmann::ordered_json::array();
  for (const Block& b : blocks) {
    j["blocks"].push_back(
        {{"id", b.id}, {"lower", b.lower}, {"upper", b.upper}, {"pass", b.pass}});
  }
  return j;
}

std::vector<double> EpsMinimalityValues(const VectorFamily& family) {
  if (family.empty()) throw Error("eps-minimality of an empty family");
  std::vector<double> out(family.size());
  for (std::size_t i = 0; i < family.size(); ++i) {
    out[i] = ProjectionResidual(family, i);
  }
  return out;
}

bool IsEpsMinimal(const VectorFamily& family, double epsilon) {
  const std::vector<double> v = EpsMinimalityValues(family);
  return std::all_of(v.begin(), v.end(), [epsilon](double x) { return x <= epsilon; });
}

}  // namespace tripave
