#pragma once

#include <cstddef>
#include <vector>

#include "json.hpp"
#include "tripave/linalg.hpp"

namespace tripave {

// Lower (A) and upper (B) Riesz bounds: for all coefficients a,
//   A^2 sum |a_i|^2 <= || sum a_i f_i ||^2 <= B^2 sum |a_i|^2.
struct RieszBounds {
  double lower;
  double upper;
};

// Optimal bounds of a finite family: square roots of the extreme Gram
// eigenvalues. Throws Error("lower Riesz bound is zero") on rank deficiency.
RieszBounds ComputeRieszBounds(const VectorFamily& family);

inline constexpr double kEpsRieszTol = 1e-9;

struct EpsRieszResult {
  bool pass;
  double lower;
  double upper;
};

// Achieved bounds and whether they lie in [1-eps-tol, 1+eps+tol]. A
// rank-deficient family fails with lower bound 0.
EpsRieszResult IsEpsRiesz(const VectorFamily& family, double epsilon);

struct EpsRieszReport {
  struct Block {
    std::size_t id;
    double lower;
    double upper;
    bool pass;
  };
  double epsilon = 0.0;
  std::vector<Block> blocks;

  bool AllPass() const;
  nlohmann::ordered_json ToJson() const;
};

// Entry i is ||P_i f_i||, P_i the projection onto the span of the others.
std::vector<double> EpsMinimalityValues(const VectorFamily& family);
bool IsEpsMinimal(const VectorFamily& family, double epsilon);

}  // namespace tripave
