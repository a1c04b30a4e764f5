#pragma once

// Reduction from a unit-norm Riesz basis to an eps-Riesz partition:
//
//   1. pick r with B^4 / (A^4 r) <= eps/2,
//   2. split the Gram matrix into r blocks by local search on the
//      within-block squared correlations,
//   3. certify the row bound B^2/r and the projection bound B^4/(A^4 r),
//   4. Gram-Schmidt every block; the diagonal of the coefficient matrix K
//      satisfies |K(m,m)|^2 >= 1 - eps/2,
//   5. pave the strictly lower part M of K to absolute norm eps/2 and check
//      that every refined block is eps-Riesz.
//
// Each stage leaves a numeric margin in the report; negative margins mean
// the corresponding inequality failed.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tripave/linalg.hpp"
#include "tripave/partition.hpp"
#include "tripave/paving.hpp"
#include "tripave/riesz.hpp"

namespace tripave {

enum class PavingMethod { kExhaustive, kHeuristic };

std::string ToString(PavingMethod m);
PavingMethod PavingMethodFromString(const std::string& s);

struct ReductionConfig {
  double epsilon = 0.5;
  PavingMethod paving_method = PavingMethod::kExhaustive;
  std::optional<std::size_t> r_override;
  double tolerance = 1e-8;

  void Validate() const;
};

// B^4 / (A^4 r) <= eps / 2.
bool SatisfiesRBound(const RieszBounds& bounds, double epsilon, std::size_t r);
// Smallest r satisfying SatisfiesRBound.
std::size_t ChooseR(const RieszBounds& bounds, double epsilon);

// min over blocks j, i in A_j of B^2/r - sum_{l in A_j, l != i} |g(i,l)|^2.
// Throws Error("partition is not Step-1 certified") if the exchange
// inequality fails by more than 1e-10.
double VerifyStep2(const Matrix& g, const Partition& p, const RieszBounds& bounds,
                   std::size_t r);
// min over blocks j, i in A_j of B^4/(A^4 r) - ||P_ij f_i||^2, P_ij the
// projection onto the span of the rest of block j.
double VerifyStep3(const VectorFamily& family, const Partition& p,
                   const RieszBounds& bounds, std::size_t r);

struct TriangularBlockData {
  std::vector<std::size_t> block;
  VectorFamily ortho;
  Matrix k;  // coefficient matrix, lower triangular
  Matrix m;  // k with its diagonal removed
  double m_norm = 0.0;
  double min_diag_sq = 1.0;  // min_m |k(m,m)|^2
};

// Gram-Schmidt of the block subfamily in block order. Throws
// Error("Step 3 margin insufficient") if some |k(m,m)|^2 < 1 - eps/2 - 1e-9.
TriangularBlockData TriangularizeBlock(const VectorFamily& family,
                                       std::span<const std::size_t> block,
                                       double epsilon);

struct ReductionReport {
  struct Margin {
    double bound = 0.0;
    double worst = 0.0;
    double margin = 0.0;
  };
  struct BlockData {
    std::size_t step1_block = 0;
    std::vector<std::size_t> indices;
    double m_norm = 0.0;
    double min_diag_sq = 1.0;
    PavingCertificate paving;
  };
  struct StageError {
    std::string stage;
    std::string message;
  };

  VectorFamily input;
  ReductionConfig config;
  RieszBounds bounds{0.0, 0.0};
  std::size_t r_theoretical = 0;
  std::size_t r_effective = 0;

  Partition step1_partition;
  std::optional<double> step1_margin;
  double step1_objective = 0.0;
  std::size_t step1_moves = 0;

  Margin step2;     // worst = largest within-block row sum
  Margin step3;     // worst = largest ||P_ij f_i||^2
  Margin corollary; // worst = largest ||P_ij f_i||, bound sqrt(step3 bound)
  Margin step4;     // worst = smallest |K(m,m)|^2, bound 1 - eps/2
  Margin m_norm;    // worst = largest ||M||, bound B + 1

  std::vector<BlockData> blocks;
  Partition final_partition;
  EpsRieszReport final_check;
  std::size_t max_blocks_per_paving = 0;
  std::size_t total_blocks = 0;  // r_effective * max_blocks_per_paving

  std::optional<StageError> error;
  bool pass = false;

  nlohmann::ordered_json ToJson() const;
};

ReductionReport RunReduction(const VectorFamily& family, const ReductionConfig& config);

}  // namespace tripave
