#pragma once

// Diagonal compressions Q_A T Q_A and pavings: partitions {A_j} with
// ||Q_{A_j} T Q_{A_j}|| <= eps ||T|| for every block.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "tripave/linalg.hpp"
#include "tripave/partition.hpp"

namespace tripave {

inline constexpr double kZeroDiagonalTol = 1e-14;
inline constexpr double kPavingTol = 1e-9;
inline constexpr std::size_t kExhaustivePavingLimit = 12;

// What a paving has to achieve. Relative targets compare block norms with
// epsilon * ||T||; absolute targets compare them with epsilon itself.
struct PavingTarget {
  double epsilon;
  bool absolute = false;
};

struct PavingCertificate {
  std::string matrix_id;
  Partition partition;
  double epsilon = 0.0;
  bool absolute = false;
  double reference_norm = 0.0;
  std::vector<double> block_norms;
  bool pass = false;
  std::string method;

  double Bound() const { return absolute ? epsilon : epsilon * reference_norm; }
  double MaxBlockNorm() const;
};

Matrix StripDiagonal(const Matrix& t);
// n x n matrix keeping entry (i,j) iff both i and j are in `block`.
Matrix Compress(const Matrix& t, std::span<const std::size_t> block);
// The |A| x |A| principal submatrix on `block`.
Matrix PrincipalSubmatrix(const Matrix& t, std::span<const std::size_t> block);

struct PavingNormResult {
  double max_norm;
  std::vector<double> per_block;
};

PavingNormResult PavingNorm(const Matrix& t, const Partition& p);

// Builds a certificate by recomputing every block norm of `p` on `t`.
PavingCertificate Certify(const Matrix& t, const Partition& p, PavingTarget target,
                          std::string method);

// Exhaustive search for the smallest r <= r_max; among partitions into r
// blocks the lexicographically smallest assignment wins. Requires zero
// diagonal and n <= kExhaustivePavingLimit.
std::optional<PavingCertificate> PaveExhaustive(const Matrix& t, PavingTarget target,
                                                std::size_t r_max);
// Iterative deepening over r = 1, 2, 4, ... with a move-based local search
// on (max block norm, sum of squared block norms). Always passes.
PavingCertificate PaveHeuristic(const Matrix& t, PavingTarget target);

std::optional<PavingCertificate> BruteForcePaving(const Matrix& t, double epsilon,
                                                  std::size_t r_max);
PavingCertificate HeuristicPaving(const Matrix& t, double epsilon);

nlohmann::ordered_json CertificateToJson(const PavingCertificate& c);
PavingCertificate CertificateFromJson(const nlohmann::ordered_json& j);

}  // namespace tripave
