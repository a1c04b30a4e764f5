#pragma once

// Shared helpers for the test suites: seeded random inputs and Eigen-based
// reference computations that are independent of the library kernels.

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "tripave/instance.hpp"
#include "tripave/linalg.hpp"

namespace tripave::testing {

using EMat = Eigen::MatrixXcd;

inline EMat ToEigen(const Matrix& m) {
  EMat e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  }
  return e;
}

inline Matrix RandomMatrix(Rng& rng, std::size_t rows, std::size_t cols,
                           bool complex = false) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      m(i, j) = Scalar(rng.Normal(), complex ? rng.Normal() : 0.0);
    }
  }
  return m;
}

inline VectorFamily RandomFamily(Rng& rng, std::size_t count, std::size_t dim,
                                 bool complex = false, bool unit = false) {
  std::vector<Vector> vs(count, Vector(dim));
  for (auto& v : vs) {
    for (auto& z : v) z = Scalar(rng.Normal(), complex ? rng.Normal() : 0.0);
    if (unit) {
      const double nrm = Norm(v);
      for (auto& z : v) z /= nrm;
    }
  }
  return VectorFamily(std::move(vs), unit);
}

inline Matrix RandomZeroDiagonal(Rng& rng, std::size_t n) {
  Matrix m = RandomMatrix(rng, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 0.0;
  return m;
}

// Largest singular value via Eigen's two-sided Jacobi SVD.
inline double OracleNorm(const EMat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<EMat> svd(m);
  return svd.singularValues()(0);
}

inline double OracleNorm(const Matrix& m) { return OracleNorm(ToEigen(m)); }

inline Eigen::VectorXd OracleEigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<EMat> es(ToEigen(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

// Norm of the principal submatrix on `block`.
inline double OracleBlockNorm(const Matrix& t, const std::vector<std::size_t>& block) {
  if (block.empty()) return 0.0;
  EMat sub(block.size(), block.size());
  for (std::size_t a = 0; a < block.size(); ++a) {
    for (std::size_t b = 0; b < block.size(); ++b) sub(a, b) = t(block[a], block[b]);
  }
  return OracleNorm(sub);
}

// Calls f(assignment) for every labeling of n indices into r labels.
template <typename F>
void ForEachAssignment(std::size_t n, std::size_t r, F&& f) {
  std::vector<std::size_t> a(n, 0);
  while (true) {
    f(a);
    std::size_t i = 0;
    while (i < n && ++a[i] == r) a[i++] = 0;
    if (i == n) return;
  }
}

}  // namespace tripave::testing
