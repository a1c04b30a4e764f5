#pragma once

// Dense small-scale linear algebra over complex scalars.
//
// Inner products are linear in the first argument:
//   <x, y> = sum_k x[k] * conj(y[k]).
// Every function here is pure; nothing holds global state.

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tripave {

using Scalar = std::complex<double>;
using Vector = std::vector<Scalar>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dense row-major matrix. Entries must be finite.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::size_t rows, std::size_t cols, std::vector<Scalar> data);

  static Matrix Identity(std::size_t n);
  // Convenience for tests and literals: real entries, row by row.
  static Matrix FromRows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }
  bool square() const { return rows_ == cols_; }

  Scalar& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  const Scalar& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  const std::vector<Scalar>& data() const { return data_; }

  Matrix Adjoint() const;
  // True when every imaginary part is exactly zero.
  bool IsReal() const;
  bool IsHermitian(double tol = 1e-12) const;
  // entry(i,j) == 0 exactly for all i <= j.
  bool IsLowerTriangularZeroDiag() const;
  double MaxAbs() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);

// Ordered family of vectors sharing one ambient dimension.
class VectorFamily {
 public:
  static constexpr double kUnitNormTol = 1e-10;

  VectorFamily() = default;
  // Throws Error("inconsistent ambient dimension") on mismatched lengths.
  explicit VectorFamily(std::vector<Vector> vectors, bool unit_norm = false);

  // Builds a family and asserts every vector has norm 1 within kUnitNormTol.
  static VectorFamily UnitNorm(std::vector<Vector> vectors);
  // Rows of `m` become the vectors.
  static VectorFamily FromRows(const Matrix& m, bool unit_norm = false);

  std::size_t size() const { return vectors_.size(); }
  bool empty() const { return vectors_.empty(); }
  std::size_t dim() const { return dim_; }
  bool unit_norm() const { return unit_norm_; }
  const Vector& operator[](std::size_t i) const { return vectors_.at(i); }
  const std::vector<Vector>& vectors() const { return vectors_; }

  // Subfamily in the order given by `indices` (0-based).
  VectorFamily Subfamily(std::span<const std::size_t> indices) const;
  // Matrix whose rows are the vectors.
  Matrix AsRows() const;
  bool IsUnitNorm(double tol = kUnitNormTol) const;

 private:
  std::vector<Vector> vectors_;
  std::size_t dim_ = 0;
  bool unit_norm_ = false;
};

Scalar Inner(std::span<const Scalar> x, std::span<const Scalar> y);
double Norm(std::span<const Scalar> x);

// G(i,j) = <f_i, f_j>.
Matrix Gram(const VectorFamily& family);

// Largest singular value.
double OperatorNorm(const Matrix& m);

struct EigBounds {
  double lambda_min;
  double lambda_max;
};

// All eigenvalues of a Hermitian matrix, ascending. Cyclic Jacobi; a
// Hermitian complex input is embedded as a real symmetric matrix of twice
// the size whose spectrum is the original one with multiplicity two.
std::vector<double> HermitianEigenvalues(const Matrix& m);
// Throws Error on non-Hermitian input.
EigBounds HermitianEigBounds(const Matrix& m);

struct GramSchmidtResult {
  VectorFamily ortho;
  // Lower triangular; coeffs(m, l) = <f_m, e_l>, real positive diagonal.
  Matrix coeffs;
};

// Rank-deficiency cutoff relative to the largest vector norm.
inline constexpr double kRankTol = 1e-10;

// Modified Gram-Schmidt with one reorthogonalization pass. Throws
// Error("family not a Riesz basic sequence at working precision") when a
// residual falls below kRankTol relative to the largest input norm.
GramSchmidtResult GramSchmidt(const VectorFamily& family);

// ||P f_i|| where P projects onto span{f_l : l != i}.
double ProjectionResidual(const VectorFamily& family, std::size_t i);

}  // namespace tripave
