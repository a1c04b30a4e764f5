#include "tripave/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace tripave {

namespace {

bool AllFinite(const std::vector<Scalar>& v) {
  return std::all_of(v.begin(), v.end(), [](const Scalar& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

// Cyclic Jacobi on a dense real symmetric matrix (row-major, n x n).
// Returns eigenvalues ascending.
std::vector<double> SymmetricJacobi(std::vector<double> a, std::size_t n) {
  auto at = [&](std::size_t i, std::size_t j) -> double& {
    return a[i * n + j];
  };
  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double v = at(i, j) * at(i, j);
        total += v;
        if (i != j) off += v;
      }
    }
    if (off <= 1e-32 * total || off == 0.0) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double app = at(p, p);
        const double aqq = at(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = at(p, k);
          const double aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
        at(p, q) = 0.0;
        at(q, p) = 0.0;
      }
    }
  }
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = at(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

// Orthonormal basis of span(vectors) dropping numerically dependent ones.
std::vector<Vector> OrthonormalBasis(const std::vector<const Vector*>& vectors,
                                     double cutoff) {
  std::vector<Vector> basis;
  for (const Vector* f : vectors) {
    Vector v = *f;
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vector& e : basis) {
        const Scalar c = Inner(v, e);
        for (std::size_t k = 0; k < v.size(); ++k) v[k] -= c * e[k];
      }
    }
    const double r = Norm(v);
    if (r <= cutoff) continue;
    for (Scalar& z : v) z /= r;
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Scalar{0.0, 0.0}) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<Scalar> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw Error("matrix data size does not match shape");
  }
  if (!AllFinite(data_)) throw Error("matrix has non-finite entries");
}

Matrix Matrix::Identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::FromRows(const std::vector<std::vector<double>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  std::vector<Scalar> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw Error("ragged matrix rows");
    for (double x : row) data.emplace_back(x, 0.0);
  }
  return Matrix(r, c, std::move(data));
}

Matrix Matrix::Adjoint() const {
  Matrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  }
  return out;
}

bool Matrix::IsReal() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const Scalar& z) { return z.imag() == 0.0; });
}

bool Matrix::IsHermitian(double tol) const {
  if (!square()) return false;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = i; j < cols_; ++j) {
      if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
    }
  }
  return true;
}

bool Matrix::IsLowerTriangularZeroDiag() const {
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = i; j < cols_; ++j) {
      if ((*this)(i, j) != Scalar{0.0, 0.0}) return false;
    }
  }
  return true;
}

double Matrix::MaxAbs() const {
  double m = 0.0;
  for (const Scalar& z : data_) m = std::max(m, std::abs(z));
  return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error("matrix product shape mismatch");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Scalar aik = a(i, k);
      if (aik == Scalar{0.0, 0.0}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error("matrix difference shape mismatch");
  }
  std::vector<Scalar> d(a.data().size());
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = a.data()[k] - b.data()[k];
  return Matrix(a.rows(), a.cols(), std::move(d));
}

VectorFamily::VectorFamily(std::vector<Vector> vectors, bool unit_norm)
    : vectors_(std::move(vectors)), unit_norm_(unit_norm) {
  if (!vectors_.empty()) dim_ = vectors_.front().size();
  for (const Vector& v : vectors_) {
    if (v.size() != dim_) throw Error("inconsistent ambient dimension");
    if (v.empty()) throw Error("vectors must have length >= 1");
    if (!AllFinite(v)) throw Error("vector has non-finite entries");
  }
  if (unit_norm_ && !IsUnitNorm()) throw Error("family is not unit-norm");
}

VectorFamily VectorFamily::UnitNorm(std::vector<Vector> vectors) {
  return VectorFamily(std::move(vectors), true);
}

VectorFamily VectorFamily::FromRows(const Matrix& m, bool unit_norm) {
  std::vector<Vector> vs(m.rows(), Vector(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) vs[i][j] = m(i, j);
  }
  return VectorFamily(std::move(vs), unit_norm);
}

VectorFamily VectorFamily::Subfamily(std::span<const std::size_t> indices) const {
  std::vector<Vector> vs;
  vs.reserve(indices.size());
  for (std::size_t i : indices) vs.push_back(vectors_.at(i));
  VectorFamily out(std::move(vs), false);
  out.unit_norm_ = unit_norm_;
  if (out.vectors_.empty()) out.dim_ = dim_;
  return out;
}

Matrix VectorFamily::AsRows() const {
  Matrix m(size(), dim_);
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = 0; j < dim_; ++j) m(i, j) = vectors_[i][j];
  }
  return m;
}

bool VectorFamily::IsUnitNorm(double tol) const {
  return std::all_of(vectors_.begin(), vectors_.end(), [tol](const Vector& v) {
    return std::abs(Norm(v) - 1.0) <= tol;
  });
}

Scalar Inner(std::span<const Scalar> x, std::span<const Scalar> y) {
  Scalar s{0.0, 0.0};
  for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * std::conj(y[k]);
  return s;
}

double Norm(std::span<const Scalar> x) {
  // Scaled sum of squares; avoids overflow for large entries.
  double scale = 0.0;
  for (const Scalar& z : x) scale = std::max(scale, std::abs(z));
  if (scale == 0.0) return 0.0;
  double ss = 0.0;
  for (const Scalar& z : x) ss += std::norm(z / scale);
  return scale * std::sqrt(ss);
}

Matrix Gram(const VectorFamily& family) {
  if (family.empty()) throw Error("gram of an empty family");
  const std::size_t k = family.size();
  Matrix g(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    g(i, i) = std::norm(Norm(family[i]));
    for (std::size_t j = i + 1; j < k; ++j) {
      g(i, j) = Inner(family[i], family[j]);
      g(j, i) = std::conj(g(i, j));
    }
  }
  return g;
}

std::vector<double> HermitianEigenvalues(const Matrix& m) {
  if (!m.square()) throw Error("eigenvalues of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return {};
  if (m.IsReal()) {
    std::vector<double> a(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        a[i * n + j] = 0.5 * (m(i, j).real() + m(j, i).real());
      }
    }
    return SymmetricJacobi(std::move(a), n);
  }
  // [[Re, -Im], [Im, Re]] has each eigenvalue of m twice.
  const std::size_t n2 = 2 * n;
  std::vector<double> a(n2 * n2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Scalar h = 0.5 * (m(i, j) + std::conj(m(j, i)));
      a[i * n2 + j] = h.real();
      a[(i + n) * n2 + (j + n)] = h.real();
      a[i * n2 + (j + n)] = -h.imag();
      a[(i + n) * n2 + j] = h.imag();
    }
  }
  const std::vector<double> doubled = SymmetricJacobi(std::move(a), n2);
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) {
    eig[i] = 0.5 * (doubled[2 * i] + doubled[2 * i + 1]);
  }
  return eig;
}

EigBounds HermitianEigBounds(const Matrix& m) {
  if (m.empty()) throw Error("eigenvalues of an empty matrix");
  if (!m.IsHermitian(1e-12 * std::max(1.0, m.MaxAbs()))) {
    throw Error("matrix is not Hermitian");
  }
  const std::vector<double> eig = HermitianEigenvalues(m);
  return {eig.front(), eig.back()};
}

double OperatorNorm(const Matrix& m) {
  if (m.empty()) throw Error("operator norm of an empty matrix");
  const double scale = m.MaxAbs();
  if (scale == 0.0) return 0.0;
  // Work on the smaller of m*m and m m*.
  const Matrix h = m.rows() < m.cols() ? m * m.Adjoint() : m.Adjoint() * m;
  const double top = HermitianEigenvalues(h).back();
  return std::sqrt(std::max(top, 0.0));
}

GramSchmidtResult GramSchmidt(const VectorFamily& family) {
  const std::size_t k = family.size();
  double max_norm = 0.0;
  for (const Vector& f : family.vectors()) max_norm = std::max(max_norm, Norm(f));
  const double cutoff = kRankTol * max_norm;

  std::vector<Vector> basis;
  basis.reserve(k);
  Matrix coeffs(k, k);
  for (std::size_t m = 0; m < k; ++m) {
    Vector v = family[m];
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t l = 0; l < m; ++l) {
        const Scalar c = Inner(v, basis[l]);
        coeffs(m, l) += c;
        for (std::size_t d = 0; d < v.size(); ++d) v[d] -= c * basis[l][d];
      }
    }
    const double r = Norm(v);
    if (!(r > cutoff)) {
      throw Error("family not a Riesz basic sequence at working precision");
    }
    for (Scalar& z : v) z /= r;
    coeffs(m, m) = r;
    basis.push_back(std::move(v));
  }
  return {VectorFamily(std::move(basis)), std::move(coeffs)};
}

double ProjectionResidual(const VectorFamily& family, std::size_t i) {
  if (family.empty()) throw Error("projection residual of an empty family");
  if (i >= family.size()) throw Error("index out of range");
  double max_norm = 0.0;
  for (const Vector& f : family.vectors()) max_norm = std::max(max_norm, Norm(f));
  std::vector<const Vector*> others;
  for (std::size_t l = 0; l < family.size(); ++l) {
    if (l != i) others.push_back(&family.vectors()[l]);
  }
  const std::vector<Vector> basis = OrthonormalBasis(others, kRankTol * max_norm);
  Vector proj(family.dim(), Scalar{0.0, 0.0});
  for (const Vector& e : basis) {
    const Scalar c = Inner(family[i], e);
    for (std::size_t d = 0; d < proj.size(); ++d) proj[d] += c * e[d];
  }
  return std::min(Norm(proj), Norm(family[i]));
}

}  // namespace tripave
