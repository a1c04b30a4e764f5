#include "tripave/instance.hpp"

#include <cmath>
#include <numbers>

#include "tripave/io.hpp"
#include "tripave/riesz.hpp"

namespace tripave {

namespace {

Matrix GaussianMatrix(Rng& rng, std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.Normal();
  }
  return m;
}

// Columns of `m`, each scaled to unit norm.
VectorFamily UnitColumns(const Matrix& m) {
  std::vector<Vector> cols(m.cols(), Vector(m.rows()));
  for (std::size_t j = 0; j < m.cols(); ++j) {
    for (std::size_t i = 0; i < m.rows(); ++i) cols[j][i] = m(i, j);
    const double nrm = Norm(cols[j]);
    if (nrm == 0.0) throw Error("zero column in generated matrix");
    for (Scalar& z : cols[j]) z /= nrm;
  }
  return VectorFamily::UnitNorm(std::move(cols));
}

Matrix RandomOrthogonal(Rng& rng, std::size_t n) {
  return GramSchmidt(VectorFamily::FromRows(GaussianMatrix(rng, n))).ortho.AsRows();
}

bool WithinCondition(const VectorFamily& f, double target) {
  try {
    const RieszBounds b = ComputeRieszBounds(f);
    return b.upper / b.lower <= target * 1.1;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

double Rng::Normal() {
  const double u1 = Uniform();
  const double u2 = Uniform();
  return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::string ToString(InstanceKind k) {
  switch (k) {
    case InstanceKind::kOrthonormal: return "orthonormal";
    case InstanceKind::kPerturbedOrthonormal: return "perturbed_orthonormal";
    case InstanceKind::kRandomRiesz: return "random_riesz";
    case InstanceKind::kGramFile: return "gram_file";
  }
  return "unknown";
}

InstanceKind InstanceKindFromString(const std::string& s) {
  if (s == "orthonormal") return InstanceKind::kOrthonormal;
  if (s == "perturbed_orthonormal") return InstanceKind::kPerturbedOrthonormal;
  if (s == "random_riesz") return InstanceKind::kRandomRiesz;
  if (s == "gram_file") return InstanceKind::kGramFile;
  throw Error("unknown instance kind '" + s + "'");
}

VectorFamily Generate(const InstanceSpec& spec) {
  if (spec.kind == InstanceKind::kGramFile) {
    return FamilyFromGram(MatrixFromJson(ReadJsonFile(spec.gram_file)));
  }
  if (spec.n == 0) throw Error("n must be at least 1");
  if (!(spec.condition_target >= 1.0)) throw Error("condition target must be >= 1");
  const std::size_t n = spec.n;
  const double kappa = spec.condition_target;
  Rng rng(spec.seed);

  switch (spec.kind) {
    case InstanceKind::kOrthonormal:
      return UnitColumns(Matrix::Identity(n));

    case InstanceKind::kPerturbedOrthonormal: {
      // ||N|| is about 2 for an n x n Gaussian scaled by 1/sqrt(n), so a
      // step of size delta gives condition about (1 + 2 delta)/(1 - 2 delta).
      double delta = (kappa - 1.0) / (2.0 * (kappa + 1.0));
      const double scale = 1.0 / std::sqrt(static_cast<double>(n));
      for (int attempt = 0; attempt < kMaxGenerationRetries; ++attempt) {
        const Matrix noise = GaussianMatrix(rng, n);
        Matrix f = Matrix::Identity(n);
        if (delta > 0.0) {
          for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) f(i, j) += delta * scale * noise(i, j);
          }
        }
        VectorFamily fam = UnitColumns(f);
        if (WithinCondition(fam, kappa)) return fam;
        delta *= 0.95;
      }
      break;
    }

    case InstanceKind::kRandomRiesz: {
      // U diag(s) V^T with log-uniform singular values in [1, kappa].
      for (int attempt = 0; attempt < kMaxGenerationRetries; ++attempt) {
        const Matrix u = RandomOrthogonal(rng, n);
        const Matrix v = RandomOrthogonal(rng, n);
        Matrix s(n, n);
        for (std::size_t i = 0; i < n; ++i) s(i, i) = std::pow(kappa, rng.Uniform());
        VectorFamily fam = UnitColumns(u * s * v.Adjoint());
        if (WithinCondition(fam, kappa)) return fam;
      }
      break;
    }

    case InstanceKind::kGramFile:
      break;
  }
  throw Error("condition target unreachable after " +
              std::to_string(kMaxGenerationRetries) + " retries");
}

VectorFamily FamilyFromGram(const Matrix& g) {
  if (!g.square() || g.empty()) throw Error("Gram matrix must be square and nonempty");
  if (!g.IsHermitian(1e-12 * std::max(1.0, g.MaxAbs()))) {
    throw Error("Gram matrix is not Hermitian");
  }
  const std::size_t n = g.rows();
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(g(i, i) - 1.0) > 1e-10) throw Error("Gram matrix must have unit diagonal");
  }
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = g(j, j).real();
    for (std::size_t k = 0; k < j; ++k) d -= std::norm(l(j, k));
    if (!(d > 0.0)) throw Error("Gram matrix is not positive definite");
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      Scalar s = g(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / l(j, j).real();
    }
  }
  std::vector<Vector> rows(n, Vector(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) rows[i][k] = l(i, k);
    const double nrm = Norm(rows[i]);
    for (Scalar& z : rows[i]) z /= nrm;
  }
  return VectorFamily::UnitNorm(std::move(rows));
}

}  // namespace tripave
