#include "tripave/riesz.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "test_util.hpp"

namespace tripave {
namespace {

using testing::RandomFamily;

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

VectorFamily StandardBasis(std::size_t n) {
  std::vector<Vector> vs(n, Vector(n));
  for (std::size_t i = 0; i < n; ++i) vs[i][i] = 1.0;
  return VectorFamily::UnitNorm(std::move(vs));
}

VectorFamily AtAngle(double theta) {
  return VectorFamily::UnitNorm({{1.0, 0.0}, {std::cos(theta), std::sin(theta)}});
}

Vector Synthesize(const VectorFamily& f, const Vector& a) {
  Vector out(f.dim(), 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t d = 0; d < f.dim(); ++d) out[d] += a[i] * f[i][d];
  }
  return out;
}

TEST(RieszBoundsTest, StandardBasis) {
  const RieszBounds b = ComputeRieszBounds(StandardBasis(5));
  EXPECT_DOUBLE_EQ(b.lower, 1.0);
  EXPECT_DOUBLE_EQ(b.upper, 1.0);
}

TEST(RieszBoundsTest, TwoVectorClosedForm) {
  const RieszBounds b = ComputeRieszBounds(AtAngle(M_PI / 4));
  EXPECT_NEAR(b.lower, std::sqrt(1.0 - kInvSqrt2), 1e-14);
  EXPECT_NEAR(b.upper, std::sqrt(1.0 + kInvSqrt2), 1e-14);
}

TEST(RieszBoundsTest, RankDeficientFamily) {
  try {
    ComputeRieszBounds(VectorFamily({{1.0, 0.0}, {1.0, 0.0}}));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "lower Riesz bound is zero");
  }
}

TEST(RieszBoundsTest, SandwichesRandomSynthesesAndIsSharp) {
  Rng rng(21);
  const VectorFamily f = RandomFamily(rng, 10, 10, /*complex=*/false, /*unit=*/true);
  const RieszBounds b = ComputeRieszBounds(f);
  for (int trial = 0; trial < 1000; ++trial) {
    Vector a(10);
    for (auto& z : a) z = Scalar(rng.Normal(), rng.Normal());
    const double a2 = std::norm(Norm(a));
    const double s2 = std::norm(Norm(Synthesize(f, a)));
    EXPECT_GE(s2, b.lower * b.lower * a2 * (1 - 1e-12));
    EXPECT_LE(s2, b.upper * b.upper * a2 * (1 + 1e-12));
  }
  // Extreme eigenvectors of the Gram matrix attain the bounds.
  Eigen::SelfAdjointEigenSolver<testing::EMat> es(testing::ToEigen(Gram(f)));
  for (int which : {0, 9}) {
    Vector a(10);
    // ||sum a_i f_i||^2 = a^T G conj(a); the conjugated eigenvector of G
    // realizes the eigenvalue in that form.
    for (std::size_t i = 0; i < 10; ++i) a[i] = std::conj(es.eigenvectors()(i, which));
    const double ratio = std::norm(Norm(Synthesize(f, a))) / std::norm(Norm(a));
    const double target = which == 0 ? b.lower * b.lower : b.upper * b.upper;
    EXPECT_NEAR(ratio, target, 1e-6);
  }
}

TEST(RieszBoundsTest, ScalingCovariance) {
  Rng rng(22);
  const VectorFamily f = RandomFamily(rng, 6, 6, true);
  const RieszBounds b = ComputeRieszBounds(f);
  std::vector<Vector> scaled = f.vectors();
  for (auto& v : scaled) {
    for (auto& z : v) z *= 2.5;
  }
  const RieszBounds s = ComputeRieszBounds(VectorFamily(scaled));
  EXPECT_NEAR(s.lower, 2.5 * b.lower, 1e-10);
  EXPECT_NEAR(s.upper, 2.5 * b.upper, 1e-10);
}

TEST(RieszBoundsTest, PermutationInvarianceAndSubsetMonotonicity) {
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const VectorFamily f = RandomFamily(rng, 7, 7, trial % 2 == 0, true);
    const RieszBounds b = ComputeRieszBounds(f);
    std::vector<std::size_t> perm(7);
    std::iota(perm.begin(), perm.end(), 0);
    std::reverse(perm.begin(), perm.end());
    std::swap(perm[1], perm[4]);
    const RieszBounds p = ComputeRieszBounds(f.Subfamily(perm));
    EXPECT_NEAR(p.lower, b.lower, 1e-12);
    EXPECT_NEAR(p.upper, b.upper, 1e-12);
    for (std::uint32_t mask = 1; mask < (1u << 7); mask += 5) {
      std::vector<std::size_t> sub;
      for (std::size_t i = 0; i < 7; ++i) {
        if (mask & (1u << i)) sub.push_back(i);
      }
      const RieszBounds s = ComputeRieszBounds(f.Subfamily(sub));
      EXPECT_GE(s.lower, b.lower - 1e-10);
      EXPECT_LE(s.upper, b.upper + 1e-10);
    }
  }
}

TEST(EpsRieszTest, Examples) {
  const EpsRieszResult basis = IsEpsRiesz(StandardBasis(4), 0.1);
  EXPECT_TRUE(basis.pass);
  EXPECT_DOUBLE_EQ(basis.lower, 1.0);
  EXPECT_DOUBLE_EQ(basis.upper, 1.0);

  const EpsRieszResult pair = IsEpsRiesz(AtAngle(M_PI / 4), 0.1);
  EXPECT_FALSE(pair.pass);
  EXPECT_NEAR(pair.lower, 0.541, 1e-3);
}

TEST(EpsRieszTest, RankDeficiencyFailsWithZeroLowerBound) {
  const EpsRieszResult r = IsEpsRiesz(VectorFamily({{1.0, 0.0}, {1.0, 0.0}}), 0.5);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.lower, 0.0);
}

TEST(EpsRieszTest, ReportSerialization) {
  EpsRieszReport rep;
  rep.epsilon = 0.25;
  rep.blocks.push_back({1, 0.9, 1.1, true});
  rep.blocks.push_back({2, 0.5, 1.1, false});
  EXPECT_FALSE(rep.AllPass());
  EXPECT_EQ(rep.ToJson().dump(),
            R"({"epsilon":0.25,"blocks":[{"id":1,"lower":0.9,"upper":1.1,"pass":true},)"
            R"({"id":2,"lower":0.5,"upper":1.1,"pass":false}]})");
}

TEST(EpsMinimalityTest, Examples) {
  for (double x : EpsMinimalityValues(StandardBasis(3))) EXPECT_EQ(x, 0.0);
  const double theta = 1.1;
  const std::vector<double> v = EpsMinimalityValues(AtAngle(theta));
  EXPECT_NEAR(v[0], std::cos(theta), 1e-14);
  EXPECT_NEAR(v[1], std::cos(theta), 1e-14);
  EXPECT_TRUE(IsEpsMinimal(AtAngle(theta), std::cos(theta) + 1e-12));
  EXPECT_FALSE(IsEpsMinimal(AtAngle(theta), std::cos(theta) - 1e-6));
}

TEST(EpsMinimalityTest, UnitaryInvariance) {
  Rng rng(24);
  const VectorFamily f = RandomFamily(rng, 5, 6, true, true);
  // Random unitary from the QR factor of a complex Gaussian matrix.
  const Matrix q = GramSchmidt(RandomFamily(rng, 6, 6, true)).ortho.AsRows();
  std::vector<Vector> rotated;
  for (const Vector& v : f.vectors()) {
    Vector w(6, 0.0);
    for (std::size_t a = 0; a < 6; ++a) {
      for (std::size_t b = 0; b < 6; ++b) w[a] += q(a, b) * v[b];
    }
    rotated.push_back(w);
  }
  const std::vector<double> before = EpsMinimalityValues(f);
  const std::vector<double> after = EpsMinimalityValues(VectorFamily(rotated));
  for (std::size_t i = 0; i < before.size(); ++i) EXPECT_NEAR(before[i], after[i], 1e-10);
}

}  // namespace
}  // namespace tripave
