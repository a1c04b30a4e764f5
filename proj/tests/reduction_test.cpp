#include "tripave/reduction.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "test_util.hpp"
#include "tripave/instance.hpp"
#include "tripave/verify.hpp"

namespace tripave {
namespace {

VectorFamily StandardBasis(std::size_t n) {
  std::vector<Vector> vs(n, Vector(n));
  for (std::size_t i = 0; i < n; ++i) vs[i][i] = 1.0;
  return VectorFamily::UnitNorm(std::move(vs));
}

// {e1, cos(t) e1 + sin(t) e2, e3, ..., en}
VectorFamily TiltedBasis(std::size_t n, double cos_t) {
  std::vector<Vector> vs(n, Vector(n));
  for (std::size_t i = 0; i < n; ++i) vs[i][i] = 1.0;
  vs[1][0] = cos_t;
  vs[1][1] = std::sqrt(1.0 - cos_t * cos_t);
  return VectorFamily::UnitNorm(std::move(vs));
}

VectorFamily CorpusFamily(std::uint64_t seed, std::size_t n, double kappa, bool perturbed) {
  InstanceSpec spec;
  spec.kind = perturbed ? InstanceKind::kPerturbedOrthonormal : InstanceKind::kRandomRiesz;
  spec.n = n;
  spec.condition_target = kappa;
  spec.seed = seed;
  return Generate(spec);
}

TEST(ChooseRTest, Examples) {
  EXPECT_EQ(ChooseR({1.0, 1.0}, 0.5), 4u);
  EXPECT_EQ(ChooseR({1.0, 1.0}, 2.0 / 3.0), 3u);
  EXPECT_EQ(ChooseR({1.0, 2.0}, 0.1), 320u);
  EXPECT_TRUE(SatisfiesRBound({1.0, 2.0}, 0.1, 320));
  EXPECT_FALSE(SatisfiesRBound({1.0, 2.0}, 0.1, 319));
  EXPECT_THROW(ChooseR({1.0, 1.0}, 0.0), Error);
  EXPECT_THROW(ChooseR({1.0, 1.0}, -0.5), Error);
}

TEST(ChooseRTest, SmallestSatisfyingValue) {
  Rng rng(51);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = 0.2 + 0.8 * rng.Uniform();
    const double b = a * (1.0 + 3.0 * rng.Uniform());
    const double eps = 0.05 + 0.9 * rng.Uniform();
    const std::size_t r = ChooseR({a, b}, eps);
    EXPECT_TRUE(SatisfiesRBound({a, b}, eps, r));
    if (r > 1) EXPECT_FALSE(SatisfiesRBound({a, b}, eps, r - 1));
  }
}

TEST(VerifyStep2Test, Examples) {
  const RieszBounds unit{1.0, 1.0};
  EXPECT_DOUBLE_EQ(VerifyStep2(Matrix::Identity(4), Partition::RoundRobin(4, 2), unit, 2), 0.5);
  const Matrix g = Matrix::FromRows({{1, 0.4}, {0.4, 1}});
  const RieszBounds b{std::sqrt(0.6), std::sqrt(1.4)};
  EXPECT_NEAR(VerifyStep2(g, Partition{2, {{0}, {1}}}, b, 2), 1.4 / 2, 1e-15);
}

TEST(VerifyStep2Test, RejectsUncertifiedPartition) {
  const Matrix g = Matrix::FromRows({{1, 0.4}, {0.4, 1}});
  try {
    VerifyStep2(g, Partition{2, {{0, 1}, {}}}, {0.5, 1.2}, 2);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "partition is not Step-1 certified");
  }
}

TEST(VerifyStep3Test, Examples) {
  const RieszBounds unit{1.0, 1.0};
  EXPECT_DOUBLE_EQ(VerifyStep3(StandardBasis(4), Partition::RoundRobin(4, 2), unit, 2), 0.5);
  const VectorFamily tilted = TiltedBasis(3, 0.3);
  const RieszBounds b = ComputeRieszBounds(tilted);
  EXPECT_DOUBLE_EQ(VerifyStep3(tilted, Partition::Singletons(3), b, 3),
                   std::pow(b.upper, 4) / (std::pow(b.lower, 4) * 3));
}

TEST(TriangularizeTest, OrthonormalBlock) {
  const std::vector<std::size_t> block = {0, 2, 3};
  const TriangularBlockData t = TriangularizeBlock(StandardBasis(4), block, 0.5);
  EXPECT_EQ(t.m, Matrix(3, 3));
  EXPECT_EQ(t.m_norm, 0.0);
  EXPECT_EQ(t.k, Matrix::Identity(3));
}

TEST(TriangularizeTest, TwoByTwoByHand) {
  const double c = 0.3;  // c^2 <= eps/2 for eps = 0.5
  const VectorFamily f = TiltedBasis(2, c);
  const std::vector<std::size_t> block = {0, 1};
  const TriangularBlockData t = TriangularizeBlock(f, block, 0.5);
  EXPECT_TRUE(t.m.IsLowerTriangularZeroDiag());
  EXPECT_NEAR(t.m(1, 0).real(), c, 1e-15);
  EXPECT_NEAR(t.m_norm, c, 1e-15);
  EXPECT_NEAR(t.min_diag_sq, 1.0 - c * c, 1e-15);
}

TEST(TriangularizeTest, StepFourFailure) {
  const std::vector<std::size_t> block = {0, 1};
  try {
    TriangularizeBlock(TiltedBasis(2, 0.9), block, 0.5);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "Step 3 margin insufficient");
  }
}

TEST(RunReductionTest, StandardBasis) {
  ReductionConfig cfg;
  cfg.epsilon = 0.1;
  const ReductionReport rep = RunReduction(StandardBasis(6), cfg);
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.r_theoretical, 20u);
  EXPECT_EQ(rep.r_effective, 6u);
  EXPECT_EQ(rep.m_norm.worst, 0.0);
  for (const auto& b : rep.final_check.blocks) {
    EXPECT_DOUBLE_EQ(b.lower, 1.0);
    EXPECT_DOUBLE_EQ(b.upper, 1.0);
  }
}

TEST(RunReductionTest, TiltedPairSplitsOnlyWhenPavingNeedsIt) {
  ReductionConfig cfg;
  cfg.epsilon = 0.5;
  cfg.r_override = 1;
  // ||M|| = cos t; the absolute paving target is eps/2 = 0.25.
  const ReductionReport keep = RunReduction(TiltedBasis(4, 0.2), cfg);
  ASSERT_TRUE(keep.pass) << keep.ToJson().dump(2);
  EXPECT_EQ(keep.final_partition.blocks.size(), 1u);

  const ReductionReport split = RunReduction(TiltedBasis(4, 0.4), cfg);
  ASSERT_TRUE(split.pass) << split.ToJson().dump(2);
  ASSERT_EQ(split.final_partition.blocks.size(), 2u);
  const auto label = split.final_partition.Assignment();
  EXPECT_NE(label[0], label[1]);

  // Brute force over all labelings of M into one block: infeasible.
  const TriangularBlockData tri =
      TriangularizeBlock(TiltedBasis(4, 0.4), std::vector<std::size_t>{0, 1, 2, 3}, 0.5);
  EXPECT_GT(tri.m_norm, 0.25);
}

TEST(RunReductionTest, FailingStageIsReported) {
  ReductionConfig cfg;
  cfg.epsilon = 0.5;
  cfg.r_override = 1;
  const ReductionReport rep = RunReduction(TiltedBasis(3, 0.9), cfg);
  EXPECT_FALSE(rep.pass);
  ASSERT_TRUE(rep.error.has_value());
  EXPECT_EQ(rep.error->stage, "step4");
  EXPECT_EQ(rep.error->message, "Step 3 margin insufficient");
}

TEST(RunReductionTest, ExhaustiveGuardAsksForHeuristic) {
  ReductionConfig cfg;
  cfg.epsilon = 0.5;
  cfg.r_override = 1;
  const ReductionReport rep = RunReduction(StandardBasis(14), cfg);
  ASSERT_TRUE(rep.error.has_value());
  EXPECT_EQ(rep.error->stage, "paving");
  EXPECT_NE(rep.error->message.find("heuristic"), std::string::npos);

  cfg.paving_method = PavingMethod::kHeuristic;
  EXPECT_TRUE(RunReduction(StandardBasis(14), cfg).pass);
}

TEST(RunReductionTest, RejectsBadConfig) {
  ReductionConfig cfg;
  cfg.epsilon = 1.0;
  EXPECT_THROW(RunReduction(StandardBasis(3), cfg), Error);
  cfg.epsilon = 0.5;
  EXPECT_THROW(RunReduction(VectorFamily({{2.0, 0.0}}), cfg), Error);
}

TEST(RunReductionTest, RandomFamiliesSatisfyEveryInvariant) {
  for (std::uint64_t seed = 0; seed < 24; ++seed) {
    const double kappa = 1.02 + 0.04 * static_cast<double>(seed % 6);
    const VectorFamily f = CorpusFamily(seed, 8 + seed % 9, kappa, seed % 2 == 0);
    std::size_t previous_blocks = SIZE_MAX;
    for (double eps : {0.1, 0.25, 0.5}) {
      ReductionConfig cfg;
      cfg.epsilon = eps;
      cfg.paving_method = seed % 3 == 0 ? PavingMethod::kHeuristic : PavingMethod::kExhaustive;
      const ReductionReport rep = RunReduction(f, cfg);
      ASSERT_TRUE(rep.pass) << "seed " << seed << " eps " << eps << "\n"
                            << rep.ToJson().dump(2);
      EXPECT_TRUE(rep.final_partition.Refines(rep.step1_partition));
      rep.final_partition.Validate();
      for (const auto& b : rep.final_partition.blocks) {
        EXPECT_TRUE(IsEpsRiesz(f.Subfamily(b), eps).pass);
      }
      // |K(m,m)|^2 = 1 - ||Q_{m-1} f_m||^2, Q_{m-1} the projection onto the
      // span of the earlier block members.
      for (const auto& b : rep.step1_partition.blocks) {
        if (b.empty()) continue;
        const TriangularBlockData tri = TriangularizeBlock(f, b, eps);
        for (std::size_t m = 0; m < b.size(); ++m) {
          std::vector<std::size_t> prefix(b.begin(), b.begin() + m + 1);
          const double q = ProjectionResidual(f.Subfamily(prefix), m);
          EXPECT_NEAR(std::norm(tri.k(m, m)), 1.0 - q * q, 1e-8);
        }
      }
      // Finer eps needs at least as many blocks on this corpus.
      EXPECT_LE(rep.final_partition.blocks.size(), previous_blocks);
      previous_blocks = rep.final_partition.blocks.size();
    }
  }
}

TEST(ReportJsonTest, DeterministicAndVerifiable) {
  const VectorFamily f = CorpusFamily(5, 12, 1.08, true);
  ReductionConfig cfg;
  cfg.epsilon = 0.5;
  const ReductionReport a = RunReduction(f, cfg);
  const ReductionReport b = RunReduction(f, cfg);
  EXPECT_EQ(a.ToJson().dump(), b.ToJson().dump());

  nlohmann::ordered_json j = a.ToJson();
  EXPECT_EQ(VerifyReport(j, 1e-8).status, VerifyStatus::kPass);

  nlohmann::ordered_json tampered = j;
  auto& norms = tampered["blocks"][0]["paving"]["block_norms"];
  norms[0] = norms[0].get<double>() + 0.1;
  EXPECT_EQ(VerifyReport(tampered, 1e-8).status, VerifyStatus::kFail);

  nlohmann::ordered_json no_input = j;
  no_input["input"].erase("family");
  EXPECT_EQ(VerifyReport(no_input, 1e-8).status, VerifyStatus::kInputError);
}

}  // namespace
}  // namespace tripave
