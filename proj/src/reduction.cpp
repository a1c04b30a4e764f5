#include "tripave/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tripave/io.hpp"

namespace tripave {

namespace {

double Fourth(double x) { return (x * x) * (x * x); }

double ProjectionBound(const RieszBounds& b, std::size_t r) {
  return Fourth(b.upper) / (Fourth(b.lower) * static_cast<double>(r));
}

nlohmann::ordered_json MarginJson(const ReductionReport::Margin& m) {
  return {{"bound", m.bound}, {"worst", m.worst}, {"margin", m.margin}};
}

nlohmann::ordered_json IndicesJson(const std::vector<std::size_t>& v) {
  auto j = nlohmann::ordered_json::array();
  for (std::size_t i : v) j.push_back(i + 1);
  return j;
}

}  // namespace

std::string ToString(PavingMethod m) {
  return m == PavingMethod::kExhaustive ? "exhaustive" : "heuristic";
}

PavingMethod PavingMethodFromString(const std::string& s) {
  if (s == "exhaustive" || s == "brute_force") return PavingMethod::kExhaustive;
  if (s == "heuristic") return PavingMethod::kHeuristic;
  throw Error("unknown paving method '" + s + "'");
}

void ReductionConfig::Validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error("epsilon must lie in (0, 1)");
  if (r_override && *r_override == 0) throw Error("r override must be positive");
  if (!(tolerance >= 0.0)) throw Error("tolerance must be nonnegative");
}

bool SatisfiesRBound(const RieszBounds& bounds, double epsilon, std::size_t r) {
  return r > 0 && ProjectionBound(bounds, r) <= epsilon / 2.0;
}

std::size_t ChooseR(const RieszBounds& bounds, double epsilon) {
  if (!(epsilon > 0.0)) throw Error("epsilon must be positive");
  if (!(bounds.lower > 0.0 && bounds.lower <= bounds.upper)) {
    throw Error("Riesz bounds must satisfy 0 < A <= B");
  }
  const double x = 2.0 * Fourth(bounds.upper) / (Fourth(bounds.lower) * epsilon);
  if (!(x < 1e15)) throw Error("required r is too large");
  auto r = static_cast<std::size_t>(std::max(1.0, std::ceil(x)));
  while (r > 1 && SatisfiesRBound(bounds, epsilon, r - 1)) --r;
  while (!SatisfiesRBound(bounds, epsilon, r)) ++r;
  return r;
}

double VerifyStep2(const Matrix& g, const Partition& p, const RieszBounds& bounds,
                   std::size_t r) {
  if (r == 0) throw Error("r must be positive");
  const std::optional<double> s1 = StepOneMargin(g, p);
  if (s1 && *s1 < -1e-10) throw Error("partition is not Step-1 certified");
  const double bound = bounds.upper * bounds.upper / static_cast<double>(r);
  double margin = bound;
  for (const auto& b : p.blocks) {
    for (std::size_t i : b) {
      double row = 0.0;
      for (std::size_t l : b) {
        if (l != i) row += std::norm(g(i, l));
      }
      margin = std::min(margin, bound - row);
    }
  }
  return margin;
}

double VerifyStep3(const VectorFamily& family, const Partition& p,
                   const RieszBounds& bounds, std::size_t r) {
  if (r == 0) throw Error("r must be positive");
  const Matrix g = Gram(family);
  const std::optional<double> s1 = StepOneMargin(g, p);
  if (s1 && *s1 < -1e-10) throw Error("partition is not Step-1 certified");
  const double bound = ProjectionBound(bounds, r);
  double margin = bound;
  for (const auto& b : p.blocks) {
    if (b.size() < 2) continue;
    const VectorFamily sub = family.Subfamily(b);
    for (std::size_t a = 0; a < b.size(); ++a) {
      const double res = ProjectionResidual(sub, a);
      margin = std::min(margin, bound - res * res);
    }
  }
  return margin;
}

TriangularBlockData TriangularizeBlock(const VectorFamily& family,
                                       std::span<const std::size_t> block,
                                       double epsilon) {
  TriangularBlockData out;
  out.block.assign(block.begin(), block.end());
  if (block.empty()) return out;
  GramSchmidtResult gs = GramSchmidt(family.Subfamily(block));
  out.ortho = std::move(gs.ortho);
  out.k = std::move(gs.coeffs);
  out.m = out.k;
  for (std::size_t s = 0; s < out.m.rows(); ++s) {
    out.min_diag_sq = std::min(out.min_diag_sq, std::norm(out.k(s, s)));
    out.m(s, s) = 0.0;
  }
  out.m_norm = OperatorNorm(out.m);
  if (out.min_diag_sq < 1.0 - epsilon / 2.0 - 1e-9) {
    throw Error("Step 3 margin insufficient");
  }
  return out;
}

ReductionReport RunReduction(const VectorFamily& family, const ReductionConfig& config) {
  config.Validate();
  if (family.empty()) throw Error("empty family");
  if (!family.IsUnitNorm()) throw Error("family is not unit-norm");

  ReductionReport rep;
  rep.input = family;
  rep.config = config;
  const double eps = config.epsilon;
  const std::size_t n = family.size();
  std::string stage;

  try {
    stage = "bounds";
    rep.bounds = ComputeRieszBounds(family);

    stage = "choose_r";
    rep.r_theoretical = config.r_override ? *config.r_override : ChooseR(rep.bounds, eps);
    rep.r_effective = std::min(rep.r_theoretical, n);
    const std::size_t r = rep.r_theoretical;

    stage = "step1";
    const Matrix g = Gram(family);
    LocalSearchResult ls = HkwLocalSearch(g, rep.r_effective);
    rep.step1_partition = std::move(ls.partition);
    rep.step1_margin = StepOneMargin(g, rep.step1_partition);
    rep.step1_objective = ls.trace.final_objective;
    rep.step1_moves = ls.trace.move_count();

    stage = "step2";
    rep.step2.bound = rep.bounds.upper * rep.bounds.upper / static_cast<double>(r);
    rep.step2.margin = VerifyStep2(g, rep.step1_partition, rep.bounds, r);
    rep.step2.worst = rep.step2.bound - rep.step2.margin;

    stage = "step3";
    rep.step3.bound = ProjectionBound(rep.bounds, r);
    rep.step3.margin = VerifyStep3(family, rep.step1_partition, rep.bounds, r);
    rep.step3.worst = rep.step3.bound - rep.step3.margin;

    rep.corollary.bound = std::sqrt(rep.step3.bound);
    for (const auto& b : rep.step1_partition.blocks) {
      if (b.empty()) continue;
      for (double v : EpsMinimalityValues(family.Subfamily(b))) {
        rep.corollary.worst = std::max(rep.corollary.worst, v);
      }
    }
    rep.corollary.margin = rep.corollary.bound - rep.corollary.worst;

    rep.step4.bound = 1.0 - eps / 2.0;
    rep.step4.worst = 1.0;
    rep.m_norm.bound = rep.bounds.upper + 1.0;
    rep.final_partition.n = n;
    const PavingTarget target{eps / 2.0, true};
    for (std::size_t j = 0; j < rep.step1_partition.blocks.size(); ++j) {
      const auto& block = rep.step1_partition.blocks[j];
      if (block.empty()) continue;

      stage = "step4";
      const TriangularBlockData tri = TriangularizeBlock(family, block, eps);
      rep.step4.worst = std::min(rep.step4.worst, tri.min_diag_sq);
      rep.m_norm.worst = std::max(rep.m_norm.worst, tri.m_norm);

      stage = "paving";
      std::optional<PavingCertificate> cert;
      if (config.paving_method == PavingMethod::kExhaustive) {
        if (block.size() > kExhaustivePavingLimit) {
          throw Error("block of size " + std::to_string(block.size()) +
                      " exceeds the exhaustive paving limit of " +
                      std::to_string(kExhaustivePavingLimit) +
                      "; rerun with the heuristic paving method");
        }
        cert = PaveExhaustive(tri.m, target, block.size());
      } else {
        cert = PaveHeuristic(tri.m, target);
      }
      if (!cert) throw Error("no paving found");

      ReductionReport::BlockData bd;
      bd.step1_block = j;
      bd.indices = block;
      bd.m_norm = tri.m_norm;
      bd.min_diag_sq = tri.min_diag_sq;
      bd.paving = *cert;
      std::size_t pieces = 0;
      for (const auto& local : cert->partition.blocks) {
        if (local.empty()) continue;
        std::vector<std::size_t> global;
        for (std::size_t a : local) global.push_back(block[a]);
        std::sort(global.begin(), global.end());
        rep.final_partition.blocks.push_back(std::move(global));
        ++pieces;
      }
      rep.max_blocks_per_paving = std::max(rep.max_blocks_per_paving, pieces);
      rep.blocks.push_back(std::move(bd));
    }
    rep.step4.margin = rep.step4.worst - rep.step4.bound;
    rep.m_norm.margin = rep.m_norm.bound - rep.m_norm.worst;
    rep.total_blocks = rep.r_effective * rep.max_blocks_per_paving;

    stage = "step5";
    rep.final_check.epsilon = eps;
    for (std::size_t b = 0; b < rep.final_partition.blocks.size(); ++b) {
      const auto& idx = rep.final_partition.blocks[b];
      const EpsRieszResult res = IsEpsRiesz(family.Subfamily(idx), eps);
      rep.final_check.blocks.push_back({b + 1, res.lower, res.upper, res.pass});
    }
  } catch (const Error& e) {
    rep.error = ReductionReport::StageError{stage, e.what()};
    rep.pass = false;
    return rep;
  }

  const double tol = config.tolerance;
  bool ok = !rep.step1_margin || *rep.step1_margin >= -tol;
  ok = ok && rep.step2.margin >= -tol && rep.step3.margin >= -tol;
  ok = ok && rep.corollary.margin >= -tol && rep.step4.margin >= -tol;
  ok = ok && rep.m_norm.margin >= -tol;
  ok = ok && std::all_of(rep.blocks.begin(), rep.blocks.end(),
                         [](const auto& b) { return b.paving.pass; });
  ok = ok && rep.final_check.AllPass();
  ok = ok && rep.final_partition.Refines(rep.step1_partition);
  rep.pass = ok;
  return rep;
}

nlohmann::ordered_json ReductionReport::ToJson() const {
  using json = nlohmann::ordered_json;
  json j;
  j["kind"] = "reduction_report";
  j["config"] = {{"epsilon", config.epsilon},
                 {"paving_method", ToString(config.paving_method)},
                 {"r_override", config.r_override ? json(*config.r_override) : json(nullptr)},
                 {"tolerance", config.tolerance}};
  j["input"] = {{"n", input.size()}, {"dim", input.dim()}, {"family", FamilyToJson(input)}};
  j["bounds"] = {{"lower", bounds.lower}, {"upper", bounds.upper}};
  j["r"] = {{"theoretical", r_theoretical}, {"effective", r_effective}};
  j["step1"] = {{"partition", PartitionToJson(step1_partition)},
                {"objective", step1_objective},
                {"moves", step1_moves},
                {"margin", step1_margin ? json(*step1_margin) : json(nullptr)}};
  j["step2"] = MarginJson(step2);
  j["step3"] = MarginJson(step3);
  j["corollary"] = MarginJson(corollary);
  j["step4"] = MarginJson(step4);
  j["m_norm"] = MarginJson(m_norm);
  j["blocks"] = json::array();
  for (const BlockData& b : blocks) {
    j["blocks"].push_back({{"step1_block", b.step1_block + 1},
                           {"indices", IndicesJson(b.indices)},
                           {"m_norm", b.m_norm},
                           {"min_diag_sq", b.min_diag_sq},
                           {"paving", CertificateToJson(b.paving)}});
  }
  j["final"] = {{"partition", PartitionToJson(final_partition)},
                {"eps_riesz", final_check.ToJson()}};
  j["max_blocks_per_paving"] = max_blocks_per_paving;
  j["total_blocks"] = total_blocks;
  j["error"] = error ? json{{"stage", error->stage}, {"message", error->message}}
                     : json(nullptr);
  j["pass"] = pass;
  return j;
}

}  // namespace tripave
