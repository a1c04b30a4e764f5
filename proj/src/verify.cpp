#include "tripave/verify.hpp"

#include <cmath>
#include <optional>
#include <sstream>

#include "tripave/instance.hpp"
#include "tripave/io.hpp"
#include "tripave/paving.hpp"
#include "tripave/reduction.hpp"

namespace tripave {

namespace {

using json = nlohmann::ordered_json;

class Checker {
 public:
  explicit Checker(double tol) : tol_(tol) {}

  void Near(const std::string& what, const json& claimed, double actual) {
    if (!claimed.is_number()) {
      Fail(what + ": missing numeric value");
      return;
    }
    const double c = claimed.get<double>();
    if (!(std::abs(c - actual) <= tol_)) {
      std::ostringstream os;
      os.precision(17);
      os << what << ": claimed " << c << ", recomputed " << actual;
      Fail(os.str());
    }
  }

  void Equal(const std::string& what, bool ok) {
    if (!ok) Fail(what + ": mismatch");
  }

  void Fail(std::string msg) { findings_.push_back(std::move(msg)); }
  bool clean() const { return findings_.empty(); }
  std::vector<std::string>& findings() { return findings_; }

 private:
  double tol_;
  std::vector<std::string> findings_;
};

void CheckMargin(Checker& ck, const std::string& name, const json& j, double bound,
                 double worst) {
  ck.Near(name + ".bound", j.at("bound"), bound);
  ck.Near(name + ".worst", j.at("worst"), worst);
  ck.Near(name + ".margin", j.at("margin"), name == "step4" ? worst - bound : bound - worst);
}

VerifyResult Finish(Checker& ck, bool claimed_pass) {
  VerifyResult r;
  r.findings = std::move(ck.findings());
  if (!r.findings.empty()) {
    r.status = VerifyStatus::kFail;
  } else if (!claimed_pass) {
    r.status = VerifyStatus::kFail;
    r.findings.push_back("document certifies a failure");
  }
  return r;
}

VerifyResult InputError(const std::string& msg) {
  return {VerifyStatus::kInputError, {msg}};
}

}  // namespace

VerifyResult VerifyReport(const json& report, double tolerance) {
  VectorFamily family;
  ReductionConfig config;
  json claimed_pass;
  try {
    if (!report.contains("input") || !report.at("input").contains("family")) {
      return InputError("report does not embed its input family");
    }
    family = FamilyFromJson(report.at("input").at("family"));
    const json& jc = report.at("config");
    config.epsilon = jc.at("epsilon").get<double>();
    config.paving_method = PavingMethodFromString(jc.at("paving_method").get<std::string>());
    if (!jc.at("r_override").is_null()) config.r_override = jc.at("r_override").get<std::size_t>();
    config.tolerance = jc.at("tolerance").get<double>();
    config.Validate();
    claimed_pass = report.at("pass");
  } catch (const std::exception& e) {
    return InputError(std::string("malformed report: ") + e.what());
  }

  Checker ck(tolerance);
  const double eps = config.epsilon;
  const bool claims_pass = claimed_pass.is_boolean() && claimed_pass.get<bool>();

  if (!report.at("error").is_null()) {
    // A failed run: the only claim is the failing stage; rerun and compare.
    const ReductionReport rerun = RunReduction(family, config);
    ck.Equal("error stage", rerun.error &&
                                rerun.error->stage ==
                                    report.at("error").at("stage").get<std::string>());
    ck.Equal("pass flag", !claims_pass);
    return Finish(ck, claims_pass);
  }

  try {
    const std::size_t n = family.size();
    const RieszBounds bounds = ComputeRieszBounds(family);
    ck.Near("bounds.lower", report.at("bounds").at("lower"), bounds.lower);
    ck.Near("bounds.upper", report.at("bounds").at("upper"), bounds.upper);

    const std::size_t r = config.r_override ? *config.r_override : ChooseR(bounds, eps);
    ck.Equal("r.theoretical", report.at("r").at("theoretical").get<std::size_t>() == r);
    ck.Equal("r.effective",
             report.at("r").at("effective").get<std::size_t>() == std::min(r, n));
    ck.Equal("r bound", SatisfiesRBound(bounds, eps, r) || config.r_override.has_value());

    const Matrix g = Gram(family);
    const Partition step1 = PartitionFromJson(report.at("step1").at("partition"));
    ck.Equal("step1 partition size", step1.n == n && step1.num_blocks() <= std::min(r, n));
    const std::optional<double> s1 = StepOneMargin(g, step1);
    const json& s1c = report.at("step1").at("margin");
    if (s1) {
      ck.Near("step1.margin", s1c, *s1);
      ck.Equal("step1 exchange inequality", *s1 >= -1e-10);
    } else {
      ck.Equal("step1.margin", s1c.is_null());
    }
    ck.Near("step1.objective", report.at("step1").at("objective"), PartitionObjective(g, step1));

    const double b2 = bounds.upper * bounds.upper / static_cast<double>(r);
    const double m2 = VerifyStep2(g, step1, bounds, r);
    CheckMargin(ck, "step2", report.at("step2"), b2, b2 - m2);
    const double b3 = std::pow(bounds.upper / bounds.lower, 4) / static_cast<double>(r);
    const double m3 = VerifyStep3(family, step1, bounds, r);
    CheckMargin(ck, "step3", report.at("step3"), b3, b3 - m3);

    double cor = 0.0;
    for (const auto& b : step1.blocks) {
      if (b.empty()) continue;
      for (double v : EpsMinimalityValues(family.Subfamily(b))) cor = std::max(cor, v);
    }
    CheckMargin(ck, "corollary", report.at("corollary"), std::sqrt(b3), cor);

    // Per-block triangularization and pavings.
    std::vector<const std::vector<std::size_t>*> nonempty;
    for (const auto& b : step1.blocks) {
      if (!b.empty()) nonempty.push_back(&b);
    }
    const json& jblocks = report.at("blocks");
    ck.Equal("block count", jblocks.size() == nonempty.size());
    double min_diag = 1.0;
    double max_m = 0.0;
    std::size_t max_pieces = 0;
    Partition final_expected{n, {}};
    const std::size_t nb = std::min<std::size_t>(jblocks.size(), nonempty.size());
    for (std::size_t b = 0; b < nb; ++b) {
      const std::string tag = "blocks[" + std::to_string(b) + "]";
      const json& jb = jblocks[b];
      const std::vector<std::size_t>& idx = *nonempty[b];
      std::vector<std::size_t> claimed_idx;
      for (const auto& x : jb.at("indices")) claimed_idx.push_back(x.get<std::size_t>() - 1);
      ck.Equal(tag + ".indices", claimed_idx == idx);

      // Recompute the triangular data directly, without the eps check, so
      // a failing Step 4 still reports its numbers.
      const GramSchmidtResult gs = GramSchmidt(family.Subfamily(idx));
      Matrix m = gs.coeffs;
      double block_min_diag = 1.0;
      for (std::size_t s = 0; s < m.rows(); ++s) {
        block_min_diag = std::min(block_min_diag, std::norm(gs.coeffs(s, s)));
        m(s, s) = 0.0;
      }
      const double m_norm = OperatorNorm(m);
      ck.Near(tag + ".m_norm", jb.at("m_norm"), m_norm);
      ck.Near(tag + ".min_diag_sq", jb.at("min_diag_sq"), block_min_diag);
      min_diag = std::min(min_diag, block_min_diag);
      max_m = std::max(max_m, m_norm);

      const PavingCertificate claimed = CertificateFromJson(jb.at("paving"));
      ck.Equal(tag + ".paving target",
               claimed.absolute && std::abs(claimed.epsilon - eps / 2.0) <= 1e-15);
      const PavingCertificate fresh =
          Certify(m, claimed.partition, {eps / 2.0, true}, claimed.method);
      ck.Near(tag + ".paving.reference_norm", jb.at("paving").at("reference_norm"),
              fresh.reference_norm);
      const json& jn = jb.at("paving").at("block_norms");
      ck.Equal(tag + ".paving.block_norms size", jn.size() == fresh.block_norms.size());
      for (std::size_t k = 0; k < std::min<std::size_t>(jn.size(), fresh.block_norms.size()); ++k) {
        ck.Near(tag + ".paving.block_norms[" + std::to_string(k) + "]", jn[k],
                fresh.block_norms[k]);
      }
      ck.Equal(tag + ".paving.pass", claimed.pass == fresh.pass);
      ck.Equal(tag + ".paving passes", fresh.pass);

      std::size_t pieces = 0;
      for (const auto& local : claimed.partition.blocks) {
        if (local.empty()) continue;
        std::vector<std::size_t> global;
        for (std::size_t a : local) global.push_back(idx.at(a));
        std::sort(global.begin(), global.end());
        final_expected.blocks.push_back(std::move(global));
        ++pieces;
      }
      max_pieces = std::max(max_pieces, pieces);
    }
    CheckMargin(ck, "step4", report.at("step4"), 1.0 - eps / 2.0, min_diag);
    CheckMargin(ck, "m_norm", report.at("m_norm"), bounds.upper + 1.0, max_m);
    ck.Equal("max_blocks_per_paving",
             report.at("max_blocks_per_paving").get<std::size_t>() == max_pieces);
    ck.Equal("total_blocks",
             report.at("total_blocks").get<std::size_t>() == std::min(r, n) * max_pieces);

    const Partition final_claimed = PartitionFromJson(report.at("final").at("partition"));
    ck.Equal("final partition", final_claimed == final_expected);
    ck.Equal("final refines step1", final_claimed.Refines(step1));

    bool all_final = true;
    const json& jf = report.at("final").at("eps_riesz").at("blocks");
    ck.Equal("final block count", jf.size() == final_claimed.blocks.size());
    for (std::size_t b = 0; b < std::min<std::size_t>(jf.size(), final_claimed.blocks.size()); ++b) {
      const std::string tag = "final[" + std::to_string(b) + "]";
      const EpsRieszResult res = IsEpsRiesz(family.Subfamily(final_claimed.blocks[b]), eps);
      ck.Near(tag + ".lower", jf[b].at("lower"), res.lower);
      ck.Near(tag + ".upper", jf[b].at("upper"), res.upper);
      ck.Equal(tag + ".pass", jf[b].at("pass").get<bool>() == res.pass);
      all_final = all_final && res.pass;
    }

    const double tol = config.tolerance;
    const bool recomputed_pass =
        (!s1 || *s1 >= -tol) && m2 >= -tol &&
        m3 >= -tol && std::sqrt(b3) - cor >= -tol && min_diag - (1.0 - eps / 2.0) >= -tol &&
        bounds.upper + 1.0 - max_m >= -tol && all_final && ck.clean();
    ck.Equal("pass flag", recomputed_pass == claims_pass);
  } catch (const std::exception& e) {
    ck.Fail(std::string("recomputation failed: ") + e.what());
  }
  return Finish(ck, claims_pass);
}

VerifyResult VerifyCertificate(const json& cert, double tolerance) {
  Matrix t;
  PavingCertificate claimed;
  try {
    if (!cert.contains("matrix")) return InputError("certificate does not embed its matrix");
    t = MatrixFromJson(cert.at("matrix"));
    claimed = CertificateFromJson(cert);
  } catch (const std::exception& e) {
    return InputError(std::string("malformed certificate: ") + e.what());
  }
  Checker ck(tolerance);
  try {
    const PavingCertificate fresh =
        Certify(t, claimed.partition, {claimed.epsilon, claimed.absolute}, claimed.method);
    ck.Near("reference_norm", cert.at("reference_norm"), fresh.reference_norm);
    const json& jn = cert.at("block_norms");
    ck.Equal("block_norms size", jn.size() == fresh.block_norms.size());
    for (std::size_t k = 0; k < std::min<std::size_t>(jn.size(), fresh.block_norms.size()); ++k) {
      ck.Near("block_norms[" + std::to_string(k) + "]", jn[k], fresh.block_norms[k]);
    }
    ck.Equal("pass flag", claimed.pass == fresh.pass);
  } catch (const std::exception& e) {
    ck.Fail(std::string("recomputation failed: ") + e.what());
  }
  return Finish(ck, claimed.pass);
}

VerifyResult VerifyDocument(const json& doc, double tolerance) {
  const std::string kind = doc.value("kind", std::string{});
  if (kind == "reduction_report") return VerifyReport(doc, tolerance);
  if (kind == "paving_certificate") return VerifyCertificate(doc, tolerance);
  return InputError("unrecognized document kind '" + kind + "'");
}

}  // namespace tripave
