// tripave: command-line front end for the triangular paving reduction.
//
//   tripave generate  --kind random_riesz --n 10 --condition 3 --seed 42
//   tripave reduce    --n 12 --epsilon 0.5 --seed 7 --json
//   tripave pave      matrix.json --epsilon 0.5 --method exhaustive
//   tripave partition --gram-file g.json --r 3
//   tripave bounds    --family-file f.json --epsilon 0.25
//   tripave verify    report.json
//
// Exit codes: 0 success/pass, 1 certified failure, 2 usage or input error.

#include <chrono>
#include <ctime>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "tripave/instance.hpp"
#include "tripave/io.hpp"
#include "tripave/partition.hpp"
#include "tripave/paving.hpp"
#include "tripave/reduction.hpp"
#include "tripave/riesz.hpp"
#include "tripave/verify.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace tripave;

constexpr const char* kVersion = "0.1.0";

struct GlobalOptions {
  std::uint64_t seed = 0;
  double tolerance = 1e-8;
  bool json_out = false;
  std::string out;
};

struct InputOptions {
  std::string kind = "random_riesz";
  std::size_t n = 8;
  double condition = 2.0;
  std::string family_file;
  std::string gram_file;
};

void AddInputOptions(CLI::App* cmd, InputOptions& in) {
  cmd->add_option("--kind", in.kind,
                  "orthonormal | perturbed_orthonormal | random_riesz | gram_file");
  cmd->add_option("--n", in.n, "number of vectors (= ambient dimension)");
  cmd->add_option("--condition", in.condition, "target B/A (>= 1)");
  cmd->add_option("--family-file", in.family_file, "vector family JSON (rows are vectors)");
  cmd->add_option("--gram-file", in.gram_file, "Gram matrix JSON with unit diagonal");
}

struct LoadedInput {
  VectorFamily family;
  json description;
};

LoadedInput LoadInput(const InputOptions& in, const GlobalOptions& g) {
  if (!in.family_file.empty()) {
    return {FamilyFromJson(ReadJsonFile(in.family_file)),
            {{"source", "family_file"}, {"path", in.family_file}}};
  }
  InstanceSpec spec;
  if (!in.gram_file.empty()) {
    spec.kind = InstanceKind::kGramFile;
    spec.gram_file = in.gram_file;
    return {Generate(spec), {{"source", "gram_file"}, {"path", in.gram_file}}};
  }
  spec.kind = InstanceKindFromString(in.kind);
  spec.n = in.n;
  spec.condition_target = in.condition;
  spec.seed = g.seed;
  return {Generate(spec),
          {{"source", "generated"},
           {"kind", in.kind},
           {"n", in.n},
           {"condition_target", in.condition},
           {"seed", g.seed}}};
}

std::string Timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

// Writes the body to --out (plus a manifest next to it) or to stdout.
void Emit(const GlobalOptions& g, const json& body, const std::string& summary,
          const json& config, const std::string& started) {
  const std::string text = Dump(body);
  if (!g.out.empty()) {
    WriteTextFile(g.out, text);
    json manifest;
    manifest["tool"] = "tripave";
    manifest["version"] = kVersion;
    manifest["config"] = config;
    manifest["rng"] = kRngDescription;
    manifest["body_hash_fnv1a64"] = Fnv1aHex(text);
    manifest["input_hash_fnv1a64"] =
        Fnv1aHex(body.contains("input") ? body.at("input").dump() : body.dump());
    manifest["started_at"] = started;
    manifest["finished_at"] = Timestamp();
    manifest["outputs"] = {g.out};
    WriteTextFile(g.out + ".manifest.json", Dump(manifest));
  }
  if (g.json_out) {
    std::cout << text;
  } else {
    std::cout << summary;
  }
}

std::string Fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Triangular paving reduction workbench"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--seed", g.seed, "random seed")->capture_default_str();
  app.add_option("--tolerance", g.tolerance, "margin / verification tolerance")
      ->capture_default_str();
  app.add_flag("--json", g.json_out, "print JSON instead of a summary");
  app.add_option("--out", g.out, "write the JSON body (and a manifest) here");
  app.fallthrough();

  InputOptions gen_in, red_in, part_in, bnd_in;

  auto* gen = app.add_subcommand("generate", "generate a unit-norm vector family");
  AddInputOptions(gen, gen_in);

  auto* red = app.add_subcommand("reduce", "run the full reduction and emit a report");
  AddInputOptions(red, red_in);
  double red_eps = 0.5;
  std::string red_method = "exhaustive";
  std::optional<std::size_t> red_r;
  red->add_option("--epsilon", red_eps, "target epsilon in (0,1)")->capture_default_str();
  red->add_option("--paving", red_method, "exhaustive | heuristic")->capture_default_str();
  red->add_option("--r", red_r, "override the number of Step-1 blocks");

  auto* pave = app.add_subcommand("pave", "pave a zero-diagonal matrix");
  std::string pave_file;
  double pave_eps = 0.5;
  std::string pave_method = "exhaustive";
  std::optional<std::size_t> pave_rmax;
  bool strip = false;
  pave->add_option("matrix", pave_file, "matrix JSON")->required();
  pave->add_option("--epsilon", pave_eps, "relative target")->capture_default_str();
  pave->add_option("--method", pave_method, "exhaustive | heuristic")->capture_default_str();
  pave->add_option("--r-max", pave_rmax, "largest r tried by the exhaustive search");
  pave->add_flag("--strip-diagonal", strip, "pave T - D(T) instead of refusing");

  auto* part = app.add_subcommand("partition", "Step 1 only: correlation-minimizing partition");
  AddInputOptions(part, part_in);
  std::optional<std::size_t> part_r;
  std::optional<double> part_eps;
  part->add_option("--r", part_r, "number of blocks");
  part->add_option("--epsilon", part_eps, "derive r from the Riesz bounds instead");

  auto* bnd = app.add_subcommand("bounds", "Riesz bounds of a family");
  AddInputOptions(bnd, bnd_in);
  std::optional<double> bnd_eps;
  bnd->add_option("--epsilon", bnd_eps, "also test eps-Riesz and eps-minimality");

  auto* ver = app.add_subcommand("verify", "recompute a report or certificate");
  std::string ver_file;
  ver->add_option("file", ver_file, "report or certificate JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const std::string started = Timestamp();
  try {
    if (*gen) {
      LoadedInput in = LoadInput(gen_in, g);
      json body = FamilyToJson(in.family);
      body["instance"] = in.description;
      const RieszBounds b = ComputeRieszBounds(in.family);
      Emit(g, body,
           "generated " + std::to_string(in.family.size()) + " vectors, A = " + Fmt(b.lower) +
               ", B = " + Fmt(b.upper) + "\n",
           in.description, started);
      return 0;
    }

    if (*red) {
      LoadedInput in = LoadInput(red_in, g);
      ReductionConfig cfg;
      cfg.epsilon = red_eps;
      cfg.paving_method = PavingMethodFromString(red_method);
      cfg.r_override = red_r;
      cfg.tolerance = g.tolerance;
      const ReductionReport rep = RunReduction(in.family, cfg);
      json body = rep.ToJson();
      body["input"]["source"] = in.description;
      std::string summary = std::string(rep.pass ? "PASS" : "FAIL") +
                            ": n = " + std::to_string(in.family.size()) +
                            ", A = " + Fmt(rep.bounds.lower) + ", B = " + Fmt(rep.bounds.upper) +
                            ", r = " + std::to_string(rep.r_theoretical) + " (effective " +
                            std::to_string(rep.r_effective) + "), final blocks = " +
                            std::to_string(rep.final_partition.blocks.size()) + "\n";
      if (rep.error) summary += "  stage " + rep.error->stage + ": " + rep.error->message + "\n";
      json config = body["config"];
      config["input"] = in.description;
      Emit(g, body, summary, config, started);
      return rep.pass ? 0 : 1;
    }

    if (*pave) {
      Matrix t = MatrixFromJson(ReadJsonFile(pave_file));
      if (!t.square()) throw Error("matrix must be square");
      if (strip) t = StripDiagonal(t);
      for (std::size_t i = 0; i < t.rows(); ++i) {
        if (std::abs(t(i, i)) > kZeroDiagonalTol) {
          throw Error("matrix has a nonzero diagonal; pass --strip-diagonal to pave T - D(T)");
        }
      }
      std::optional<PavingCertificate> cert;
      if (PavingMethodFromString(pave_method) == PavingMethod::kExhaustive) {
        cert = BruteForcePaving(t, pave_eps, pave_rmax.value_or(std::max<std::size_t>(t.rows(), 1)));
      } else {
        cert = HeuristicPaving(t, pave_eps);
      }
      json body;
      body["kind"] = "paving_certificate";
      if (cert) {
        cert->matrix_id = std::filesystem::path(pave_file).filename().string();
        const json cj = CertificateToJson(*cert);
        for (const auto& [k, v] : cj.items()) body[k] = v;
      } else {
        body["pass"] = false;
        body["message"] = "no paving within r_max";
      }
      body["matrix"] = MatrixToJson(t);
      std::string summary =
          cert ? std::string(cert->pass ? "PASS" : "FAIL") + ": r = " +
                     std::to_string(cert->partition.NonEmptyBlocks()) + ", max block norm = " +
                     Fmt(cert->MaxBlockNorm()) + ", bound = " + Fmt(cert->Bound()) + "\n"
               : "FAIL: no paving within r_max\n";
      Emit(g, body, summary,
           {{"matrix", pave_file}, {"epsilon", pave_eps}, {"method", pave_method}}, started);
      return cert && cert->pass ? 0 : 1;
    }

    if (*part) {
      LoadedInput in = LoadInput(part_in, g);
      std::size_t r = 0;
      if (part_r) {
        r = *part_r;
      } else if (part_eps) {
        r = std::min(ChooseR(ComputeRieszBounds(in.family), *part_eps), in.family.size());
      } else {
        throw Error("partition needs --r or --epsilon");
      }
      const Matrix gm = Gram(in.family);
      const LocalSearchResult res = HkwLocalSearch(gm, r);
      const std::optional<double> margin = StepOneMargin(gm, res.partition);
      json body;
      body["kind"] = "partition_result";
      body["r"] = r;
      body["partition"] = PartitionToJson(res.partition);
      body["objective"] = res.trace.final_objective;
      body["step1_margin"] = margin ? json(*margin) : json(nullptr);
      json trace;
      trace["initial_objective"] = res.trace.initial_objective;
      trace["final_objective"] = res.trace.final_objective;
      trace["move_count"] = res.trace.move_count();
      trace["moves"] = json::array();
      for (const Move& m : res.trace.moves) {
        trace["moves"].push_back(
            {{"index", m.index + 1}, {"from", m.from + 1}, {"to", m.to + 1}, {"delta", m.delta}});
      }
      body["trace"] = trace;
      Emit(g, body,
           "r = " + std::to_string(r) + ", objective = " + Fmt(res.trace.final_objective) +
               ", moves = " + std::to_string(res.trace.move_count()) + "\n",
           {{"input", in.description}, {"r", r}}, started);
      return 0;
    }

    if (*bnd) {
      LoadedInput in = LoadInput(bnd_in, g);
      const RieszBounds b = ComputeRieszBounds(in.family);
      json body;
      body["kind"] = "riesz_bounds";
      body["lower"] = b.lower;
      body["upper"] = b.upper;
      body["condition"] = b.upper / b.lower;
      std::string summary = "A = " + Fmt(b.lower) + ", B = " + Fmt(b.upper) + "\n";
      if (bnd_eps) {
        const EpsRieszResult er = IsEpsRiesz(in.family, *bnd_eps);
        body["epsilon"] = *bnd_eps;
        body["eps_riesz"] = er.pass;
        const std::vector<double> mins = EpsMinimalityValues(in.family);
        body["eps_minimality_values"] = mins;
        body["eps_minimal"] = IsEpsMinimal(in.family, *bnd_eps);
        summary += std::string("eps-Riesz: ") + (er.pass ? "yes" : "no") + "\n";
      }
      Emit(g, body, summary, {{"input", in.description}}, started);
      return 0;
    }

    if (*ver) {
      const VerifyResult res = VerifyDocument(ReadJsonFile(ver_file), g.tolerance);
      for (const std::string& f : res.findings) std::cerr << f << "\n";
      if (g.json_out) {
        std::cout << Dump({{"status", res.ExitCode()}, {"findings", res.findings}});
      } else {
        std::cout << (res.status == VerifyStatus::kPass   ? "VERIFIED\n"
                      : res.status == VerifyStatus::kFail ? "REJECTED\n"
                                                          : "INPUT ERROR\n");
      }
      return res.ExitCode();
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
