#include "tripave/paving.hpp"

#include <algorithm>
#include <cmath>

namespace tripave {

namespace {

void RequireSquare(const Matrix& t) {
  if (!t.square()) throw Error("matrix must be square");
}

void RequireZeroDiagonal(const Matrix& t) {
  RequireSquare(t);
  for (std::size_t i = 0; i < t.rows(); ++i) {
    if (std::abs(t(i, i)) > kZeroDiagonalTol) throw Error("pave the zero-diagonal part");
  }
}

double BlockNorm(const Matrix& t, std::span<const std::size_t> block) {
  if (block.empty()) return 0.0;
  return OperatorNorm(PrincipalSubmatrix(t, block));
}

Partition DropEmpty(const Partition& p) {
  Partition out{p.n, {}};
  for (const auto& b : p.blocks) {
    if (!b.empty()) out.blocks.push_back(b);
  }
  if (out.blocks.empty()) out.blocks.emplace_back();
  return out;
}

// Lexicographic objective for the heuristic search.
struct Score {
  double max_norm;
  double sum_sq;
  bool Better(const Score& o) const {
    if (max_norm < o.max_norm - 1e-15) return true;
    if (max_norm > o.max_norm + 1e-15) return false;
    return sum_sq < o.sum_sq - 1e-15;
  }
};

Score ScoreOf(const std::vector<double>& norms) {
  Score s{0.0, 0.0};
  for (double x : norms) {
    s.max_norm = std::max(s.max_norm, x);
    s.sum_sq += x * x;
  }
  return s;
}

// First-improvement descent from round-robin over r blocks.
Partition LocalPaving(const Matrix& t, std::size_t r) {
  const std::size_t n = t.rows();
  std::vector<std::size_t> label(n);
  std::vector<std::vector<std::size_t>> blocks(r);
  for (std::size_t i = 0; i < n; ++i) {
    label[i] = i % r;
    blocks[i % r].push_back(i);
  }
  std::vector<double> norms(r);
  for (std::size_t k = 0; k < r; ++k) norms[k] = BlockNorm(t, blocks[k]);
  Score current = ScoreOf(norms);

  const std::size_t max_moves = 50 * n * r;
  std::size_t moves = 0;
  bool improved = true;
  while (improved && moves < max_moves) {
    improved = false;
    for (std::size_t i = 0; i < n && !improved; ++i) {
      const std::size_t from = label[i];
      std::vector<std::size_t> shrunk;
      for (std::size_t l : blocks[from]) {
        if (l != i) shrunk.push_back(l);
      }
      const double shrunk_norm = BlockNorm(t, shrunk);
      for (std::size_t to = 0; to < r; ++to) {
        if (to == from) continue;
        std::vector<std::size_t> grown = blocks[to];
        grown.insert(std::upper_bound(grown.begin(), grown.end(), i), i);
        const double grown_norm = BlockNorm(t, grown);
        std::vector<double> trial = norms;
        trial[from] = shrunk_norm;
        trial[to] = grown_norm;
        const Score s = ScoreOf(trial);
        if (s.Better(current)) {
          blocks[from] = std::move(shrunk);
          blocks[to] = std::move(grown);
          norms = std::move(trial);
          label[i] = to;
          current = s;
          improved = true;
          ++moves;
          break;
        }
      }
    }
  }
  return Partition::FromAssignment(label, r);
}

}  // namespace

double PavingCertificate::MaxBlockNorm() const {
  double m = 0.0;
  for (double x : block_norms) m = std::max(m, x);
  return m;
}

Matrix StripDiagonal(const Matrix& t) {
  RequireSquare(t);
  Matrix out = t;
  for (std::size_t i = 0; i < t.rows(); ++i) out(i, i) = 0.0;
  return out;
}

Matrix Compress(const Matrix& t, std::span<const std::size_t> block) {
  RequireSquare(t);
  std::vector<bool> keep(t.rows(), false);
  for (std::size_t i : block) {
    if (i >= t.rows()) throw Error("block index out of range");
    keep[i] = true;
  }
  Matrix out(t.rows(), t.cols());
  for (std::size_t i = 0; i < t.rows(); ++i) {
    if (!keep[i]) continue;
    for (std::size_t j = 0; j < t.cols(); ++j) {
      if (keep[j]) out(i, j) = t(i, j);
    }
  }
  return out;
}

Matrix PrincipalSubmatrix(const Matrix& t, std::span<const std::size_t> block) {
  RequireSquare(t);
  Matrix out(block.size(), block.size());
  for (std::size_t a = 0; a < block.size(); ++a) {
    if (block[a] >= t.rows()) throw Error("block index out of range");
    for (std::size_t b = 0; b < block.size(); ++b) out(a, b) = t(block[a], block[b]);
  }
  return out;
}

PavingNormResult PavingNorm(const Matrix& t, const Partition& p) {
  RequireSquare(t);
  if (t.rows() != p.n) throw Error("partition/matrix size mismatch");
  p.Validate();
  PavingNormResult out{0.0, {}};
  for (const auto& b : p.blocks) {
    const double x = t.empty() ? 0.0 : OperatorNorm(Compress(t, b));
    out.per_block.push_back(x);
    out.max_norm = std::max(out.max_norm, x);
  }
  return out;
}

PavingCertificate Certify(const Matrix& t, const Partition& p, PavingTarget target,
                          std::string method) {
  PavingCertificate c;
  c.partition = p;
  c.epsilon = target.epsilon;
  c.absolute = target.absolute;
  c.reference_norm = t.empty() ? 0.0 : OperatorNorm(t);
  c.block_norms = PavingNorm(t, p).per_block;
  c.pass = c.MaxBlockNorm() <= c.Bound() + kPavingTol;
  c.method = std::move(method);
  return c;
}

std::optional<PavingCertificate> PaveExhaustive(const Matrix& t, PavingTarget target,
                                                std::size_t r_max) {
  RequireZeroDiagonal(t);
  const std::size_t n = t.rows();
  if (n > kExhaustivePavingLimit) {
    throw Error("instance too large for exhaustive paving; use the heuristic method");
  }
  if (r_max == 0) throw Error("r_max must be at least 1");
  const double bound =
      (target.absolute ? target.epsilon : target.epsilon * OperatorNorm(t)) + kPavingTol;

  for (std::size_t r = 1; r <= r_max; ++r) {
    std::vector<std::size_t> label(n, 0);
    std::vector<std::vector<std::size_t>> blocks(r);
    bool found = false;
    // Block norms only grow when an index joins, so an infeasible prefix
    // has no feasible completion.
    auto dfs = [&](auto&& self, std::size_t i, std::size_t used) -> void {
      if (i == n) {
        found = true;
        return;
      }
      const std::size_t limit = std::min(r, used + 1);
      for (std::size_t k = 0; k < limit && !found; ++k) {
        blocks[k].push_back(i);
        if (BlockNorm(t, blocks[k]) <= bound) {
          label[i] = k;
          self(self, i + 1, std::max(used, k + 1));
        }
        if (!found) blocks[k].pop_back();
      }
    };
    dfs(dfs, 0, 0);
    if (found) {
      return Certify(t, Partition::FromAssignment(label, r), target, "brute_force");
    }
  }
  return std::nullopt;
}

PavingCertificate PaveHeuristic(const Matrix& t, PavingTarget target) {
  RequireZeroDiagonal(t);
  const std::size_t n = t.rows();
  const double bound =
      (target.absolute ? target.epsilon : target.epsilon * OperatorNorm(t)) + kPavingTol;
  for (std::size_t r = 1; r < n; r *= 2) {
    const Partition p = DropEmpty(LocalPaving(t, r));
    if (PavingNorm(t, p).max_norm <= bound) return Certify(t, p, target, "heuristic");
  }
  return Certify(t, Partition::Singletons(n), target, "heuristic");
}

std::optional<PavingCertificate> BruteForcePaving(const Matrix& t, double epsilon,
                                                  std::size_t r_max) {
  return PaveExhaustive(t, {epsilon, false}, r_max);
}

PavingCertificate HeuristicPaving(const Matrix& t, double epsilon) {
  return PaveHeuristic(t, {epsilon, false});
}

nlohmann::ordered_json CertificateToJson(const PavingCertificate& c) {
  nlohmann::ordered_json j;
  if (!c.matrix_id.empty()) j["matrix_id"] = c.matrix_id;
  j["epsilon"] = c.epsilon;
  j["absolute"] = c.absolute;
  j["reference_norm"] = c.reference_norm;
  j["partition"] = PartitionToJson(c.partition);
  j["block_norms"] = c.block_norms;
  j["pass"] = c.pass;
  j["method"] = c.method;
  return j;
}

PavingCertificate CertificateFromJson(const nlohmann::ordered_json& j) {
  PavingCertificate c;
  c.matrix_id = j.value("matrix_id", std::string{});
  c.epsilon = j.at("epsilon").get<double>();
  c.absolute = j.value("absolute", false);
  c.reference_norm = j.at("reference_norm").get<double>();
  c.partition = PartitionFromJson(j.at("partition"));
  c.block_norms = j.at("block_norms").get<std::vector<double>>();
  c.pass = j.at("pass").get<bool>();
  c.method = j.at("method").get<std::string>();
  return c;
}

}  // namespace tripave
