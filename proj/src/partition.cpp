#include "tripave/partition.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace tripave {

namespace {

void CheckShape(const Matrix& g, const Partition& p) {
  if (!g.square()) throw Error("Gram matrix must be square");
  if (g.rows() != p.n) throw Error("partition/matrix size mismatch");
}

// Squared moduli, row-major; the search loops read this repeatedly.
std::vector<double> SquaredModuli(const Matrix& g) {
  std::vector<double> w(g.rows() * g.cols());
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = std::norm(g.data()[k]);
  return w;
}

// Sum of w(i, l) over l in block, skipping l == i.
double RowMass(const std::vector<double>& w, std::size_t n, std::size_t i,
               const std::vector<std::size_t>& block) {
  double s = 0.0;
  for (std::size_t l : block) {
    if (l != i) s += w[i * n + l];
  }
  return s;
}

}  // namespace

Partition Partition::FromAssignment(std::span<const std::size_t> assignment,
                                    std::size_t num_blocks) {
  Partition p;
  p.n = assignment.size();
  p.blocks.assign(num_blocks, {});
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] >= num_blocks) throw Error("block label out of range");
    p.blocks[assignment[i]].push_back(i);
  }
  return p;
}

Partition Partition::RoundRobin(std::size_t n, std::size_t num_blocks) {
  if (num_blocks == 0) throw Error("need at least one block");
  std::vector<std::size_t> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = i % num_blocks;
  return FromAssignment(a, num_blocks);
}

Partition Partition::Singletons(std::size_t n) { return RoundRobin(n, std::max<std::size_t>(n, 1)); }

std::size_t Partition::NonEmptyBlocks() const {
  return static_cast<std::size_t>(std::count_if(
      blocks.begin(), blocks.end(), [](const auto& b) { return !b.empty(); }));
}

std::vector<std::size_t> Partition::Assignment() const {
  std::vector<std::size_t> a(n, std::numeric_limits<std::size_t>::max());
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    for (std::size_t i : blocks[j]) a.at(i) = j;
  }
  return a;
}

void Partition::Validate() const {
  if (blocks.empty()) throw Error("partition needs at least one block");
  std::vector<bool> seen(n, false);
  std::size_t count = 0;
  for (const auto& b : blocks) {
    for (std::size_t i : b) {
      if (i >= n) throw Error("partition index out of range");
      if (seen[i]) throw Error("partition blocks overlap");
      seen[i] = true;
      ++count;
    }
  }
  if (count != n) throw Error("partition does not cover the index set");
}

bool Partition::Refines(const Partition& coarse) const {
  if (coarse.n != n) return false;
  const std::vector<std::size_t> label = coarse.Assignment();
  for (const auto& b : blocks) {
    for (std::size_t i : b) {
      if (label[i] != label[b.front()]) return false;
    }
  }
  return true;
}

nlohmann::ordered_json PartitionToJson(const Partition& p) {
  nlohmann::ordered_json j;
  j["n"] = p.n;
  j["blocks"] = nlohmann::ordered_json::array();
  for (const auto& b : p.blocks) {
    std::vector<std::size_t> one_based(b.begin(), b.end());
    std::sort(one_based.begin(), one_based.end());
    for (std::size_t& i : one_based) ++i;
    j["blocks"].push_back(one_based);
  }
  return j;
}

Partition PartitionFromJson(const nlohmann::ordered_json& j) {
  Partition p;
  p.n = j.at("n").get<std::size_t>();
  for (const auto& jb : j.at("blocks")) {
    std::vector<std::size_t> b;
    for (const auto& x : jb) {
      const auto i = x.get<std::size_t>();
      if (i == 0) throw Error("partition indices are 1-based");
      b.push_back(i - 1);
    }
    std::sort(b.begin(), b.end());
    p.blocks.push_back(std::move(b));
  }
  p.Validate();
  return p;
}

double PartitionObjective(const Matrix& g, const Partition& p) {
  CheckShape(g, p);
  p.Validate();
  double total = 0.0;
  for (const auto& b : p.blocks) {
    for (std::size_t i : b) {
      for (std::size_t l : b) {
        if (i != l) total += std::norm(g(i, l));
      }
    }
  }
  return total;
}

std::optional<double> StepOneMargin(const Matrix& g, const Partition& p) {
  CheckShape(g, p);
  p.Validate();
  const std::size_t n = p.n;
  const std::vector<double> w = SquaredModuli(g);
  std::optional<double> margin;
  for (std::size_t j = 0; j < p.blocks.size(); ++j) {
    for (std::size_t i : p.blocks[j]) {
      const double own = RowMass(w, n, i, p.blocks[j]);
      for (std::size_t k = 0; k < p.blocks.size(); ++k) {
        if (k == j) continue;
        const double slack = RowMass(w, n, i, p.blocks[k]) - own;
        margin = margin ? std::min(*margin, slack) : slack;
      }
    }
  }
  return margin;
}

LocalSearchResult HkwLocalSearch(const Matrix& g, std::size_t r,
                                 const std::optional<Partition>& initial) {
  if (!g.square()) throw Error("Gram matrix must be square");
  if (r == 0) throw Error("r must be at least 1");
  const std::size_t n = g.rows();
  Partition start = initial ? *initial : Partition::RoundRobin(n, r);
  CheckShape(g, start);
  start.Validate();
  if (start.num_blocks() > r) throw Error("initial partition has more than r blocks");
  start.blocks.resize(r);

  const std::vector<double> w = SquaredModuli(g);
  std::vector<std::size_t> label = start.Assignment();
  // mass[i * r + k] = sum_{l in block k, l != i} w(i, l).
  std::vector<double> mass(n * r, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = 0; l < n; ++l) {
      if (l != i) mass[i * r + label[l]] += w[i * n + l];
    }
  }

  LocalSearchResult result;
  result.trace.initial_objective = PartitionObjective(g, start);
  double objective = result.trace.initial_objective;
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t i = 0; i < n && !improved; ++i) {
      const std::size_t from = label[i];
      for (std::size_t to = 0; to < r; ++to) {
        if (to == from) continue;
        // Both ordered pairs (i,l) and (l,i) change, hence the factor 2.
        const double delta = 2.0 * (mass[i * r + to] - mass[i * r + from]);
        if (delta < -kImprovementThreshold) {
          for (std::size_t l = 0; l < n; ++l) {
            if (l == i) continue;
            mass[l * r + from] -= w[l * n + i];
            mass[l * r + to] += w[l * n + i];
          }
          label[i] = to;
          objective += delta;
          result.trace.moves.push_back({i, from, to, delta});
          improved = true;
          break;
        }
      }
    }
  }
  result.partition = Partition::FromAssignment(label, r);
  result.trace.final_objective = objective;
  return result;
}

Partition BruteForceMinPartition(const Matrix& g, std::size_t r) {
  if (!g.square()) throw Error("Gram matrix must be square");
  if (r == 0) throw Error("r must be at least 1");
  const std::size_t n = g.rows();
  if (n > kExhaustivePartitionLimit) {
    throw Error("instance too large for exhaustive oracle");
  }
  const std::vector<double> w = SquaredModuli(g);
  std::vector<std::size_t> label(n, 0);
  std::vector<std::size_t> best_label;
  double best = std::numeric_limits<double>::infinity();

  // Depth-first in lexicographic order over restricted-growth labelings;
  // any minimizer relabels to one of these that is lexicographically
  // no larger. Only strictly better values replace the incumbent.
  auto dfs = [&](auto&& self, std::size_t i, std::size_t used, double partial) -> void {
    if (partial >= best) return;
    if (i == n) {
      best = partial;
      best_label = label;
      return;
    }
    const std::size_t limit = std::min(r, used + 1);
    for (std::size_t k = 0; k < limit; ++k) {
      double add = 0.0;
      for (std::size_t l = 0; l < i; ++l) {
        if (label[l] == k) add += w[i * n + l] + w[l * n + i];
      }
      label[i] = k;
      self(self, i + 1, std::max(used, k + 1), partial + add);
    }
  };
  dfs(dfs, 0, 0, 0.0);
  if (n == 0) return Partition{0, std::vector<std::vector<std::size_t>>(r)};
  return Partition::FromAssignment(best_label, r);
}

}  // namespace tripave
