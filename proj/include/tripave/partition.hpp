#pragma once

// Step-one partition search: the within-block squared-correlation objective
// and a single-index-move local search whose fixed points satisfy the
// exchange inequality
//   sum_{l in A_j, l != i} |g(i,l)|^2 <= sum_{l in A_k} |g(i,l)|^2
// for every block j, i in A_j and k != j.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"
#include "tripave/linalg.hpp"

namespace tripave {

// Labeled set partition of {0, ..., n-1}. Blocks may be empty; indices are
// kept sorted within a block.
struct Partition {
  std::size_t n = 0;
  std::vector<std::vector<std::size_t>> blocks;

  // assignment[i] is the block label of index i.
  static Partition FromAssignment(std::span<const std::size_t> assignment,
                                  std::size_t num_blocks);
  static Partition RoundRobin(std::size_t n, std::size_t num_blocks);
  static Partition Singletons(std::size_t n);

  std::size_t num_blocks() const { return blocks.size(); }
  std::size_t NonEmptyBlocks() const;
  std::vector<std::size_t> Assignment() const;
  // Throws Error unless blocks are disjoint, in range and cover {0..n-1}.
  void Validate() const;
  // Every block of *this lies inside one block of `coarse`.
  bool Refines(const Partition& coarse) const;

  friend bool operator==(const Partition&, const Partition&) = default;
};

// {"n": k, "blocks": [[...], ...]} with 1-based indices.
nlohmann::ordered_json PartitionToJson(const Partition& p);
Partition PartitionFromJson(const nlohmann::ordered_json& j);

struct Move {
  std::size_t index;
  std::size_t from;
  std::size_t to;
  double delta;
};

struct LocalSearchTrace {
  double initial_objective = 0.0;
  std::vector<Move> moves;
  double final_objective = 0.0;
  std::size_t move_count() const { return moves.size(); }
};

// Sum over blocks of sum over ordered pairs i != l in the block of |g(i,l)|^2.
double PartitionObjective(const Matrix& g, const Partition& p);

// Smallest slack of the exchange inequality over all (j, i, k != j);
// nullopt when there is no pair of distinct blocks to compare.
std::optional<double> StepOneMargin(const Matrix& g, const Partition& p);

struct LocalSearchResult {
  Partition partition;
  LocalSearchTrace trace;
};

inline constexpr double kImprovementThreshold = 1e-15;

// First-improvement descent over single-index moves: indices ascending,
// target blocks ascending. Default start is round-robin i -> i mod r.
LocalSearchResult HkwLocalSearch(const Matrix& g, std::size_t r,
                                 const std::optional<Partition>& initial = {});

inline constexpr std::size_t kExhaustivePartitionLimit = 14;

// Global minimizer over all labelings into r blocks; ties go to the
// lexicographically smallest assignment vector.
Partition BruteForceMinPartition(const Matrix& g, std::size_t r);

}  // namespace tripave
