#pragma once

// Seeded instance generation.
//
// Randomness comes from std::mt19937_64 (fully specified by the standard).
// Uniforms are (x >> 11) * 2^-53; normals use Box-Muller with one deviate
// per pair of uniforms: sqrt(-2 ln(1 - u1)) * cos(2 pi u2). No
// implementation-defined <random> distributions are used, so fixtures
// regenerate identically on any conforming toolchain.

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "tripave/linalg.hpp"

namespace tripave {

inline constexpr const char* kRngDescription =
    "mt19937_64; uniform=(x>>11)*2^-53; normal=Box-Muller cos branch";

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double Normal();

 private:
  std::mt19937_64 engine_;
};

enum class InstanceKind { kOrthonormal, kPerturbedOrthonormal, kRandomRiesz, kGramFile };

std::string ToString(InstanceKind k);
InstanceKind InstanceKindFromString(const std::string& s);

struct InstanceSpec {
  InstanceKind kind = InstanceKind::kRandomRiesz;
  std::size_t n = 8;
  double condition_target = 2.0;
  std::uint64_t seed = 0;
  std::filesystem::path gram_file;  // kGramFile only
};

inline constexpr int kMaxGenerationRetries = 1000;

// Unit-norm family of n vectors in dimension n with B/A <= 1.1 * target.
VectorFamily Generate(const InstanceSpec& spec);

// Rows of the Cholesky factor of a positive definite Gram matrix with unit
// diagonal; the result reproduces the Gram matrix.
VectorFamily FamilyFromGram(const Matrix& g);

}  // namespace tripave
