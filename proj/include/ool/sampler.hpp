#pragma once

// Seeded random elements. Entries are complex with independent standard normal
// real and imaginary parts; positives are normalised Gram matrices g* g / |g* g|.
// A given (seed) always yields the same sequence.

#include "ool/space.hpp"

#include <cstdint>
#include <random>
#include <string_view>

namespace ool {

/// Stateless seed mixing (splitmix64) so that sample i of a suite can be
/// regenerated without replaying samples 0..i-1.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// Stable 64-bit hash of a suite name, used as the `stream` of derive_seed.
std::uint64_t stream_id(std::string_view name);

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  double normal();
  double uniform(double lo, double hi);
  Index uniform_index(Index lo, Index hi);  // inclusive
  bool coin(double p_true = 0.5);

  ComplexMatrix gaussian(Index rows, Index cols);
  ComplexMatrix hermitian(Index n);
  ComplexMatrix unitary(Index n);
  /// rows x cols with orthonormal columns (rows >= cols).
  ComplexMatrix isometry(Index rows, Index cols);
  /// g* g scaled to operator norm 1 (zero only with probability 0).
  ComplexMatrix positive(Index n);
  /// Orthogonal projection of the given rank.
  ComplexMatrix projection(Index n, Index rank);
  /// Hermitian with spectrum drawn from `spectrum`, conjugated by a random unitary.
  ComplexMatrix with_spectrum(const RealVector& spectrum);

  Element element(const SpaceSpec& space, Level level);
  Element hermitian_element(const SpaceSpec& space, Index l);
  Element positive_element(const SpaceSpec& space, Index l);
  /// Random order projection at level l; ranks are uniform per summand.
  Element projection_element(const SpaceSpec& space, Index l);
  /// Random partial isometry at level (l, m): singular values snapped to {0, 1}.
  Element partial_isometry_element(const SpaceSpec& space, Level level);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace ool
