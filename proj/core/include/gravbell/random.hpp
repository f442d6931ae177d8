#pragma once

#include <cstdint>

namespace gravbell {

/// Deterministic 64-bit generator (splitmix64). Used instead of the
/// std engines/distributions so that streams are bit-identical across
/// platforms and standard-library versions. All sampling in the toolkit
/// takes one of these explicitly; there is no ambient global randomness.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform01();

  /// Independent stream for a single trial. The derivation depends only
  /// on (seed, trial_index), so a set of trials produces identical
  /// results no matter how they are partitioned across workers. The
  /// scheme is part of the reproducibility contract and must not change.
  static RandomSource for_trial(std::uint64_t seed, std::uint64_t trial_index);

 private:
  std::uint64_t state_;
};

}  // namespace gravbell
