#include "gravbell/random.hpp"

namespace gravbell {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
}  // namespace

std::uint64_t RandomSource::next_u64() {
  state_ += kGolden;
  return mix64(state_);
}

double RandomSource::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

RandomSource RandomSource::for_trial(std::uint64_t seed, std::uint64_t trial_index) {
  // XOR (not addition) keeps distinct trials on unrelated orbits of the
  // underlying Weyl sequence.
  return RandomSource(mix64(seed ^ (kGolden * (trial_index + 1))));
}

}  // namespace gravbell
