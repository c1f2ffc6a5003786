// rng.hpp: deterministic seeded PRNG with derived per-trial streams.
//
// splitmix64 core (Stafford mix 13 over a Weyl sequence). Chosen over
// <random> engines so that draw sequences are identical across platforms
// and compilers, which the reproducible-CSV contract requires.

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>

namespace entsim {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  // Independent stream for (seed, stream_id). Trials drawing from
  // distinct streams can be reordered or fanned out without changing
  // any result.
  static SplitMix64 stream(std::uint64_t seed, std::uint64_t stream_id) {
    return SplitMix64(
        mix(seed ^ mix(stream_id * 0x9E3779B97F4A7C15ull + 0x2545F4914F6CDD1Dull)));
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix(state_);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Draws an index from a list of non-negative weights. `total` must be
  // >= the sum of weights; any excess mass maps to the last index.
  std::size_t sample_index(std::span<const double> weights, double total) {
    if (weights.empty() || total <= 0.0) {
      throw std::invalid_argument("sample_index: empty or zero-mass distribution");
    }
    const double u = next_double() * total;
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      cum += weights[i];
      if (u < cum) return i;
    }
    return weights.size() - 1;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace entsim
