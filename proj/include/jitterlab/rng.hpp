#pragma once

#include <cstdint>

namespace jitterlab {

// Commands and experiment harnesses default to this fixed seed rather than
// wall-clock entropy, so default runs are reproducible.
inline constexpr std::uint64_t kDefaultSeed = 1;

namespace detail {

// splitmix64 output function (Steele, Lea & Flood 2014)
inline std::uint64_t mix_bits(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

}  // namespace detail

// Counter-based generator: value i of stream `seed` is a pure function of
// (seed, i), so samples can be indexed by trial number and results do not
// depend on evaluation order.
inline std::uint64_t counter_mix(std::uint64_t seed, std::uint64_t counter) {
  return detail::mix_bits(seed + detail::kGolden * (counter + 1));
}

inline double counter_uniform(std::uint64_t seed, std::uint64_t counter) {
  return static_cast<double>(counter_mix(seed, counter) >> 11) * 0x1.0p-53;
}

// Derives an independent substream seed from a parent seed and a key;
// chain calls for multi-part keys.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t key) {
  return detail::mix_bits(seed ^ detail::mix_bits(key + detail::kGolden));
}

// Sequential splitmix64. Small state, splittable via derive_seed, and fully
// specified here so identical seeds give identical streams on every build.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  std::uint64_t next() {
    state_ += detail::kGolden;
    return detail::mix_bits(state_);
  }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // uniform in [lo, hi)
  double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

  // uniform integer in [0, bound) by rejection; bound > 0
  std::uint64_t uniform_index(std::uint64_t bound) {
    std::uint64_t threshold = -bound % bound;
    for (;;) {
      std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace jitterlab
