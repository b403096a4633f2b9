#pragma once

#include <cstdint>
#include <random>

namespace doseplane::util {

/// SplitMix64 finalizer; bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Child seed for an independent substream identified by (tag, counter).
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag, std::uint64_t counter = 0) noexcept {
    return mix64(mix64(base ^ mix64(tag)) + counter);
}

/// Substream tags.
namespace stream {
inline constexpr std::uint64_t tox_fit = 0x746f78;
inline constexpr std::uint64_t eff_fit = 0x656666;
inline constexpr std::uint64_t chain = 0x636861;
inline constexpr std::uint64_t stage2 = 0x737432;
inline constexpr std::uint64_t outcomes = 0x6f7574;
}  // namespace stream

/// 64-bit Mersenne twister with the conversions used across the library.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    double normal() { return normal_(engine_); }
    bool bernoulli(double p) noexcept { return uniform() < p; }

    std::mt19937_64& engine() noexcept { return engine_; }

  private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace doseplane::util
