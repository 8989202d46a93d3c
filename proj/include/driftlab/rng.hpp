#ifndef DRIFTLAB_RNG_HPP
#define DRIFTLAB_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

// Counter-based deterministic randomness. Every random quantity in the
// toolkit is a pure function of (key, counter), where keys are derived from
// one user seed through named substreams. That makes runs reproducible from
// a single integer and independent of evaluation order or thread count.

namespace driftlab::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

/// SplitMix64 finalizer: bijective 64-bit mix with good avalanche.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Random 64 bits for (key, counter): the SplitMix64 stream addressed
/// directly, so draws need no sequential state.
constexpr std::uint64_t counter_bits(std::uint64_t key,
                                     std::uint64_t counter) noexcept {
  return mix64(key + (counter + 1) * kGolden);
}

/// Maps 64 random bits to a double in [0, 1) with 53-bit resolution.
constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double counter_uniform(std::uint64_t key, std::uint64_t counter) noexcept {
  return to_unit(counter_bits(key, counter));
}

/// Standard normal via Box-Muller (cosine branch). Consumes counters
/// 2*counter and 2*counter+1 so consecutive draws never share inputs.
inline double counter_normal(std::uint64_t key, std::uint64_t counter) noexcept {
  const double u1 =
      static_cast<double>((counter_bits(key, 2 * counter) >> 11) + 1) * 0x1.0p-53;
  const double u2 = counter_uniform(key, 2 * counter + 1);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

/// FNV-1a over bytes; used to fold names (sensor ids, stream labels) into keys.
constexpr std::uint64_t fnv1a(std::string_view text) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ull;
  }
  return h;
}

/// Named substream key. Distinct labels give statistically independent
/// streams under the same seed.
constexpr std::uint64_t substream(std::uint64_t seed,
                                  std::string_view label) noexcept {
  return mix64(seed ^ fnv1a(label));
}

constexpr std::uint64_t substream(std::uint64_t seed, std::string_view label,
                                  std::uint64_t k) noexcept {
  return mix64(substream(seed, label) ^ mix64(k + kGolden));
}

constexpr std::uint64_t substream(std::uint64_t seed, std::string_view label,
                                  std::uint64_t k1, std::uint64_t k2) noexcept {
  return mix64(substream(seed, label, k1) ^ mix64(k2 + 2 * kGolden));
}

/// Sequential view over one substream for generator-style code. Uniform and
/// normal draws use separate derived keys, so interleaving them never
/// collides regardless of how many of each are taken.
class Stream {
 public:
  explicit Stream(std::uint64_t key) noexcept
      : key_(key), normal_key_(mix64(key ^ 0xA5A5A5A55A5A5A5Aull)) {}

  std::uint64_t bits() noexcept { return counter_bits(key_, counter_++); }
  double uniform() noexcept { return to_unit(bits()); }
  double normal() noexcept { return counter_normal(normal_key_, normal_counter_++); }

  /// Exponential with the given rate (inverse-CDF; rate > 0).
  double exponential(double rate) noexcept {
    return -std::log(1.0 - uniform()) / rate;
  }

 private:
  std::uint64_t key_;
  std::uint64_t normal_key_;
  std::uint64_t counter_ = 0;
  std::uint64_t normal_counter_ = 0;
};

}  // namespace driftlab::rng

#endif  // DRIFTLAB_RNG_HPP
