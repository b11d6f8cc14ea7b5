#pragma once

// Random number generation with results that are identical on every platform
// and independent of how work is split across threads.
//
// Generator: "splitmix64-v1". A stream is a SplitMix64 sequence whose state is
// derived from (seed, stream id). Keyed draws hash (seed, stream id, key)
// directly, so any genotype or run can be sampled without touching a shared
// state. Distributions are implemented here rather than taken from <random>
// because the standard distributions are implementation-defined.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace fla::rng {

inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

inline constexpr std::uint64_t hash3(std::uint64_t seed, std::uint64_t stream,
                                     std::uint64_t key) noexcept {
  std::uint64_t h = mix64(seed + kGolden);
  h = mix64(h ^ (stream + 0x632be59bd9b4e019ULL));
  return mix64(h ^ (key * kGolden + 0x8cb92ba72f3d8dd7ULL));
}

/// 53-bit uniform double in [0, 1).
inline constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

class Stream {
 public:
  using result_type = std::uint64_t;

  explicit Stream(std::uint64_t seed, std::uint64_t stream_id = 0) noexcept
      : state_(hash3(seed, stream_id, 0)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    state_ += kGolden;
    return mix64(state_);
  }

  double uniform() noexcept { return to_unit((*this)()); }

  /// Unbiased integer in [0, bound) (Lemire's multiply-and-reject).
  std::uint64_t below(std::uint64_t bound) noexcept {
    if (bound <= 1) return 0;
    unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>((*this)()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  double normal(double mean = 0.0, double sd = 1.0) noexcept {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t state_;
};

/// Stateless draws keyed by (seed, stream, key).
struct Keyed {
  std::uint64_t seed;
  std::uint64_t stream;

  double uniform(std::uint64_t key) const noexcept { return to_unit(hash3(seed, stream, key)); }

  double normal(std::uint64_t key, double mean = 0.0, double sd = 1.0) const noexcept {
    double u1 = to_unit(hash3(seed, stream, 2 * key));
    if (u1 <= 0.0) u1 = 0x1.0p-54;
    const double u2 = to_unit(hash3(seed, stream, 2 * key + 1));
    return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
};

template <typename It>
void shuffle(It first, It last, Stream& rng) {
  const auto n = static_cast<std::uint64_t>(last - first);
  for (std::uint64_t i = n; i > 1; --i) {
    const auto j = rng.below(i);
    using std::swap;
    swap(first[i - 1], first[j]);
  }
}

}  // namespace fla::rng
