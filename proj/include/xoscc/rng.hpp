#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>
#include <span>
#include <vector>

namespace xoscc {

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Derives an independent sub-seed from a base seed and a key path, e.g.
/// derive_seed(seed, {level, group, player, j}). Distinct key paths give
/// statistically independent streams, so resampling one player's stream
/// never perturbs another's.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) noexcept {
  std::uint64_t h = mix64(seed ^ 0x6A09E667F3BCC909ULL);
  for (auto key : keys) {
    h = mix64(h ^ mix64(key + 0x3C6EF372FE94F82BULL));
  }
  return h;
}

// Stream tags used with derive_seed.
enum class Stream : std::uint64_t {
  kFamily = 0xFA,
  kTop = 0x70,
  kSpecial = 0x5E,
  kFooling = 0xF0,
  kPlayer = 0x91,
  kPublic = 0xB1,
  kPrivate = 0xB2,
  kTrial = 0x7A,
};

constexpr std::uint64_t tag(Stream s) noexcept { return static_cast<std::uint64_t>(s); }

/// Seeded generator. All bounded draws go through `below` rather than
/// <random> distributions so that samples are identical across standard
/// library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % n;
  }

  bool coin() { return (engine_() >> 63) != 0; }

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  template <typename T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[below(i)]);
    }
  }

  /// Uniformly random permutation of [0, n).
  std::vector<std::uint32_t> permutation(std::uint32_t n) {
    std::vector<std::uint32_t> out(n);
    for (std::uint32_t i = 0; i < n; ++i) out[i] = i;
    shuffle(std::span<std::uint32_t>(out));
    return out;
  }

  /// Uniform t-subset of [0, q), sorted ascending (Floyd's algorithm).
  std::vector<std::uint32_t> subset(std::uint32_t q, std::uint32_t t) {
    std::vector<std::uint32_t> chosen;
    chosen.reserve(t);
    for (std::uint32_t j = q - t; j < q; ++j) {
      const auto v = static_cast<std::uint32_t>(below(static_cast<std::uint64_t>(j) + 1));
      if (std::find(chosen.begin(), chosen.end(), v) == chosen.end()) {
        chosen.push_back(v);
      } else {
        chosen.push_back(j);
      }
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace xoscc
