#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace dimcut {

/// SplitMix64 step. Used to expand seeds and to derive independent streams.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// Mixes a base seed with a stream tag and an index into a new seed.
/// Every seeded component (tree, fold, generator) takes its stream from here
/// so results never depend on thread scheduling.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag,
                          std::uint64_t index = 0) noexcept;

/// xoshiro256** seeded through SplitMix64.
///
/// All distributions below are implemented in-house so that streams are
/// reproducible across standard libraries (std::normal_distribution and
/// std::shuffle are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept;

  std::uint64_t next_u64() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) noexcept;
  /// Uniform integer on [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n) noexcept;
  /// Standard normal via Box-Muller (the spare value is cached).
  double normal() noexcept;

  template <typename T>
  void shuffle(std::span<T> values) noexcept {
    for (std::size_t i = values.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_index(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::uint64_t s_[4];
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// 64-bit FNV-1a, used to key per-feature randomness by feature name.
std::uint64_t hash_string(std::span<const char> text) noexcept;

}  // namespace dimcut
