#pragma once

#include <cstdint>
#include <limits>

namespace tracelab {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Per-cell seed for cell `index` of a run seeded with `master`. Any
/// schedule that evaluates cell i with derive_seed(master, i) produces the
/// same numbers, which is what makes serial and threaded runs agree.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix64(master ^ mix64(index + 0x632be59bd9b4e019ULL));
}

/// Counter-based generator: draw i is mix64(key + (i+1)*gamma). The whole
/// state is (key, counter), so streams can be positioned without replay.
__extension__ using U128 = unsigned __int128;

class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit constexpr CounterRng(std::uint64_t key) noexcept : key_(key) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * kGamma);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) noexcept {
    // Lemire's multiply-shift; bias is < 2^-64 * bound and irrelevant here.
    return static_cast<std::uint64_t>((static_cast<U128>((*this)()) * bound) >> 64);
  }

  [[nodiscard]] constexpr std::uint64_t counter() const noexcept { return counter_; }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Bernoulli(prob) via an integer threshold; prob == 1 always succeeds.
class BernoulliThreshold {
 public:
  explicit BernoulliThreshold(double prob) noexcept;
  bool operator()(CounterRng& rng) const noexcept { return always_ || rng() < threshold_; }

 private:
  std::uint64_t threshold_ = 0;
  bool always_ = false;
};

}  // namespace tracelab
