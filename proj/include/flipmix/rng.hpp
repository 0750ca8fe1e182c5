#pragma once

#include <cstdint>

namespace flipmix {

/**
 * Counter-based random stream.
 *
 * Draw i is the SplitMix64 finalizer applied to seed + (i + 1) * golden, so a
 * stream is fully described by (seed, counter) and can be split into
 * independent replica streams without coordination. Integer-to-real
 * conversion takes the top 53 bits, and bounded integers use Lemire's
 * multiply-and-reject method; neither depends on the standard library's
 * distribution implementations, so sequences are identical on every platform.
 */
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) noexcept : seed_(seed) {}

  /// Stream for replica `index` of a run seeded with `base_seed`.
  static RngStream for_replica(std::uint64_t base_seed, std::uint64_t index) noexcept;

  std::uint64_t next_u64() noexcept;

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform01() noexcept;

  /// Uniform in [0, bound). bound must be positive.
  std::uint64_t uniform_below(std::uint64_t bound) noexcept;

  /// True with probability p (compares uniform01() < p).
  bool bernoulli(double p) noexcept { return uniform01() < p; }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace flipmix
