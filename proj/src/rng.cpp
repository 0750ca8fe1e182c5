#include "flipmix/int128.hpp"
#include "flipmix/rng.hpp"

namespace flipmix {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RngStream RngStream::for_replica(std::uint64_t base_seed, std::uint64_t index) noexcept {
  return RngStream(mix64(base_seed ^ mix64(index + kGolden)));
}

std::uint64_t RngStream::next_u64() noexcept {
  ++counter_;
  return mix64(seed_ + counter_ * kGolden);
}

double RngStream::uniform01() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::uniform_below(std::uint64_t bound) noexcept {
  uint128 product = static_cast<uint128>(next_u64()) * bound;
  auto low = static_cast<std::uint64_t>(product);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      product = static_cast<uint128>(next_u64()) * bound;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::uint64_t>(product >> 64);
}

}  // namespace flipmix
