#pragma once

#include <cstdint>

namespace romslab {

/// SplitMix64 finalizer (Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stream key for (master_seed, sample_index, cell). Every argument passes
/// through a full mix so neighbouring indices give unrelated keys.
constexpr std::uint64_t stream_key(std::uint64_t master_seed, std::uint64_t sample_index,
                                   std::uint64_t cell) noexcept {
  std::uint64_t k = mix64(master_seed + 0x9e3779b97f4a7c15ULL);
  k = mix64(k ^ (sample_index * 0xd1b54a32d192ed03ULL + 0x632be59bd9b4e019ULL));
  k = mix64(k ^ (cell * 0xa0761d6478bd642fULL + 0xe7037ed1a0b428dbULL));
  return k;
}

/// Counter-based generator: draw k is a pure function of (key, k), so results
/// never depend on call order or thread scheduling.
class CounterRng {
 public:
  constexpr explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

  constexpr std::uint64_t next_u64() noexcept { return at(counter_++); }

  constexpr std::uint64_t at(std::uint64_t counter) const noexcept {
    return mix64(key_ + (counter + 1) * 0x9e3779b97f4a7c15ULL);
  }

  /// Uniform on the open interval (0, 1) with 53 random bits.
  constexpr double next_open01() noexcept { return to_open01(next_u64()); }

  static constexpr double to_open01(std::uint64_t bits) noexcept {
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace romslab
