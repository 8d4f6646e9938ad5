#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace aft::random {

// Counter-based draws: every random number is a pure function of a key
// (seed, stream, indices...). Independent consumers pick distinct streams so
// that adding draws in one place never shifts draws in another.

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t hash(std::initializer_list<std::uint64_t> words) noexcept {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (auto w : words) h = mix64(h ^ mix64(w));
  return h;
}

/// Uniform double in [0, 1) with 53 random bits.
constexpr double unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

__extension__ using u128 = unsigned __int128;

/// Uniform integer in [0, bound) by multiply-shift; bound > 0.
inline std::uint64_t below(std::uint64_t bits, std::uint64_t bound) noexcept {
  return static_cast<std::uint64_t>((static_cast<u128>(bits) * bound) >> 64);
}

// Stream identifiers.
enum Stream : std::uint64_t {
  kAdapterStream = 0xada9,
  kPolicyStream = 0x9011c,
  kDropStream = 0xd709,
  kJitterStream = 0x7177e,
  kWorkloadStream = 0x3041,
  kByzantineStream = 0xb12,
};

}  // namespace aft::random
