#pragma once

// Counter-based deterministic generator.
//
// Draw k of stream `seed` is the k-th output of SplitMix64 started at `seed`:
//   x_k = mix(seed + (k + 1) * 0x9E3779B97F4A7C15)
// with the standard SplitMix64 finalizer. Every draw depends only on
// (seed, k), so samples are bit-reproducible across platforms and can be
// generated out of order or in parallel.

#include <cstdint>

namespace pirpnn::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t draw(std::uint64_t seed, std::uint64_t counter) noexcept {
  return mix64(seed + (counter + 1) * kGolden);
}

/// Uniform double in [0, 1) with 53 random bits.
constexpr double uniform01(std::uint64_t seed, std::uint64_t counter) noexcept {
  return static_cast<double>(draw(seed, counter) >> 11) * 0x1.0p-53;
}

/// Child stream seed, e.g. one per scan cell or per Monte-Carlo run.
constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(seed ^ mix64(index + kGolden));
}

constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept {
  return derive(derive(seed, a), b);
}

}  // namespace pirpnn::rng
