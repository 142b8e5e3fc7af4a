#pragma once

#include <cstdint>

namespace lsle {

// Counter-based normal variates: every draw is a pure function of its key, so
// adaptive refinement in one place never shifts the draws used anywhere else.
struct NoiseKey {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;   // which consumer (gas, matrix, field, ...)
  std::uint64_t step = 0;     // macro step / sample index
  std::uint64_t particle = 0; // coordinate within the step
  std::uint64_t node = 1;     // position in the bisection tree (root = 1)
};

namespace streams {
inline constexpr std::uint64_t kGas = 0x6761735fULL;
inline constexpr std::uint64_t kGasBridge = 0x67617362ULL;
inline constexpr std::uint64_t kHermitian = 0x67756531ULL;
inline constexpr std::uint64_t kWishart = 0x77697331ULL;
inline constexpr std::uint64_t kField = 0x67666631ULL;
}  // namespace streams

std::uint64_t mix64(std::uint64_t x) noexcept;
std::uint64_t hash_key(const NoiseKey& key) noexcept;

// Uniform on the open interval (0, 1).
double uniform_open(std::uint64_t bits) noexcept;

// Standard normal via Box-Muller on two independent hashes of the key.
double standard_normal(const NoiseKey& key) noexcept;

}  // namespace lsle
