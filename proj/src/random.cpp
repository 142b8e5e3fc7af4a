#include "lsle/random.hpp"

#include <cmath>
#include <numbers>

namespace lsle {

std::uint64_t mix64(std::uint64_t x) noexcept {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_key(const NoiseKey& key) noexcept {
  std::uint64_t h = mix64(key.seed ^ 0x243f6a8885a308d3ULL);
  h = mix64(h ^ key.stream);
  h = mix64(h ^ key.step);
  h = mix64(h ^ key.particle);
  h = mix64(h ^ key.node);
  return h;
}

double uniform_open(std::uint64_t bits) noexcept {
  // 52 bits, shifted by half a step so both ends stay exactly representable.
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

double standard_normal(const NoiseKey& key) noexcept {
  const std::uint64_t h = hash_key(key);
  const double u1 = uniform_open(h);
  const double u2 = uniform_open(mix64(h ^ 0x5851f42d4c957f2dULL));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace lsle
