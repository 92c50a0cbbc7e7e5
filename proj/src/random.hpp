#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace kpkit {

// Every seeded component uses std::mt19937_64 (bit-exact across standard
// libraries) with stream seeds mixed through splitmix64. Bounded integers come
// from bounded_uniform below, never from std::uniform_int_distribution, whose
// output is implementation-defined.
using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

// Uniform integer in [0, bound), bound >= 1 (Lemire's multiply-shift with
// rejection of the biased low range).
inline std::uint64_t bounded_uniform(Rng& rng, std::uint64_t bound) {
  using u128 = unsigned __int128;
  std::uint64_t x = rng();
  u128 m = static_cast<u128>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      x = rng();
      m = static_cast<u128>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

// Fills out[0..n) with uniform integers in [0, bounds[i]) from a single 64-bit
// draw when the product of the bounds allows it (batched multiply-shift,
// redrawing the whole batch on the rare biased outcome). The caller keeps the
// product of the bounds at or below 2^32.
inline void bounded_uniform_batch(Rng& rng, const std::uint64_t* bounds, std::size_t n, std::uint64_t product,
                                  std::uint64_t* out) {
  using u128 = unsigned __int128;
  for (;;) {
    std::uint64_t x = rng();
    for (std::size_t i = 0; i < n; ++i) {
      u128 m = static_cast<u128>(x) * bounds[i];
      out[i] = static_cast<std::uint64_t>(m >> 64);
      x = static_cast<std::uint64_t>(m);
    }
    if (x >= product || x >= (0 - product) % product) return;
  }
}

}  // namespace kpkit
