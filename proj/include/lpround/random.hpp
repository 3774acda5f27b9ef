#pragma once

#include <cstdint>
#include <random>

namespace lpround {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to derive well-separated seeds from one master.
constexpr std::uint64_t mix_seed(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed for independent stream `stream` of master seed `master`.
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::uint64_t stream) noexcept {
  return mix_seed(mix_seed(master) ^ mix_seed(stream + 0x51ed270b27d1a3ULL));
}

inline Rng make_stream(std::uint64_t master, std::uint64_t stream) {
  return Rng(derive_seed(master, stream));
}

/// Uniform index in [0, n) by multiply-shift (n > 0).
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  __extension__ using u128 = unsigned __int128;
  const u128 prod = static_cast<u128>(rng()) * static_cast<u128>(n);
  return static_cast<std::size_t>(prod >> 64);
}

/// Uniform double in [0, 1).
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace lpround
