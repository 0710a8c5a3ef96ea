#pragma once

#include <cstdint>

namespace moon {

/// Independent random streams derived from one user seed.
enum class StreamTag : std::uint64_t {
  Layout = 0x4c41594f5554ULL,
  Placement = 0x504c414345ULL,
  Solver = 0x534f4c564552ULL,
};

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, StreamTag tag) {
  return mix64(seed ^ mix64(static_cast<std::uint64_t>(tag)));
}

}  // namespace moon
