#pragma once

#include <cstdint>

namespace conformal::core {

// splitmix64 finalizer; used to derive independent, reproducible seed
// streams from one user-facing seed (one stream per bootstrap model,
// per generator, per shuffle).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return splitmix64(seed ^ splitmix64(stream + 0x632BE59BD9B4E019ull));
}

}  // namespace conformal::core
