#pragma once

#include <cstdint>
#include <random>

namespace contagion {

// splitmix64 finalizer: a full-avalanche 64-bit mix.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Deterministic stream splitting. Each (seed, key) pair maps to an
// independent child seed; nesting derive_seed builds a key path, e.g.
// master -> month -> structure -> simulation index. Results are therefore
// independent of scheduling and worker count.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t key) noexcept {
  return mix64(seed + 0x9E3779B97F4A7C15ull * (2 * key + 1));
}

class rng_stream {
public:
  explicit rng_stream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // 53-bit mantissa draw in [0, 1). Built from raw engine output rather than
  // std::uniform_real_distribution, whose mapping is implementation-defined.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace contagion
