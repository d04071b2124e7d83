#pragma once

#include <cstdint>

namespace simjudge {

// splitmix64: small deterministic generator used for probe perturbations and
// start vectors. Avoids std::uniform_real_distribution so streams are
// identical across standard libraries.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_unit() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [-mag, +mag].
  double next_symmetric(double mag) { return (2.0 * next_unit() - 1.0) * mag; }

 private:
  std::uint64_t state_;
};

// Per-member sub-stream seed; order-independent across members.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 mix(seed ^ (0x632be59bd9b4e019ull * (index + 1)));
  return mix.next_u64();
}

}  // namespace simjudge
