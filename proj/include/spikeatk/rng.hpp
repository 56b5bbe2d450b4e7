#ifndef SPIKEATK_RNG_HPP
#define SPIKEATK_RNG_HPP

#include <cstdint>
#include <random>

namespace spikeatk {

// splitmix64 finalizer; used to derive independent child seeds from a base
// seed plus a stream index (per-sample, per-iteration, per-layer, ...).
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::mt19937_64 make_rng(std::uint64_t base, std::uint64_t stream) {
  return std::mt19937_64(mix_seed(base, stream));
}

}  // namespace spikeatk

#endif  // SPIKEATK_RNG_HPP
