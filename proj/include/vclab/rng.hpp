#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace vclab {

/// SplitMix64 step; used for seed derivation only.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Mixes a master seed with salts (worker index, sample size, ...) into an
/// independent stream seed. Pure function of its arguments, so results do
/// not depend on evaluation order or scheduling.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> salts) {
  std::uint64_t s = master ^ 0xd1b54a32d192ed03ULL;
  for (std::uint64_t salt : salts) {
    s ^= splitmix64(s) + salt;
    (void)splitmix64(s);
  }
  return splitmix64(s);
}

/// Deterministic RNG wrapper. mt19937_64 output is fully specified by the
/// standard and the uniform mapping below avoids the implementation-defined
/// std::uniform_real_distribution, so streams are bit-identical across
/// platforms and compilers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return bits() % n; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace vclab
