#ifndef RELAXGAP_RNG_HPP_
#define RELAXGAP_RNG_HPP_

#include <cstdint>

namespace relaxgap {

/// Counter-based generator (splitmix64) so streams can be derived from a
/// (seed, stream) pair without sharing state.  Distribution code below is
/// fixed arithmetic, not std::uniform_real_distribution, so the same seed
/// produces the same bytes on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : state_(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1))) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi].
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) { return next_u64() % n; }

 private:
  std::uint64_t state_;
};

}  // namespace relaxgap

#endif  // RELAXGAP_RNG_HPP_
