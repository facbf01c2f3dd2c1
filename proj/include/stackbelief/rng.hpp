#ifndef STACKBELIEF_RNG_HPP
#define STACKBELIEF_RNG_HPP

#include <cstdint>
#include <random>

namespace stackbelief {

// mt19937_64 with hand-mapped uniforms; std::uniform_real_distribution's
// algorithm is implementation-defined, this keeps streams reproducible for a
// given seed everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  // [0, 1)
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // [lo, hi)
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  // (0, 1]
  double uniform_pos01() { return 1.0 - uniform01(); }

  // Standard normal via Box-Muller (two uniforms per call, no state).
  double gauss() {
    double u1 = uniform_pos01();
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586 * u2);
  }

 private:
  std::mt19937_64 gen_;
};

// splitmix64 mix of (master seed, stream index) into an independent seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace stackbelief

#endif  // STACKBELIEF_RNG_HPP
