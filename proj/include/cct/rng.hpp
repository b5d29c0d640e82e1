#ifndef CCT_RNG_HPP
#define CCT_RNG_HPP

#include <cstdint>
#include <random>

namespace cct {

/// mt19937_64 wrapper with fixed bit-level conversions, so that generated
/// streams are stable across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() { return (eng_() >> 11) * 0x1.0p-53; }  // [0,1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t uniform_int(std::uint64_t n) { return eng_() % n; }
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {  // inclusive
    return lo + uniform_int(hi - lo + 1);
  }

  static std::uint64_t derive(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (counter + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace cct

#endif
