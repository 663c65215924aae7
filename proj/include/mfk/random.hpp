#ifndef MFK_RANDOM_HPP
#define MFK_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "mfk/geometry.hpp"

namespace mfk {

/// SplitMix64 finalizer; used to derive independent child seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Child seed for stream `index` of `seed`. Distinct indices give
/// statistically independent streams.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

/// Seedable generator with platform-independent draws. The standard
/// distributions are implementation-defined, so sampling is done here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform index in [0, n).
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
  }

  double angle() { return uniform(-kPi, kPi); }

  Vec2 on_circle(Vec2 center, double radius) { return center + radius * unit(angle()); }

  Vec2 in_disk(Vec2 center, double radius) {
    const double r = radius * std::sqrt(uniform());
    return center + r * unit(angle());
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mfk

#endif  // MFK_RANDOM_HPP
