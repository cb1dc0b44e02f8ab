#ifndef WKFILTER_RNG_HPP
#define WKFILTER_RNG_HPP

#include <cmath>
#include <cstdint>

namespace wkf {

/// Counter-based deterministic generator.  Streams are derived from a
/// (seed, counter) pair so that work split across threads or processes
/// reproduces the single-threaded sequence exactly, and so that the same
/// seed yields bit-identical output on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in (0, 1]; never returns 0 so log() is safe.
  double next_uniform() {
    return (next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-54;
  }

  /// Standard normal via Box-Muller (deterministic given the stream).
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Derived seed for an independent substream (path, restart, trial...).
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t counter) {
    SplitMix64 mix(seed ^ (0x9e3779b97f4a7c15ULL * (counter + 1)));
    return mix.next_u64();
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace wkf

#endif  // WKFILTER_RNG_HPP
