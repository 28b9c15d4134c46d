#ifndef ENTWIT_RNG_HPP
#define ENTWIT_RNG_HPP

#include <array>
#include <cstdint>
#include <random>
#include <vector>

namespace entwit {

/// Seeded random stream with deterministic substream derivation.
///
/// Substreams are derived by mixing a tag into the parent seed, so a run is
/// reproduced exactly from (seed, stream-tag path) regardless of execution
/// order. Ensemble loops give each index its own substream and are therefore
/// schedule-independent.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

  /// Child stream for tag `t`; disjoint from this stream and from siblings.
  RngStream substream(std::uint64_t t) const {
    return RngStream(mix(seed_ ^ (0x9e3779b97f4a7c15ULL + t * 0xbf58476d1ce4e5b9ULL)));
  }

  std::uint64_t raw() { return engine_(); }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (single value, second discarded).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  std::uint64_t seed() const { return seed_; }

 private:
  static std::uint64_t mix(std::uint64_t x) {
    // splitmix64 finalizer, applied twice to decorrelate related tags
    for (int i = 0; i < 2; ++i) {
      x += 0x9e3779b97f4a7c15ULL;
      x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
      x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
      x = x ^ (x >> 31);
    }
    return x;
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// Exact multinomial draw: `trials` categorical samples over `probs`.
/// Negative rounding slop in probs is clamped to zero; any probability mass
/// missing from the sum falls into the last category.
std::vector<std::int64_t> multinomial(RngStream& rng, std::int64_t trials,
                                      const std::vector<double>& probs);

}  // namespace entwit

#endif
