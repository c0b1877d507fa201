/**
 * @file coreset/rng.hpp
 * @brief Counter-based 64-bit PRNG (splitmix64).  Every random draw in the
 *        library flows through this generator so that runs are bit-reproducible
 *        across platforms; std:: distributions are deliberately avoided.
 * @copyright Apache License 2.0
 */
#ifndef CORESET_RNG_HPP
#define CORESET_RNG_HPP

#include <cstdint>

namespace coreset {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  /// The splitmix64 output finalizer.
  static std::uint64_t finalize(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

  /// Random access into the stream: at(seed, k) equals the k-th next() of
  /// SplitMix64(seed).  This is what makes the generator counter-based —
  /// draws can be indexed by (seed, counter) without sequencing.
  static std::uint64_t at(std::uint64_t seed, std::uint64_t counter) {
    return finalize(seed + kGamma * (counter + 1));
  }

  std::uint64_t next() {
    state_ += kGamma;
    return finalize(state_);
  }

  /// Unbiased uniform draw in [0, m) by rejection.
  std::uint64_t below(std::uint64_t m) {
    const std::uint64_t threshold = (-m) % m;
    std::uint64_t x = next();
    while (x < threshold) x = next();
    return x % m;
  }

  /// Bernoulli draw with success probability rho.
  bool bernoulli(double rho) {
    if (rho >= 1.0) return true;
    if (rho <= 0.0) return false;
    return next() < static_cast<std::uint64_t>(rho * 18446744073709551616.0);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ull;
  std::uint64_t state_;
};

/// Stateless Bernoulli draw indexed by (seed, stream, position); used for
/// order-independent subset sampling.
inline bool indexed_bernoulli(std::uint64_t seed, std::uint64_t stream, std::uint64_t position,
                              double rho) {
  if (rho >= 1.0) return true;
  if (rho <= 0.0) return false;
  const std::uint64_t u = SplitMix64::finalize(SplitMix64::at(seed, stream) + position);
  return u < static_cast<std::uint64_t>(rho * 18446744073709551616.0);
}

}  // namespace coreset

#endif  // CORESET_RNG_HPP
