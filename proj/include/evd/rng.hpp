#pragma once

#include "evd/types.hpp"

#include <random>

namespace evd {

/// splitmix64 finalizer; used to decorrelate derived seeds.
Seed mix_seed(Seed x);

/// Seed of substream `index` of a master seed:
/// splitmix64(master + (index + 1) * golden_gamma).
Seed derive_seed(Seed master, std::uint64_t index);

/// Deterministic random stream. The engine (std::mt19937_64) has a
/// standard-specified output sequence, and every variate transform below is
/// implemented here rather than delegated to std::distributions, so a
/// (seed, call sequence) pair reproduces bit-identically across platforms
/// and standard-library implementations.
class Stream {
 public:
  explicit Stream(Seed seed) : engine_(seed) {}

  /// Independent substream `index` of a master seed: the engine is seeded
  /// with splitmix64(master + (index + 1) * golden_gamma). Replicate i of a
  /// Monte Carlo run always uses substream i regardless of thread count or
  /// evaluation order.
  static Stream substream(Seed master, std::uint64_t index);

  Real uniform();                   // [0, 1), 53-bit mantissa
  Real normal();                    // standard normal via Box-Muller (2 uniforms per call, no caching)
  Real exponential(Real rate);      // inverse CDF
  Real bernoulli(Real p);           // returns 0.0 or 1.0
  Real gamma(Real shape);           // unit scale, Marsaglia-Tsang
  Real beta(Real a, Real b);        // ratio of gammas

 private:
  std::mt19937_64 engine_;
};

}  // namespace evd
