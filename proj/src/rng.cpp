#include "evd/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace evd {

Seed mix_seed(Seed x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Seed derive_seed(Seed master, std::uint64_t index) {
  return mix_seed(master + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

Stream Stream::substream(Seed master, std::uint64_t index) {
  return Stream(derive_seed(master, index));
}

Real Stream::uniform() {
  return static_cast<Real>(engine_() >> 11) * 0x1.0p-53;
}

Real Stream::normal() {
  const Real u1 = 1.0 - uniform();  // (0, 1], keeps log finite
  const Real u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

Real Stream::exponential(Real rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be positive");
  return -std::log1p(-uniform()) / rate;
}

Real Stream::bernoulli(Real p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bernoulli: p must lie in [0, 1]");
  return uniform() < p ? 1.0 : 0.0;
}

Real Stream::gamma(Real shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be positive");
  if (shape < 1.0) {
    // Boost to shape + 1 and scale back: G(a) = G(a+1) * U^{1/a}.
    const Real g = gamma(shape + 1.0);
    const Real u = 1.0 - uniform();  // (0, 1]
    return g * std::pow(u, 1.0 / shape);
  }
  const Real d = shape - 1.0 / 3.0;
  const Real c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    Real x = normal();
    Real v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const Real u = 1.0 - uniform();  // (0, 1]
    const Real x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

Real Stream::beta(Real a, Real b) {
  const Real ga = gamma(a);
  const Real gb = gamma(b);
  return ga / (ga + gb);
}

}  // namespace evd
