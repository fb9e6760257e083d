#include "evd/numeric.hpp"

#include <boost/math/distributions/binomial.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace evd {

void MeanAccumulator::add(Real x) {
  ++n_;
  const Real delta = x - mean_;
  mean_ += delta / static_cast<Real>(n_);
  m2_ += delta * (x - mean_);
}

Real MeanAccumulator::variance() const {
  if (n_ < 2) return 0.0;
  return m2_ / static_cast<Real>(n_ - 1);
}

Real MeanAccumulator::std_error() const {
  if (n_ < 2) return 0.0;
  return std::sqrt(variance() / static_cast<Real>(n_));
}

Real log_sum_exp(std::span<const Real> xs) {
  Real mx = -std::numeric_limits<Real>::infinity();
  for (Real x : xs) mx = std::max(mx, x);
  if (std::isinf(mx) && mx < 0) return mx;
  NeumaierSum acc;
  for (Real x : xs) acc.add(std::exp(x - mx));
  return mx + std::log(acc.value());
}

Real log_sum_exp(Real a, Real b) {
  const Real xs[2] = {a, b};
  return log_sum_exp(std::span<const Real>(xs, 2));
}

Real binomial_upper_confidence(std::uint64_t successes, std::uint64_t trials,
                               Real confidence) {
  if (trials == 0) throw std::invalid_argument("binomial_upper_confidence: trials must be positive");
  if (successes > trials) throw std::invalid_argument("binomial_upper_confidence: successes > trials");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw std::invalid_argument("binomial_upper_confidence: confidence must lie in (0, 1)");
  }
  using boost::math::binomial_distribution;
  return binomial_distribution<Real>::find_upper_bound_on_p(
      static_cast<Real>(trials), static_cast<Real>(successes), 1.0 - confidence);
}

QuadratureNodes gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  QuadratureNodes rule;
  rule.x.assign(static_cast<std::size_t>(n), 0.0);
  rule.w.assign(static_cast<std::size_t>(n), 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-like initial guess for the i-th positive root.
    Real z = std::cos(std::numbers::pi * (static_cast<Real>(i) + 0.75) /
                      (static_cast<Real>(n) + 0.5));
    Real pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      Real p0 = 1.0;
      Real p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const Real p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - static_cast<Real>(j) * p2) /
             (static_cast<Real>(j) + 1.0);
      }
      pp = static_cast<Real>(n) * (z * p0 - p1) / (z * z - 1.0);
      const Real dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    const std::size_t lo = static_cast<std::size_t>(i);
    const std::size_t hi = static_cast<std::size_t>(n - 1 - i);
    rule.x[lo] = -z;
    rule.x[hi] = z;
    rule.w[lo] = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.w[hi] = rule.w[lo];
  }
  return rule;
}

QuadratureNodes map_to_interval(const QuadratureNodes& rule, Real lo, Real hi) {
  if (!(hi > lo)) throw std::invalid_argument("map_to_interval: need hi > lo");
  QuadratureNodes out;
  out.x.reserve(rule.x.size());
  out.w.reserve(rule.w.size());
  const Real half = 0.5 * (hi - lo);
  const Real mid = 0.5 * (hi + lo);
  for (std::size_t i = 0; i < rule.x.size(); ++i) {
    out.x.push_back(mid + half * rule.x[i]);
    out.w.push_back(half * rule.w[i]);
  }
  return out;
}

}  // namespace evd
