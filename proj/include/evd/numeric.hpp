#pragma once

#include "evd/types.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace evd {

/// Neumaier-compensated running sum; keeps enumeration totals accurate to
/// within a few ulps even across ~2^20 terms of mixed magnitude.
class NeumaierSum {
 public:
  void add(Real x) {
    const Real t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  Real value() const { return sum_ + comp_; }

 private:
  Real sum_ = 0.0;
  Real comp_ = 0.0;
};

/// Streaming mean/variance (Welford). `std_error` is the Monte Carlo
/// standard error of the mean.
class MeanAccumulator {
 public:
  void add(Real x);
  std::size_t count() const { return n_; }
  Real mean() const { return mean_; }
  Real variance() const;  // unbiased; 0 when n < 2
  Real std_error() const;

 private:
  std::size_t n_ = 0;
  Real mean_ = 0.0;
  Real m2_ = 0.0;
};

/// log(sum_i exp(x_i)) computed stably; returns -inf for an empty span or
/// when every term is -inf.
Real log_sum_exp(std::span<const Real> xs);
Real log_sum_exp(Real a, Real b);

/// Exact one-sided Clopper-Pearson upper confidence limit for a binomial
/// proportion after observing `successes` out of `trials`.
Real binomial_upper_confidence(std::uint64_t successes, std::uint64_t trials,
                               Real confidence);

/// Gauss-Legendre nodes/weights on [-1, 1], computed by Newton iteration on
/// the Legendre recurrence.
struct QuadratureNodes {
  std::vector<Real> x;
  std::vector<Real> w;
};
QuadratureNodes gauss_legendre(int n);

/// Affine map of a [-1, 1] rule onto [lo, hi].
QuadratureNodes map_to_interval(const QuadratureNodes& rule, Real lo, Real hi);

inline constexpr Real kLn2 = 0.6931471805599453;

}  // namespace evd
