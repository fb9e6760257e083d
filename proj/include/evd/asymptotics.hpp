#pragma once

#include "evd/composite.hpp"
#include "evd/method.hpp"
#include "evd/models.hpp"
#include "evd/types.hpp"

#include <vector>

namespace evd {

/// Laplace-expansion prediction for E_theta1[log B01] at sample size n:
///   -n * KL(theta1 || theta0) + (d/2) log n + constant,
/// with the constant
///   (1/2) log det I(theta1) - log pi1(theta1) - (d/2) log(2*pi*e).
/// Equivalently, the mixture redundancy E_theta1[log p_theta1 - log m1]
/// is predicted by (d/2) log n + constant.
struct ExpansionPrediction {
  Index n = 0;
  Real kl_term = 0.0;        // -n * KL
  Real log_n_term = 0.0;     // (d/2) * log n
  Real constant_term = 0.0;
  Real total = 0.0;          // sum of the three
  Real redundancy = 0.0;     // log_n_term + constant_term
};

/// Requires a continuous prior with positive density at theta1, a point
/// theta1 in the family's parameter space, and matching families.
ExpansionPrediction expansion_prediction(const Model& theta1,
                                         const Model& theta0,
                                         const MixtureAlternative& mix,
                                         Index n);

struct Estimate {
  Real value = 0.0;
  Real std_error = 0.0;  // 0 when exact
  bool exact = false;
  std::size_t count = 0;
};

/// E_theta1[log B01(x^n)] = E_theta1[log p0 - log m1]. Enumeration is exact;
/// Monte Carlo estimates only the redundancy part E[log p_theta1 - log m1]
/// by simulation and adds the exact -n * KL(theta1 || theta0) term, which
/// removes the O(sqrt(n)) standard deviation of the naive estimator (the
/// per-replicate spread of the redundancy residual stays O(1) in n).
Estimate expected_log_ratio(const Model& theta1, const Model& theta0,
                            const MixtureAlternative& mix, Index n,
                            const Method& method);

/// Redundancy E_theta[log p_theta(x^n) - log m1(x^n)] (the KL divergence
/// between the n-fold product law and the mixture marginal).
Estimate redundancy(const Model& theta, const MixtureAlternative& mix,
                    Index n, const Method& method);

/// Closed forms for the Gaussian-location family (exact for every n).
Real gaussian_redundancy(const Model& theta, const MixtureAlternative& mix,
                         Index n);
Real gaussian_expected_log_ratio(const Model& theta1, const Model& theta0,
                                 const MixtureAlternative& mix, Index n);

struct ConvergenceRow {
  Index n = 0;
  Real empirical = 0.0;   // estimate of E_theta1[log B01]
  Real std_error = 0.0;
  Real predicted = 0.0;   // expansion total
  Real gap = 0.0;         // empirical - predicted
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
};

/// Tabulates empirical vs. predicted E_theta1[log B01] over a grid of
/// sample sizes. Monte Carlo rows share the master seed via substreams.
ConvergenceReport convergence_report(const Model& theta1, const Model& theta0,
                                     const MixtureAlternative& mix,
                                     const std::vector<Index>& n_grid,
                                     const Method& method);

}  // namespace evd
