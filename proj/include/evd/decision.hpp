#pragma once

#include "evd/evidence.hpp"
#include "evd/method.hpp"
#include "evd/types.hpp"

#include <optional>
#include <vector>

namespace evd {

/// Prior weights and error costs for the binary decision problem.
struct RiskSpec {
  Real pi0 = 0.5;
  Real pi1 = 0.5;
  Real cost_type1 = 1.0;  // cost of rejecting a true null
  Real cost_type2 = 1.0;  // cost of accepting a false null
};

void validate(const RiskSpec& spec);

/// Bayes-optimal likelihood-ratio threshold: reject when
/// B10 >= pi0 * cost_type1 / (pi1 * cost_type2).
Real optimal_threshold(const RiskSpec& spec);

/// Tie handling at the threshold. Discrete likelihood ratios put positive
/// mass exactly at atoms, so the convention is part of the decision rule.
enum class TiePolicy { RejectOnTie, AcceptOnTie };

struct ThresholdRule {
  Real threshold = 1.0;
  TiePolicy tie = TiePolicy::RejectOnTie;
};

struct ErrorRates {
  Real alpha = 0.0;  // P_null(reject)
  Real beta = 0.0;   // P_alt(accept); mixture alternatives weight by the marginal
};

/// Exact (enumeration) or estimated (Monte Carlo) error rates of the rule
/// "reject when B10 >= t" (or > t under AcceptOnTie).
ErrorRates error_rates(const EValueSpec& spec, const ThresholdRule& rule,
                       const Method& method);

/// Prior-weighted Bayes risk pi0 * c1 * alpha + pi1 * c2 * beta.
Real bayes_risk(const RiskSpec& spec, const ErrorRates& rates);

struct RiskPoint {
  Real threshold = 0.0;
  Real log_threshold = 0.0;
  Real alpha = 0.0;
  Real beta = 0.0;
  Real risk = 0.0;
};

/// A maximal interval (lo, hi] of thresholds that all induce a
/// risk-minimizing decision. `hi_unbounded` marks the "never reject" tail
/// (lo, +inf). The half-open convention matches RejectOnTie: the decision
/// changes exactly when the threshold moves past an atom.
struct ArgminInterval {
  Real lo = 0.0;
  Real hi = 0.0;
  bool lo_is_zero = false;   // interval extends to 0 (always reject)
  bool hi_unbounded = false;
  bool contains(Real t) const;
};

struct RiskCurve {
  std::vector<Real> atoms;          // distinct likelihood-ratio values
  std::vector<RiskPoint> points;    // swept thresholds: atoms, midpoints, sentinels
  Real min_risk = 0.0;
  std::vector<ArgminInterval> argmin;  // decision-equivalent optimal intervals
  bool argmin_contains(Real t) const;
};

/// Sweep the Bayes risk across every decision the likelihood ratio can
/// induce: all atoms of B10, midpoints between consecutive atoms, and
/// sentinels below and above the support. Enumeration only; the atom set of
/// a continuous-data rule is not finite.
RiskCurve threshold_sweep(const EValueSpec& spec, const RiskSpec& risk,
                          const Method& method, TiePolicy tie = TiePolicy::RejectOnTie);

/// Monte Carlo sweep over a caller-supplied threshold grid.
RiskCurve threshold_sweep_grid(const EValueSpec& spec, const RiskSpec& risk,
                               const std::vector<Real>& thresholds,
                               const MonteCarlo& mc,
                               TiePolicy tie = TiePolicy::RejectOnTie);

}  // namespace evd
