#include "evd/decision.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

using namespace evd;

namespace {

EValueSpec simple_spec(Index n = 10) {
  EValueSpec spec;
  spec.null_model = Model::bernoulli(0.5);
  spec.alt = Model::bernoulli(0.7);
  spec.n = n;
  return spec;
}

}  // namespace

TEST_CASE("optimal thresholds follow the cost-weighted prior odds") {
  CHECK(optimal_threshold({0.5, 0.5, 1.0, 1.0}) == doctest::Approx(1.0));
  CHECK(optimal_threshold({0.9, 0.1, 1.0, 1.0}) == doctest::Approx(9.0));
  CHECK(optimal_threshold({0.5, 0.5, 1.0, 4.0}) == doctest::Approx(0.25));
  CHECK(optimal_threshold({0.25, 0.75, 6.0, 2.0}) == doctest::Approx(1.0));
}

TEST_CASE("risk spec validation names the failing constraint") {
  CHECK_NOTHROW(validate(RiskSpec{0.3, 0.7, 2.0, 1.0}));
  CHECK_THROWS_WITH_AS(validate(RiskSpec{0.5, 0.6, 1.0, 1.0}),
                       doctest::Contains("prior weights must sum to 1"),
                       std::invalid_argument);
  CHECK_THROWS_AS(validate(RiskSpec{-0.5, 1.5, 1.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(validate(RiskSpec{0.5, 0.5, 0.0, 1.0}),
                  std::invalid_argument);
}

TEST_CASE("exact error rates at the symmetric threshold") {
  const EValueSpec spec = simple_spec();
  const ErrorRates rates =
      error_rates(spec, ThresholdRule{1.0, TiePolicy::RejectOnTie}, Enumerate{});
  CHECK(rates.alpha == doctest::Approx(0.171875).epsilon(1e-12));
  CHECK(rates.beta == doctest::Approx(0.3503892816).epsilon(1e-10));
  const Real risk = bayes_risk(RiskSpec{0.5, 0.5, 1.0, 1.0}, rates);
  CHECK(risk == doctest::Approx(0.2611321408).epsilon(1e-10));
}

TEST_CASE("tie policy changes the decision exactly at an atom") {
  // With identical hypotheses the likelihood ratio is exactly 1 on every
  // outcome, so threshold 1 is a tie on the whole space: RejectOnTie always
  // rejects, AcceptOnTie never does.
  EValueSpec spec;
  spec.null_model = Model::bernoulli(0.5);
  spec.alt = Model::bernoulli(0.5);
  spec.n = 4;
  const ErrorRates reject =
      error_rates(spec, ThresholdRule{1.0, TiePolicy::RejectOnTie}, Enumerate{});
  CHECK(reject.alpha == doctest::Approx(1.0));
  CHECK(reject.beta == doctest::Approx(0.0));
  const ErrorRates accept =
      error_rates(spec, ThresholdRule{1.0, TiePolicy::AcceptOnTie}, Enumerate{});
  CHECK(accept.alpha == doctest::Approx(0.0));
  CHECK(accept.beta == doctest::Approx(1.0));
}

TEST_CASE("threshold sweep structure over the bernoulli atoms") {
  const EValueSpec spec = simple_spec();
  const RiskCurve curve =
      threshold_sweep(spec, RiskSpec{0.5, 0.5, 1.0, 1.0}, Enumerate{});

  // 11 distinct likelihood-ratio atoms for n = 10.
  REQUIRE(curve.atoms.size() == 11);
  CHECK(curve.atoms.front() == doctest::Approx(0.0060466176).epsilon(1e-12));
  CHECK(curve.atoms.back() == doctest::Approx(28.9254654976).epsilon(1e-12));
  CHECK(std::is_sorted(curve.atoms.begin(), curve.atoms.end()));

  // Sweep: low sentinel + 11 atoms + 10 midpoints + high sentinel.
  REQUIRE(curve.points.size() == 23);
  CHECK(std::is_sorted(curve.points.begin(), curve.points.end(),
                       [](const RiskPoint& a, const RiskPoint& b) {
                         return a.threshold < b.threshold;
                       }));
  // alpha decreases and beta increases as the threshold rises.
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    CHECK(curve.points[i].alpha <= curve.points[i - 1].alpha + 1e-15);
    CHECK(curve.points[i].beta >= curve.points[i - 1].beta - 1e-15);
  }
  // Sentinels: always-reject and never-reject decisions.
  CHECK(curve.points.front().alpha == doctest::Approx(1.0));
  CHECK(curve.points.front().beta == doctest::Approx(0.0));
  CHECK(curve.points.back().alpha == doctest::Approx(0.0));
  CHECK(curve.points.back().beta == doctest::Approx(1.0));
  // Every point's risk is consistent with its error rates.
  for (const RiskPoint& p : curve.points) {
    CHECK(p.risk ==
          doctest::Approx(0.5 * p.alpha + 0.5 * p.beta).epsilon(1e-14));
    CHECK(p.log_threshold == doctest::Approx(std::log(p.threshold)));
  }
}

TEST_CASE("frozen argmin intervals contain the optimal thresholds") {
  const EValueSpec spec = simple_spec();

  struct Case {
    RiskSpec risk;
    Real lo, hi, min_risk;
  };
  const Case cases[] = {
      {{0.5, 0.5, 1.0, 1.0}, 0.9758278656, 2.2769316864, 0.2611321408},
      {{0.9, 0.1, 1.0, 1.0}, 5.3128406016, 12.3966280704, 0.09473713416},
      {{0.5, 0.5, 1.0, 4.0}, 0.1792336896, 0.4182119424, 0.4062214123},
  };
  for (const Case& c : cases) {
    const RiskCurve curve = threshold_sweep(spec, c.risk, Enumerate{});
    CHECK(curve.min_risk == doctest::Approx(c.min_risk).epsilon(1e-9));
    const Real t_star = optimal_threshold(c.risk);
    CHECK(curve.argmin_contains(t_star));
    // The decision-equivalent optimal interval is the half-open span
    // between consecutive atoms.
    REQUIRE(curve.argmin.size() == 1);
    CHECK(curve.argmin[0].lo == doctest::Approx(c.lo).epsilon(1e-12));
    CHECK(curve.argmin[0].hi == doctest::Approx(c.hi).epsilon(1e-12));
    CHECK_FALSE(curve.argmin[0].lo_is_zero);
    CHECK_FALSE(curve.argmin[0].hi_unbounded);
    // (lo, hi] semantics, checked at the computed machine endpoints.
    CHECK(curve.argmin[0].contains(curve.argmin[0].hi));
    CHECK_FALSE(curve.argmin[0].contains(curve.argmin[0].lo));
    CHECK_FALSE(curve.argmin[0].contains(curve.argmin[0].hi + 1.0));
    // risk(t*) matches the sweep minimum.
    const ErrorRates at_star = error_rates(
        spec, ThresholdRule{t_star, TiePolicy::RejectOnTie}, Enumerate{});
    CHECK(bayes_risk(c.risk, at_star) <= curve.min_risk + 1e-12);
  }
}

TEST_CASE("constant-risk sweep merges into one unbounded interval") {
  // Identical hypotheses: every decision has risk pi0*alpha + pi1*beta with
  // alpha + beta = 1 pointwise, so with symmetric costs the risk is flat and
  // the entire threshold axis is optimal.
  EValueSpec spec;
  spec.null_model = Model::bernoulli(0.5);
  spec.alt = Model::bernoulli(0.5);
  spec.n = 3;
  const RiskCurve curve =
      threshold_sweep(spec, RiskSpec{0.5, 0.5, 1.0, 1.0}, Enumerate{});
  CHECK(curve.min_risk == doctest::Approx(0.5).epsilon(1e-12));
  REQUIRE(curve.argmin.size() == 1);
  CHECK(curve.argmin[0].lo_is_zero);
  CHECK(curve.argmin[0].hi_unbounded);
  CHECK(curve.argmin_contains(1e-9));
  CHECK(curve.argmin_contains(1e9));
}

TEST_CASE("grid sweep estimates the curve by simulation") {
  const EValueSpec spec = simple_spec();
  const std::vector<Real> grid = {0.25, 1.0, 9.0};
  const RiskCurve curve = threshold_sweep_grid(
      spec, RiskSpec{0.5, 0.5, 1.0, 1.0}, grid, MonteCarlo{.reps = 20000, .seed = 11});
  REQUIRE(curve.points.size() == 3);
  // MC estimate at t = 1 should be near the exact rates.
  CHECK(std::abs(curve.points[1].alpha - 0.171875) < 0.02);
  CHECK(std::abs(curve.points[1].beta - 0.3503892816) < 0.02);
  CHECK(curve.min_risk <= curve.points[0].risk + 1e-15);
  // Determinism under a fixed seed.
  const RiskCurve again = threshold_sweep_grid(
      spec, RiskSpec{0.5, 0.5, 1.0, 1.0}, grid, MonteCarlo{.reps = 20000, .seed = 11});
  CHECK(curve.points[1].alpha == again.points[1].alpha);
  CHECK(curve.points[1].beta == again.points[1].beta);
}

TEST_CASE("sweeping a continuous family is refused") {
  EValueSpec spec;
  spec.null_model = Model::gaussian(Vector::Zero(1), 1.0);
  spec.alt = Model::gaussian(Vector::Ones(1), 1.0);
  spec.n = 4;
  CHECK_THROWS_AS(
      threshold_sweep(spec, RiskSpec{0.5, 0.5, 1.0, 1.0}, Enumerate{}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      threshold_sweep(spec, RiskSpec{0.5, 0.5, 1.0, 1.0},
                      MonteCarlo{.reps = 1000, .seed = 1}),
      std::invalid_argument);
}
