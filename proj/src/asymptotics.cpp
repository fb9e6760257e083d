#include "evd/asymptotics.hpp"

#include "evd/numeric.hpp"

#include <cmath>
#include <stdexcept>

namespace evd {

namespace {

constexpr Real kLog2PiE = 2.8378770664093453;  // log(2*pi*e)

[[noreturn]] void bad_asym(const std::string& what) {
  throw std::invalid_argument("asymptotics: " + what);
}

void check_compatible(const Model& theta1, const Model& theta0,
                      const MixtureAlternative& mix) {
  validate(theta1);
  validate(theta0);
  validate(mix);
  if (theta1.family != theta0.family || theta1.family != mix.family) {
    bad_asym("models and mixture must share one family");
  }
  if (theta1.dim() != theta0.dim() || theta1.dim() != mix.dim()) {
    bad_asym("models and mixture must agree on dimension");
  }
  if (theta1.family == Family::GaussianKnownVar &&
      (theta1.sigma2 != theta0.sigma2 || theta1.sigma2 != mix.sigma2)) {
    bad_asym("known variances must match");
  }
}

const GaussianPrior& gaussian_prior_of(const MixtureAlternative& mix) {
  const auto* g = std::get_if<GaussianPrior>(&mix.prior);
  if (g == nullptr) bad_asym("closed form requires a gaussian-location prior");
  return *g;
}

}  // namespace

ExpansionPrediction expansion_prediction(const Model& theta1,
                                         const Model& theta0,
                                         const MixtureAlternative& mix,
                                         Index n) {
  check_compatible(theta1, theta0, mix);
  if (n < 1) bad_asym("sample size must be positive");
  if (std::holds_alternative<GridPrior>(mix.prior)) {
    bad_asym("expansion needs a continuous prior with a density at theta1");
  }
  const Real log_prior = prior_log_density(mix, theta1.theta);
  if (!std::isfinite(log_prior)) {
    bad_asym("prior density must be positive at theta1");
  }
  const Real d = static_cast<Real>(theta1.dim());
  ExpansionPrediction pred;
  pred.n = n;
  pred.kl_term = -static_cast<Real>(n) * kl_divergence(theta1, theta0);
  pred.log_n_term = 0.5 * d * std::log(static_cast<Real>(n));
  pred.constant_term =
      0.5 * log_det_fisher(theta1) - log_prior - 0.5 * d * kLog2PiE;
  pred.redundancy = pred.log_n_term + pred.constant_term;
  pred.total = pred.kl_term + pred.redundancy;
  return pred;
}

namespace {

// Shared enumeration/MC body: estimates E_theta[log p_theta - log m1] and
// optionally shifts by a constant (the exact -n*KL term).
Estimate redundancy_core(const Model& theta, const MixtureAlternative& mix,
                         Index n, const Method& method, Real shift) {
  if (n < 1) bad_asym("sample size must be positive");
  if (const auto* en = std::get_if<Enumerate>(&method)) {
    NeumaierSum acc;
    std::size_t outcomes = 0;
    for_each_outcome(theta.family, n,
                     [&](const Dataset& x) {
                       const Real lp = log_density(theta, x);
                       const Real lm = marginal_log_likelihood(mix, x);
                       acc.add(std::exp(lp) * (lp - lm));
                       ++outcomes;
                     },
                     en->cap);
    return Estimate{acc.value() + shift, 0.0, true, outcomes};
  }
  const auto& mc = std::get<MonteCarlo>(method);
  if (mc.reps < 2) bad_asym("monte carlo needs at least two replicates");
  MeanAccumulator acc;
  for (std::size_t i = 0; i < mc.reps; ++i) {
    Stream stream = Stream::substream(mc.seed, i);
    const Dataset x = sample(theta, stream, n);
    acc.add(log_density(theta, x) - marginal_log_likelihood(mix, x));
  }
  return Estimate{acc.mean() + shift, acc.std_error(), false, mc.reps};
}

}  // namespace

Estimate expected_log_ratio(const Model& theta1, const Model& theta0,
                            const MixtureAlternative& mix, Index n,
                            const Method& method) {
  check_compatible(theta1, theta0, mix);
  const Real exact_kl_term =
      -static_cast<Real>(n) * kl_divergence(theta1, theta0);
  return redundancy_core(theta1, mix, n, method, exact_kl_term);
}

Estimate redundancy(const Model& theta, const MixtureAlternative& mix,
                    Index n, const Method& method) {
  validate(theta);
  validate(mix);
  if (theta.family != mix.family || theta.dim() != mix.dim()) {
    bad_asym("model and mixture must share family and dimension");
  }
  if (theta.family == Family::GaussianKnownVar && theta.sigma2 != mix.sigma2) {
    bad_asym("known variances must match");
  }
  return redundancy_core(theta, mix, n, method, 0.0);
}

Real gaussian_redundancy(const Model& theta, const MixtureAlternative& mix,
                         Index n) {
  validate(theta);
  validate(mix);
  if (theta.family != Family::GaussianKnownVar ||
      mix.family != Family::GaussianKnownVar) {
    bad_asym("closed form requires the gaussian family");
  }
  if (theta.dim() != mix.dim() || theta.sigma2 != mix.sigma2) {
    bad_asym("model and mixture must agree on dimension and variance");
  }
  if (n < 1) bad_asym("sample size must be positive");
  const GaussianPrior& g = gaussian_prior_of(mix);
  const Real s2 = theta.sigma2;
  const Real nn = static_cast<Real>(n);
  Real total = 0.0;
  for (Index j = 0; j < theta.dim(); ++j) {
    const Real dm = theta.theta[j] - g.mean[j];
    total += 0.5 * std::log1p(nn * g.tau2 / s2) - 0.5 +
             (nn * dm * dm + s2) / (2.0 * (s2 + nn * g.tau2));
  }
  return total;
}

Real gaussian_expected_log_ratio(const Model& theta1, const Model& theta0,
                                 const MixtureAlternative& mix, Index n) {
  check_compatible(theta1, theta0, mix);
  if (theta1.family != Family::GaussianKnownVar) {
    bad_asym("closed form requires the gaussian family");
  }
  return -static_cast<Real>(n) * kl_divergence(theta1, theta0) +
         gaussian_redundancy(theta1, mix, n);
}

ConvergenceReport convergence_report(const Model& theta1, const Model& theta0,
                                     const MixtureAlternative& mix,
                                     const std::vector<Index>& n_grid,
                                     const Method& method) {
  if (n_grid.empty()) bad_asym("sample-size grid is empty");
  ConvergenceReport report;
  report.rows.reserve(n_grid.size());
  for (std::size_t row = 0; row < n_grid.size(); ++row) {
    const Index n = n_grid[row];
    Method row_method = method;
    if (auto* mc = std::get_if<MonteCarlo>(&row_method)) {
      mc->seed = derive_seed(mc->seed, row);  // rows are independent
    }
    const Estimate est =
        expected_log_ratio(theta1, theta0, mix, n, row_method);
    const ExpansionPrediction pred =
        expansion_prediction(theta1, theta0, mix, n);
    ConvergenceRow out;
    out.n = n;
    out.empirical = est.value;
    out.std_error = est.std_error;
    out.predicted = pred.total;
    out.gap = est.value - pred.total;
    report.rows.push_back(out);
  }
  return report;
}

}  // namespace evd
