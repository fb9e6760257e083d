#include "evd/composite.hpp"

#include "evd/numeric.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace evd {

namespace {

constexpr Real kLog2Pi = 1.8378770664093453;

Real log_beta_fn(Real a, Real b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

[[noreturn]] void bad_mixture(const std::string& what) {
  throw std::invalid_argument("mixture: " + what);
}

Real gaussian_log_pdf(Real x, Real mean, Real var) {
  const Real d = x - mean;
  return -0.5 * (kLog2Pi + std::log(var)) - 0.5 * d * d / var;
}

}  // namespace

MixtureAlternative MixtureAlternative::beta_bernoulli(Real a, Real b) {
  MixtureAlternative mix;
  mix.family = Family::Bernoulli;
  mix.prior = BetaPrior{a, b};
  validate(mix);
  return mix;
}

MixtureAlternative MixtureAlternative::gaussian_location(Vector prior_mean,
                                                         Real tau2,
                                                         Real sigma2) {
  MixtureAlternative mix;
  mix.family = Family::GaussianKnownVar;
  mix.prior = GaussianPrior{std::move(prior_mean), tau2};
  mix.sigma2 = sigma2;
  validate(mix);
  return mix;
}

MixtureAlternative MixtureAlternative::grid(Family family, GridPrior prior,
                                            Real sigma2) {
  MixtureAlternative mix;
  mix.family = family;
  mix.prior = std::move(prior);
  mix.sigma2 = sigma2;
  validate(mix);
  return mix;
}

Index MixtureAlternative::dim() const {
  if (std::holds_alternative<BetaPrior>(prior)) return 1;
  if (const auto* g = std::get_if<GaussianPrior>(&prior)) {
    return g->mean.size();
  }
  const auto& grid = std::get<GridPrior>(prior);
  return grid.nodes.empty() ? 0 : grid.nodes.front().size();
}

void validate(const MixtureAlternative& mix) {
  if (const auto* beta = std::get_if<BetaPrior>(&mix.prior)) {
    if (mix.family != Family::Bernoulli) {
      bad_mixture("beta prior requires the bernoulli family");
    }
    if (!(beta->a > 0.0) || !(beta->b > 0.0)) {
      bad_mixture("beta prior parameters must be positive");
    }
    return;
  }
  if (const auto* g = std::get_if<GaussianPrior>(&mix.prior)) {
    if (mix.family != Family::GaussianKnownVar) {
      bad_mixture("gaussian prior requires the gaussian family");
    }
    if (g->mean.size() == 0 || !g->mean.allFinite()) {
      bad_mixture("gaussian prior mean must be finite and nonempty");
    }
    if (!(g->tau2 > 0.0) || !std::isfinite(g->tau2)) {
      bad_mixture("gaussian prior tau2 must be positive and finite");
    }
    if (!(mix.sigma2 > 0.0) || !std::isfinite(mix.sigma2)) {
      bad_mixture("gaussian observation sigma2 must be positive and finite");
    }
    return;
  }
  const auto& grid = std::get<GridPrior>(mix.prior);
  if (grid.nodes.empty()) bad_mixture("grid prior has no nodes");
  if (grid.nodes.size() != grid.weights.size()) {
    bad_mixture("grid prior nodes and weights differ in length");
  }
  NeumaierSum total;
  for (std::size_t k = 0; k < grid.nodes.size(); ++k) {
    if (!(grid.weights[k] > 0.0)) {
      bad_mixture("grid prior weights must be strictly positive");
    }
    total.add(grid.weights[k]);
    validate(model_at(mix, grid.nodes[k]));  // node must be a valid parameter
  }
  if (std::abs(total.value() - 1.0) > 1e-9) {
    bad_mixture("grid prior weights must sum to 1");
  }
}

Real prior_log_density(const MixtureAlternative& mix, const Vector& theta) {
  if (theta.size() != mix.dim()) bad_mixture("theta dimension mismatch");
  if (const auto* beta = std::get_if<BetaPrior>(&mix.prior)) {
    const Real t = theta[0];
    if (!(t > 0.0 && t < 1.0)) bad_mixture("theta outside the beta support");
    return (beta->a - 1.0) * std::log(t) + (beta->b - 1.0) * std::log1p(-t) -
           log_beta_fn(beta->a, beta->b);
  }
  if (const auto* g = std::get_if<GaussianPrior>(&mix.prior)) {
    Real total = 0.0;
    for (Index j = 0; j < theta.size(); ++j) {
      total += gaussian_log_pdf(theta[j], g->mean[j], g->tau2);
    }
    return total;
  }
  bad_mixture("grid priors have no density; use the node weights");
}

bool in_support(const MixtureAlternative& mix, const Vector& theta) {
  if (theta.size() != mix.dim()) return false;
  if (std::holds_alternative<BetaPrior>(mix.prior)) {
    return theta[0] > 0.0 && theta[0] < 1.0;
  }
  if (std::holds_alternative<GaussianPrior>(mix.prior)) {
    return theta.allFinite();
  }
  const auto& grid = std::get<GridPrior>(mix.prior);
  for (const auto& node : grid.nodes) {
    if (node == theta) return true;
  }
  return false;
}

Vector sample_theta(const MixtureAlternative& mix, Stream& stream) {
  if (const auto* beta = std::get_if<BetaPrior>(&mix.prior)) {
    Real t = stream.beta(beta->a, beta->b);
    // Keep draws inside the open interval; the boundary has prior mass 0 but
    // is representable in floating point.
    t = std::min(std::max(t, 1e-300), 1.0 - 1e-16);
    return Vector::Constant(1, t);
  }
  if (const auto* g = std::get_if<GaussianPrior>(&mix.prior)) {
    Vector theta(g->mean.size());
    const Real tau = std::sqrt(g->tau2);
    for (Index j = 0; j < theta.size(); ++j) {
      theta[j] = g->mean[j] + tau * stream.normal();
    }
    return theta;
  }
  const auto& grid = std::get<GridPrior>(mix.prior);
  const Real u = stream.uniform();
  Real cum = 0.0;
  for (std::size_t k = 0; k < grid.nodes.size(); ++k) {
    cum += grid.weights[k];
    if (u < cum) return grid.nodes[k];
  }
  return grid.nodes.back();
}

Model model_at(const MixtureAlternative& mix, const Vector& theta) {
  Model m;
  m.family = mix.family;
  m.theta = theta;
  m.sigma2 = mix.sigma2;
  return m;
}

Dataset sample_hierarchical(const MixtureAlternative& mix, Stream& stream,
                            Index n) {
  Model component = model_at(mix, sample_theta(mix, stream));
  validate(component);
  return sample(component, stream, n);
}

Real marginal_log_likelihood(const MixtureAlternative& mix,
                             const Dataset& data) {
  if (data.dim() != mix.dim()) bad_mixture("data dimension mismatch");
  const Index n = data.n();
  if (const auto* beta = std::get_if<BetaPrior>(&mix.prior)) {
    Index s = 0;
    for (Index i = 0; i < n; ++i) {
      const Real x = data.obs(i, 0);
      if (x == 1.0) {
        ++s;
      } else if (x != 0.0) {
        throw std::domain_error("observation: bernoulli observation must be 0 or 1");
      }
    }
    return log_beta_fn(beta->a + static_cast<Real>(s),
                       beta->b + static_cast<Real>(n - s)) -
           log_beta_fn(beta->a, beta->b);
  }
  if (const auto* g = std::get_if<GaussianPrior>(&mix.prior)) {
    if (n == 0) return 0.0;
    const Real s2 = mix.sigma2;
    const Real nn = static_cast<Real>(n);
    Real total = 0.0;
    for (Index j = 0; j < data.dim(); ++j) {
      const Real xbar = data.obs.col(j).mean();
      const Real ss = (data.obs.col(j).array() - xbar).square().sum();
      const Real dm = xbar - g->mean[j];
      total += -0.5 * nn * (kLog2Pi + std::log(s2)) -
               0.5 * std::log1p(nn * g->tau2 / s2) - 0.5 * ss / s2 -
               0.5 * nn * dm * dm / (s2 + nn * g->tau2);
    }
    return total;
  }
  const auto& grid = std::get<GridPrior>(mix.prior);
  std::vector<Real> terms;
  terms.reserve(grid.nodes.size());
  for (std::size_t k = 0; k < grid.nodes.size(); ++k) {
    terms.push_back(std::log(grid.weights[k]) +
                    log_density(model_at(mix, grid.nodes[k]), data));
  }
  return log_sum_exp(terms);
}

MixtureAlternative discretize(const MixtureAlternative& mix, int nodes) {
  if (nodes < 2) bad_mixture("discretize needs at least two nodes");
  if (std::holds_alternative<GridPrior>(mix.prior)) return mix;
  if (mix.dim() != 1) bad_mixture("discretize supports scalar parameters only");

  Real lo = 0.0;
  Real hi = 0.0;
  if (std::holds_alternative<BetaPrior>(mix.prior)) {
    lo = 0.0;
    hi = 1.0;
  } else {
    const auto& g = std::get<GaussianPrior>(mix.prior);
    const Real tau = std::sqrt(g.tau2);
    lo = g.mean[0] - 8.5 * tau;  // leaves < 1e-16 of prior mass outside
    hi = g.mean[0] + 8.5 * tau;
  }
  const QuadratureNodes rule = map_to_interval(gauss_legendre(nodes), lo, hi);

  GridPrior grid;
  grid.nodes.reserve(rule.x.size());
  grid.weights.reserve(rule.x.size());
  NeumaierSum total;
  for (std::size_t i = 0; i < rule.x.size(); ++i) {
    const Vector theta = Vector::Constant(1, rule.x[i]);
    const Real w = rule.w[i] * std::exp(prior_log_density(mix, theta));
    grid.nodes.push_back(theta);
    grid.weights.push_back(w);
    total.add(w);
  }
  // Renormalize so the discretization is itself a probability vector.
  const Real z = total.value();
  for (Real& w : grid.weights) w /= z;

  MixtureAlternative out = mix;
  out.prior = std::move(grid);
  out.quadrature_nodes = nodes;
  validate(out);
  return out;
}

Real reciprocal_log_bayes_factor(const Model& null_model,
                                 const MixtureAlternative& mix,
                                 const Dataset& data) {
  if (null_model.family != mix.family) {
    bad_mixture("null model family must match the mixture family");
  }
  return log_density(null_model, data) - marginal_log_likelihood(mix, data);
}

PrefixMarginal::PrefixMarginal(const MixtureAlternative& mix) : mix_(mix) {
  validate(mix_);
  if (const auto* g = std::get_if<GaussianPrior>(&mix_.prior)) {
    post_mean_ = g->mean;
    post_var_ = g->tau2;
  } else if (const auto* grid = std::get_if<GridPrior>(&mix_.prior)) {
    node_log_mass_.reserve(grid->weights.size());
    for (Real w : grid->weights) node_log_mass_.push_back(std::log(w));
  }
}

Real PrefixMarginal::append(const Eigen::Ref<const Vector>& x) {
  if (x.size() != mix_.dim()) bad_mixture("observation dimension mismatch");
  Real increment = 0.0;
  if (const auto* beta = std::get_if<BetaPrior>(&mix_.prior)) {
    const Real t = static_cast<Real>(count_);
    const Real denom = beta->a + beta->b + t;
    if (x[0] == 1.0) {
      increment = std::log((beta->a + successes_) / denom);
      successes_ += 1.0;
    } else if (x[0] == 0.0) {
      increment = std::log((beta->b + t - successes_) / denom);
    } else {
      throw std::domain_error("observation: bernoulli observation must be 0 or 1");
    }
  } else if (std::holds_alternative<GaussianPrior>(mix_.prior)) {
    const Real pred_var = mix_.sigma2 + post_var_;
    for (Index j = 0; j < x.size(); ++j) {
      increment += gaussian_log_pdf(x[j], post_mean_[j], pred_var);
    }
    const Real new_var =
        1.0 / (1.0 / post_var_ + 1.0 / mix_.sigma2);
    for (Index j = 0; j < x.size(); ++j) {
      post_mean_[j] =
          new_var * (post_mean_[j] / post_var_ + x[j] / mix_.sigma2);
    }
    post_var_ = new_var;
  } else {
    const auto& grid = std::get<GridPrior>(mix_.prior);
    const Real before = log_sum_exp(node_log_mass_);
    for (std::size_t k = 0; k < grid.nodes.size(); ++k) {
      node_log_mass_[k] += log_density_row(model_at(mix_, grid.nodes[k]), x);
    }
    increment = log_sum_exp(node_log_mass_) - before;
  }
  ++count_;
  log_marginal_ += increment;
  return increment;
}

}  // namespace evd
