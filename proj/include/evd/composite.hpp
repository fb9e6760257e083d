#pragma once

#include "evd/method.hpp"
#include "evd/models.hpp"
#include "evd/rng.hpp"
#include "evd/types.hpp"

#include <variant>
#include <vector>

namespace evd {

/// Beta(a, b) prior over a Bernoulli success probability.
struct BetaPrior {
  Real a = 1.0;
  Real b = 1.0;
};

/// Isotropic Gaussian prior N(mean, tau2 * I) over a Gaussian mean vector.
struct GaussianPrior {
  Vector mean;
  Real tau2 = 1.0;
};

/// Finite mixing distribution over explicit parameter nodes.
struct GridPrior {
  std::vector<Vector> nodes;
  std::vector<Real> weights;  // strictly positive, summing to 1
};

using PriorSpec = std::variant<BetaPrior, GaussianPrior, GridPrior>;

/// A composite alternative: the data law is p(x^n | theta) mixed over a
/// prior pi1 on the family's parameter. The induced marginal likelihood is
/// the evidence m1(x^n) = integral of p(x^n | theta) dpi1(theta).
struct MixtureAlternative {
  Family family = Family::Bernoulli;
  PriorSpec prior;
  Real sigma2 = 1.0;        // observation variance for GaussianKnownVar
  int quadrature_nodes = 256;  // grid size when a continuous prior is discretized

  static MixtureAlternative beta_bernoulli(Real a, Real b);
  static MixtureAlternative gaussian_location(Vector prior_mean, Real tau2,
                                              Real sigma2 = 1.0);
  static MixtureAlternative grid(Family family, GridPrior prior,
                                 Real sigma2 = 1.0);

  Index dim() const;
};

void validate(const MixtureAlternative& mix);

/// Prior log density at theta (continuous priors only; throws for grids).
Real prior_log_density(const MixtureAlternative& mix, const Vector& theta);

/// True when theta lies in the prior's support.
bool in_support(const MixtureAlternative& mix, const Vector& theta);

/// Draw theta ~ pi1.
Vector sample_theta(const MixtureAlternative& mix, Stream& stream);

/// The component model p(. | theta).
Model model_at(const MixtureAlternative& mix, const Vector& theta);

/// Hierarchical draw: theta ~ pi1, then n observations from p(. | theta).
Dataset sample_hierarchical(const MixtureAlternative& mix, Stream& stream,
                            Index n);

/// log m1(x^n). Beta-Bernoulli and Gaussian-location marginals use closed
/// forms; grid priors use log-sum-exp over nodes.
Real marginal_log_likelihood(const MixtureAlternative& mix,
                             const Dataset& data);

/// Replace a continuous prior by a Gauss-Legendre discretization with
/// `nodes` points (scalar parameters only). Grid priors pass through.
MixtureAlternative discretize(const MixtureAlternative& mix, int nodes);

/// log B01(x^n) = log p0(x^n) - log m1(x^n): evidence for the null against
/// the mixture alternative.
Real reciprocal_log_bayes_factor(const Model& null_model,
                                 const MixtureAlternative& mix,
                                 const Dataset& data);

/// Incremental prefix marginal: after appending x_1..x_t this holds
/// log m1(x^t), updated in O(cost of one predictive step). Used by the
/// sequential checks so a length-T trace costs O(T) marginal evaluations.
class PrefixMarginal {
 public:
  explicit PrefixMarginal(const MixtureAlternative& mix);

  /// Appends one observation; returns the predictive log increment
  /// log m1(x^{t+1}) - log m1(x^t).
  Real append(const Eigen::Ref<const Vector>& x);

  Real log_marginal() const { return log_marginal_; }
  Index count() const { return count_; }

 private:
  MixtureAlternative mix_;
  Real log_marginal_ = 0.0;
  Index count_ = 0;
  // Beta-Bernoulli sufficient statistics.
  Real successes_ = 0.0;
  // Gaussian-location posterior (per coordinate, isotropic).
  Vector post_mean_;
  Real post_var_ = 0.0;
  // Grid prior: log weight + accumulated log likelihood per node.
  std::vector<Real> node_log_mass_;
};

}  // namespace evd
