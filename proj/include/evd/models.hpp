#pragma once

#include "evd/rng.hpp"
#include "evd/types.hpp"

#include <iosfwd>
#include <string>

namespace evd {

enum class Family { Bernoulli, GaussianKnownVar, Exponential };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

/// A simple parametric law for i.i.d. observations. `theta` is the natural
/// parameter vector of the family: success probability (Bernoulli), mean
/// vector (Gaussian with known variance `sigma2`), or rate (Exponential).
struct Model {
  Family family = Family::Bernoulli;
  Vector theta;
  Real sigma2 = 1.0;  // only meaningful for GaussianKnownVar

  static Model bernoulli(Real p);
  static Model gaussian(Vector mean, Real sigma2 = 1.0);
  static Model exponential(Real rate);

  Index dim() const { return theta.size(); }
};

/// Throws std::invalid_argument when the parameter lies outside the family's
/// open parameter space (e.g. Bernoulli p outside (0, 1)).
void validate(const Model& m);

/// i.i.d. observations, one row per draw, one column per coordinate.
struct Dataset {
  Matrix obs;

  Index n() const { return obs.rows(); }
  Index dim() const { return obs.cols(); }
};

/// Joint log density/mass of the whole dataset under `m`. Observations
/// outside the sample space raise std::domain_error. Bernoulli mass is
/// evaluated from the success count so datasets with equal counts produce
/// bit-identical values.
Real log_density(const Model& m, const Dataset& data);

/// Log density of a single observation row.
Real log_density_row(const Model& m, const Eigen::Ref<const Vector>& x);

/// Draw n i.i.d. observations.
Dataset sample(const Model& m, Stream& stream, Index n);

/// Draw one observation row.
Vector sample_row(const Model& m, Stream& stream);

/// KL divergence KL(p || q) in nats; requires matching family, dimension and
/// auxiliary constants.
Real kl_divergence(const Model& p, const Model& q);

/// Fisher information matrix at the model's parameter.
Matrix fisher_information(const Model& m);

/// log det of the Fisher information (closed form per family).
Real log_det_fisher(const Model& m);

/// Plain-text dataset round-trip: one row per line, coordinates separated by
/// single spaces, shortest round-trip decimal formatting.
void write_dataset(std::ostream& os, const Dataset& data);
Dataset read_dataset(std::istream& is, Index dim);

}  // namespace evd
