#include "evd/models.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace evd {

namespace {

constexpr Real kLog2Pi = 1.8378770664093453;  // log(2*pi)

[[noreturn]] void bad_model(const std::string& what) {
  throw std::invalid_argument("model: " + what);
}

[[noreturn]] void bad_obs(const std::string& what) {
  throw std::domain_error("observation: " + what);
}

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::Bernoulli: return "bernoulli";
    case Family::GaussianKnownVar: return "gaussian";
    case Family::Exponential: return "exponential";
  }
  bad_model("unknown family");
}

Family family_from_name(const std::string& name) {
  if (name == "bernoulli") return Family::Bernoulli;
  if (name == "gaussian") return Family::GaussianKnownVar;
  if (name == "exponential") return Family::Exponential;
  bad_model("unknown family name '" + name + "'");
}

Model Model::bernoulli(Real p) {
  Model m;
  m.family = Family::Bernoulli;
  m.theta = Vector::Constant(1, p);
  validate(m);
  return m;
}

Model Model::gaussian(Vector mean, Real sigma2) {
  Model m;
  m.family = Family::GaussianKnownVar;
  m.theta = std::move(mean);
  m.sigma2 = sigma2;
  validate(m);
  return m;
}

Model Model::exponential(Real rate) {
  Model m;
  m.family = Family::Exponential;
  m.theta = Vector::Constant(1, rate);
  validate(m);
  return m;
}

void validate(const Model& m) {
  if (m.theta.size() == 0) bad_model("parameter vector is empty");
  if (!m.theta.allFinite()) bad_model("parameter vector must be finite");
  switch (m.family) {
    case Family::Bernoulli:
      if (m.theta.size() != 1) bad_model("bernoulli parameter must be scalar");
      if (!(m.theta[0] > 0.0 && m.theta[0] < 1.0)) {
        bad_model("bernoulli p must lie in the open interval (0, 1)");
      }
      break;
    case Family::GaussianKnownVar:
      if (!(m.sigma2 > 0.0) || !std::isfinite(m.sigma2)) {
        bad_model("gaussian sigma2 must be positive and finite");
      }
      break;
    case Family::Exponential:
      if (m.theta.size() != 1) bad_model("exponential parameter must be scalar");
      if (!(m.theta[0] > 0.0)) bad_model("exponential rate must be positive");
      break;
  }
}

Real log_density(const Model& m, const Dataset& data) {
  if (data.dim() != m.dim()) bad_obs("dimension does not match the model");
  const Index n = data.n();
  switch (m.family) {
    case Family::Bernoulli: {
      Index s = 0;
      for (Index i = 0; i < n; ++i) {
        const Real x = data.obs(i, 0);
        if (x == 1.0) {
          ++s;
        } else if (x != 0.0) {
          bad_obs("bernoulli observation must be 0 or 1");
        }
      }
      const Real p = m.theta[0];
      return static_cast<Real>(s) * std::log(p) +
             static_cast<Real>(n - s) * std::log1p(-p);
    }
    case Family::GaussianKnownVar: {
      if (!data.obs.allFinite()) bad_obs("gaussian observation must be finite");
      const Real sq =
          (data.obs.rowwise() - m.theta.transpose()).squaredNorm();
      const Real d = static_cast<Real>(m.dim());
      return -0.5 * static_cast<Real>(n) * d * (kLog2Pi + std::log(m.sigma2)) -
             0.5 * sq / m.sigma2;
    }
    case Family::Exponential: {
      Real total = 0.0;
      for (Index i = 0; i < n; ++i) {
        const Real x = data.obs(i, 0);
        if (!(x >= 0.0) || !std::isfinite(x)) {
          bad_obs("exponential observation must be finite and nonnegative");
        }
        total += x;
      }
      const Real rate = m.theta[0];
      return static_cast<Real>(n) * std::log(rate) - rate * total;
    }
  }
  bad_model("unknown family");
}

Real log_density_row(const Model& m, const Eigen::Ref<const Vector>& x) {
  Dataset one;
  one.obs = x.transpose();
  return log_density(m, one);
}

Dataset sample(const Model& m, Stream& stream, Index n) {
  if (n < 0) bad_model("sample size must be nonnegative");
  Dataset data;
  data.obs.resize(n, m.dim());
  for (Index i = 0; i < n; ++i) {
    data.obs.row(i) = sample_row(m, stream).transpose();
  }
  return data;
}

Vector sample_row(const Model& m, Stream& stream) {
  Vector x(m.dim());
  switch (m.family) {
    case Family::Bernoulli:
      x[0] = stream.bernoulli(m.theta[0]);
      break;
    case Family::GaussianKnownVar: {
      const Real sd = std::sqrt(m.sigma2);
      for (Index j = 0; j < m.dim(); ++j) {
        x[j] = m.theta[j] + sd * stream.normal();
      }
      break;
    }
    case Family::Exponential:
      x[0] = stream.exponential(m.theta[0]);
      break;
  }
  return x;
}

Real kl_divergence(const Model& p, const Model& q) {
  if (p.family != q.family) bad_model("kl_divergence requires matching families");
  if (p.dim() != q.dim()) bad_model("kl_divergence requires matching dimensions");
  switch (p.family) {
    case Family::Bernoulli: {
      const Real a = p.theta[0];
      const Real b = q.theta[0];
      return a * std::log(a / b) + (1.0 - a) * std::log((1.0 - a) / (1.0 - b));
    }
    case Family::GaussianKnownVar: {
      if (p.sigma2 != q.sigma2) {
        bad_model("kl_divergence requires matching known variances");
      }
      return (p.theta - q.theta).squaredNorm() / (2.0 * p.sigma2);
    }
    case Family::Exponential: {
      const Real lp = p.theta[0];
      const Real lq = q.theta[0];
      return std::log(lp / lq) + lq / lp - 1.0;
    }
  }
  bad_model("unknown family");
}

Matrix fisher_information(const Model& m) {
  switch (m.family) {
    case Family::Bernoulli: {
      const Real p = m.theta[0];
      return Matrix::Constant(1, 1, 1.0 / (p * (1.0 - p)));
    }
    case Family::GaussianKnownVar:
      return Matrix::Identity(m.dim(), m.dim()) / m.sigma2;
    case Family::Exponential: {
      const Real rate = m.theta[0];
      return Matrix::Constant(1, 1, 1.0 / (rate * rate));
    }
  }
  bad_model("unknown family");
}

Real log_det_fisher(const Model& m) {
  switch (m.family) {
    case Family::Bernoulli: {
      const Real p = m.theta[0];
      return -std::log(p) - std::log1p(-p);
    }
    case Family::GaussianKnownVar:
      return -static_cast<Real>(m.dim()) * std::log(m.sigma2);
    case Family::Exponential:
      return -2.0 * std::log(m.theta[0]);
  }
  bad_model("unknown family");
}

void write_dataset(std::ostream& os, const Dataset& data) {
  char buf[64];
  for (Index i = 0; i < data.n(); ++i) {
    for (Index j = 0; j < data.dim(); ++j) {
      if (j > 0) os.put(' ');
      const auto res =
          std::to_chars(buf, buf + sizeof(buf), data.obs(i, j));
      os.write(buf, res.ptr - buf);
    }
    os.put('\n');
  }
}

Dataset read_dataset(std::istream& is, Index dim) {
  if (dim < 1) bad_obs("dataset dimension must be positive");
  std::vector<Real> values;
  std::string line;
  Index rows = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    Real v = 0.0;
    Index got = 0;
    while (ls >> v) {
      values.push_back(v);
      ++got;
    }
    if (got != dim) bad_obs("dataset row has wrong number of coordinates");
    ++rows;
  }
  Dataset data;
  data.obs.resize(rows, dim);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < dim; ++j) {
      data.obs(i, j) = values[static_cast<std::size_t>(i * dim + j)];
    }
  }
  return data;
}

}  // namespace evd
