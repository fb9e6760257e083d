#include "evd/models.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace evd;

namespace {

Dataset make_dataset(std::initializer_list<Real> values) {
  Dataset d;
  d.obs.resize(static_cast<Index>(values.size()), 1);
  Index i = 0;
  for (Real v : values) d.obs(i++, 0) = v;
  return d;
}

}  // namespace

TEST_CASE("log densities match hand-computed values") {
  // Bernoulli(0.7), data 1,0,1,1: 3 log 0.7 + log 0.3
  const Model bern = Model::bernoulli(0.7);
  CHECK(log_density(bern, make_dataset({1, 0, 1, 1})) ==
        doctest::Approx(-2.2739976361421332).epsilon(1e-14));

  // Standard normal, data 0.5, -0.3: -log(2 pi) - (0.25 + 0.09)/2
  const Model gauss = Model::gaussian(Vector::Zero(1), 1.0);
  CHECK(log_density(gauss, make_dataset({0.5, -0.3})) ==
        doctest::Approx(-2.0078770664093453).epsilon(1e-14));

  // 2-d standard normal at the origin: -log(2 pi)
  const Model gauss2 = Model::gaussian(Vector::Zero(2), 1.0);
  Dataset origin;
  origin.obs = Matrix::Zero(1, 2);
  CHECK(log_density(gauss2, origin) ==
        doctest::Approx(-1.8378770664093453).epsilon(1e-14));

  // Exponential(2), data 0.5, 1.25: 2 log 2 - 2 * 1.75
  const Model expo = Model::exponential(2.0);
  CHECK(log_density(expo, make_dataset({0.5, 1.25})) ==
        doctest::Approx(-2.1137056388801094).epsilon(1e-14));

  // Row-wise evaluation agrees with the joint on a singleton.
  CHECK(log_density_row(bern, Vector::Constant(1, 1.0)) ==
        doctest::Approx(std::log(0.7)).epsilon(1e-15));
}

TEST_CASE("bernoulli mass depends only on the success count") {
  const Model bern = Model::bernoulli(0.7);
  const Real a = log_density(bern, make_dataset({1, 1, 0, 0, 1}));
  const Real b = log_density(bern, make_dataset({0, 1, 1, 1, 0}));
  CHECK(a == b);  // bit-identical, not just approximately equal
}

TEST_CASE("kl divergences match closed forms") {
  CHECK(kl_divergence(Model::bernoulli(0.7), Model::bernoulli(0.5)) ==
        doctest::Approx(0.08228287850505178).epsilon(1e-14));
  CHECK(kl_divergence(Model::bernoulli(0.5), Model::bernoulli(0.5)) ==
        doctest::Approx(0.0));
  CHECK(kl_divergence(Model::gaussian(Vector::Ones(1)),
                      Model::gaussian(Vector::Zero(1))) ==
        doctest::Approx(0.5).epsilon(1e-15));
  CHECK(kl_divergence(Model::exponential(2.0), Model::exponential(1.0)) ==
        doctest::Approx(0.1931471805599454).epsilon(1e-14));
  // nonnegativity on a small grid
  for (Real p : {0.1, 0.3, 0.5, 0.9}) {
    for (Real q : {0.2, 0.5, 0.8}) {
      CHECK(kl_divergence(Model::bernoulli(p), Model::bernoulli(q)) >= 0.0);
    }
  }
  CHECK_THROWS_AS(
      kl_divergence(Model::bernoulli(0.5), Model::exponential(1.0)),
      std::invalid_argument);
  CHECK_THROWS_AS(kl_divergence(Model::gaussian(Vector::Zero(1), 1.0),
                                Model::gaussian(Vector::Zero(1), 2.0)),
                  std::invalid_argument);
}

TEST_CASE("fisher information matches closed forms") {
  CHECK(fisher_information(Model::bernoulli(0.7))(0, 0) ==
        doctest::Approx(1.0 / 0.21).epsilon(1e-14));
  const Matrix g = fisher_information(Model::gaussian(Vector::Zero(3), 2.0));
  CHECK(g.rows() == 3);
  CHECK(g(0, 0) == doctest::Approx(0.5));
  CHECK(g(0, 1) == doctest::Approx(0.0));
  CHECK(fisher_information(Model::exponential(2.0))(0, 0) ==
        doctest::Approx(0.25).epsilon(1e-15));

  // log det agrees with the dense determinant
  for (const Model& m : {Model::bernoulli(0.3), Model::exponential(1.7),
                         Model::gaussian(Vector::Zero(2), 0.5)}) {
    CHECK(log_det_fisher(m) ==
          doctest::Approx(std::log(fisher_information(m).determinant()))
              .epsilon(1e-12));
  }
}

TEST_CASE("model validation rejects out-of-space parameters") {
  CHECK_THROWS_AS(Model::bernoulli(0.0), std::invalid_argument);
  CHECK_THROWS_AS(Model::bernoulli(1.0), std::invalid_argument);
  CHECK_THROWS_AS(Model::gaussian(Vector::Zero(1), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Model::exponential(-2.0), std::invalid_argument);
  CHECK_NOTHROW(Model::bernoulli(1e-12));
}

TEST_CASE("observations outside the sample space are rejected") {
  const Model bern = Model::bernoulli(0.5);
  CHECK_THROWS_AS(log_density(bern, make_dataset({0, 2})), std::domain_error);
  CHECK_THROWS_AS(log_density(bern, make_dataset({0.5})), std::domain_error);
  const Model expo = Model::exponential(1.0);
  CHECK_THROWS_AS(log_density(expo, make_dataset({-0.1})), std::domain_error);
  CHECK_NOTHROW(log_density(expo, make_dataset({0.0})));
}

TEST_CASE("sampling is deterministic and lands in the sample space") {
  const Model bern = Model::bernoulli(0.7);
  Stream s1(11);
  Stream s2(11);
  const Dataset a = sample(bern, s1, 50);
  const Dataset b = sample(bern, s2, 50);
  CHECK(a.obs == b.obs);
  CHECK(a.n() == 50);
  for (Index i = 0; i < a.n(); ++i) {
    CHECK((a.obs(i, 0) == 0.0 || a.obs(i, 0) == 1.0));
  }

  const Model gauss = Model::gaussian(Vector::Ones(2), 4.0);
  Stream s3(5);
  const Dataset g = sample(gauss, s3, 10);
  CHECK(g.dim() == 2);
  CHECK(g.obs.allFinite());

  const Model expo = Model::exponential(0.5);
  Stream s4(5);
  const Dataset e = sample(expo, s4, 10);
  CHECK((e.obs.array() >= 0.0).all());
}

TEST_CASE("dataset io round-trips exactly") {
  const Model gauss = Model::gaussian(Vector::Zero(3), 1.0);
  Stream s(17);
  const Dataset d = sample(gauss, s, 7);
  std::stringstream ss;
  write_dataset(ss, d);
  const Dataset back = read_dataset(ss, 3);
  CHECK(back.n() == 7);
  CHECK(back.obs == d.obs);  // shortest-round-trip formatting is lossless

  std::stringstream bad("1 2\n3\n");
  CHECK_THROWS_AS(read_dataset(bad, 2), std::domain_error);
}

TEST_CASE("family names round-trip") {
  for (Family f :
       {Family::Bernoulli, Family::GaussianKnownVar, Family::Exponential}) {
    CHECK(family_from_name(family_name(f)) == f);
  }
  CHECK_THROWS_AS(family_from_name("cauchy"), std::invalid_argument);
}
