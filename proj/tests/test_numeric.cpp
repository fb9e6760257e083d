#include "evd/numeric.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

using namespace evd;

TEST_CASE("neumaier sum is accurate across magnitude gaps") {
  NeumaierSum acc;
  acc.add(1e16);
  for (int i = 0; i < 10; ++i) acc.add(1.0);
  acc.add(-1e16);
  CHECK(acc.value() == doctest::Approx(10.0).epsilon(1e-15));
}

TEST_CASE("neumaier sum matches plain addition on benign input") {
  NeumaierSum acc;
  Real plain = 0.0;
  for (int i = 1; i <= 1000; ++i) {
    acc.add(1.0 / i);
    plain += 1.0 / i;
  }
  CHECK(std::abs(acc.value() - plain) < 1e-12);
}

TEST_CASE("mean accumulator reproduces known moments") {
  MeanAccumulator acc;
  for (Real x : {2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0}) acc.add(x);
  CHECK(acc.count() == 8);
  CHECK(acc.mean() == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(acc.variance() == doctest::Approx(32.0 / 7.0).epsilon(1e-14));
  CHECK(acc.std_error() ==
        doctest::Approx(std::sqrt(32.0 / 7.0 / 8.0)).epsilon(1e-14));
}

TEST_CASE("log_sum_exp handles spread and degenerate inputs") {
  const std::vector<Real> xs = {0.0, std::log(2.0), std::log(3.0)};
  CHECK(log_sum_exp(xs) == doctest::Approx(std::log(6.0)).epsilon(1e-15));

  const std::vector<Real> shifted = {-1000.0, -1000.0};
  CHECK(log_sum_exp(shifted) ==
        doctest::Approx(-1000.0 + std::log(2.0)).epsilon(1e-15));

  const Real ninf = -std::numeric_limits<Real>::infinity();
  const std::vector<Real> with_ninf = {ninf, 0.0};
  CHECK(log_sum_exp(with_ninf) == doctest::Approx(0.0));
  const std::vector<Real> all_ninf = {ninf, ninf};
  CHECK(std::isinf(log_sum_exp(all_ninf)));
  CHECK(log_sum_exp(all_ninf) < 0);

  CHECK(log_sum_exp(std::log(0.25), std::log(0.75)) ==
        doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("clopper-pearson upper limits match independent oracle") {
  // k = 0 has the closed form 1 - (1 - conf)^(1/n).
  CHECK(binomial_upper_confidence(0, 100, 0.99) ==
        doctest::Approx(0.04500741397856405).epsilon(1e-12));
  CHECK(binomial_upper_confidence(5, 100, 0.99) ==
        doctest::Approx(0.12585173069767864).epsilon(1e-12));
  CHECK(binomial_upper_confidence(3, 2000, 0.99) ==
        doctest::Approx(0.0050137200071498005).epsilon(1e-12));
  CHECK(binomial_upper_confidence(100, 100, 0.99) == doctest::Approx(1.0));

  // Upper limit always dominates the point estimate and grows with k.
  Real prev = 0.0;
  for (std::uint64_t k = 0; k <= 50; k += 5) {
    const Real upper = binomial_upper_confidence(k, 50, 0.99);
    CHECK(upper >= static_cast<Real>(k) / 50.0);
    CHECK(upper >= prev);
    prev = upper;
  }
  CHECK_THROWS_AS(binomial_upper_confidence(5, 4, 0.99), std::invalid_argument);
  CHECK_THROWS_AS(binomial_upper_confidence(1, 4, 1.0), std::invalid_argument);
}

TEST_CASE("gauss-legendre rules integrate polynomials and smooth functions") {
  for (int n : {1, 2, 5, 16, 64}) {
    const QuadratureNodes rule = gauss_legendre(n);
    Real total = 0.0;
    for (Real w : rule.w) total += w;
    CHECK(total == doctest::Approx(2.0).epsilon(1e-13));
  }

  const QuadratureNodes rule = gauss_legendre(16);
  Real x2 = 0.0;
  for (std::size_t i = 0; i < rule.x.size(); ++i) {
    x2 += rule.w[i] * rule.x[i] * rule.x[i];
  }
  CHECK(x2 == doctest::Approx(2.0 / 3.0).epsilon(1e-14));

  // integral of cos over [0, 1] = sin(1)
  const QuadratureNodes mapped = map_to_interval(gauss_legendre(24), 0.0, 1.0);
  Real c = 0.0;
  for (std::size_t i = 0; i < mapped.x.size(); ++i) {
    c += mapped.w[i] * std::cos(mapped.x[i]);
  }
  CHECK(c == doctest::Approx(std::sin(1.0)).epsilon(1e-14));

  CHECK_THROWS_AS(gauss_legendre(0), std::invalid_argument);
  CHECK_THROWS_AS(map_to_interval(rule, 1.0, 1.0), std::invalid_argument);
}
