#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dinikit/core_eval.hpp"
#include "oracles.hpp"

using namespace dinikit;

TEST_CASE("order validation") {
  CHECK_THROWS_AS(Order(-1.0), DomainError);
  CHECK_THROWS_AS(Order(-2.5), DomainError);
  CHECK_THROWS_AS(Order(std::nan("")), DomainError);
  CHECK(Order(-0.999).value() == doctest::Approx(-0.999));
  CHECK(Order(0.5) == Order(0.5));
  CHECK(Order(0.5) < Order(1.0));
}

TEST_CASE("eval policy validation") {
  EvalPolicy p;
  CHECK_NOTHROW(p.validate());
  p.max_terms = 0;
  CHECK_THROWS_AS(p.validate(), DomainError);
}

TEST_CASE("tabulated Bessel values") {
  // Abramowitz and Stegun, table 9.1.
  CHECK(bessel_j(Order(0), 1.0) == doctest::Approx(0.7651976865579666).epsilon(1e-14));
  CHECK(bessel_j(Order(1), 1.0) == doctest::Approx(0.4400505857449335).epsilon(1e-14));
  CHECK(bessel_j(Order(0), 10.0) == doctest::Approx(-0.2459357644513483).epsilon(1e-13));
  CHECK(dini(Order(0), 1.0) == doctest::Approx(0.3251471008130331).epsilon(1e-13));
  // d_1(1) = J_1(1) - J_2(1) + ... reduces to J_0(1) - J_1(1) at x = 1.
  CHECK(dini(Order(1), 1.0) == doctest::Approx(dini(Order(0), 1.0)).epsilon(1e-13));
}

TEST_CASE("Bessel J against Boost on random arguments") {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> nu_d(-0.95, 25.0);
  std::uniform_real_distribution<double> x_d(0.01, 150.0);
  double worst = 0.0;
  for (int i = 0; i < 3000; ++i) {
    const double nu = nu_d(rng);
    const double x = x_d(rng);
    const double want = oracle::j(nu, x);
    const double got = bessel_j(Order(nu), x);
    // Absolute floor near zeros of J_nu, scaled by the envelope sqrt(2/(pi x)).
    const double scale = std::max(std::fabs(want), 1e-3 * std::sqrt(2.0 / (3.14159 * x)));
    worst = std::max(worst, std::fabs(got - want) / scale);
  }
  CHECK(worst < 1e-11);
}

TEST_CASE("series oracle agreement for small arguments") {
  for (double nu : {-0.7, 0.0, 0.3, 2.0, 7.5}) {
    for (double x : {0.05, 0.5, 1.0, 3.0}) {
      CHECK(oracle::rel_err(bessel_j(Order(nu), x), oracle::series_j(nu, x)) < 1e-13);
    }
  }
}

TEST_CASE("half-integer closed forms") {
  const Order h(0.5);
  const Order mh(-0.5);
  for (int i = 1; i <= 100; ++i) {
    const double x = 0.3 * i;
    const double c = std::sqrt(2.0 / (std::numbers::pi * x));
    // d_{1/2} = J_{1/2} - x J_{3/2} = c (sin x - (sin x - x cos x)) = c x cos x.
    const double d_half = c * x * std::cos(x);
    const double d_mhalf = c * (std::cos(x) - x * std::sin(x));
    CHECK(oracle::rel_err(dini(h, x), d_half) < 1e-12);
    CHECK(oracle::rel_err(dini(mh, x), d_mhalf) < 1e-12);
    const GPair g = g_pair(h, x);
    CHECK(oracle::rel_err(g.g, std::sin(x)) < 1e-12);
    CHECK(oracle::rel_err(g.g_prime, std::cos(x)) < 1e-12);
  }
  const HalfIntegerValues v = halfint_oracle(h, 1.0);
  CHECK(v.g == doctest::Approx(std::sin(1.0)));
  CHECK_THROWS_AS(halfint_oracle(Order(1.0), 1.0), DomainError);
}

TEST_CASE("dini at the origin") {
  CHECK(dini(Order(0), 0.0) == 1.0);
  CHECK(dini(Order(2), 0.0) == 0.0);
  CHECK_THROWS_AS(dini(Order(-0.5), 0.0), DomainError);
  const GPair g = g_pair(Order(-0.5), 0.0);
  CHECK(g.g == 0.0);
  CHECK(g.g_prime == 1.0);
}

TEST_CASE("derivatives match centered differences") {
  const double h = 1e-5;
  for (double nu : {-0.5, 0.0, 1.0, 3.3}) {
    for (double x : {0.4, 1.7, 5.2, 40.0}) {
      const Order o(nu);
      const double fd_d = (dini(o, x + h) - dini(o, x - h)) / (2 * h);
      const double fd_j = (bessel_j(o, x + h) - bessel_j(o, x - h)) / (2 * h);
      CHECK(std::fabs(dini_prime(o, x) - fd_d) < 1e-8);
      CHECK(std::fabs(bessel_j_prime(o, x) - fd_j) < 1e-8);
      const double fd_g = (g_pair(o, x + h).g - g_pair(o, x - h).g) / (2 * h);
      CHECK(std::fabs(g_pair(o, x).g_prime - fd_g) < 1e-6 * std::max(1.0, std::fabs(fd_g)));
    }
  }
}

TEST_CASE("scaled log derivative") {
  // x d'/d = 1/2 - x tan x for nu = 1/2.
  for (double x : {0.1, 0.7, 1.3}) {
    CHECK(dini_log_derivative_scaled(Order(0.5), x) ==
          doctest::Approx(0.5 - x * std::tan(x)).epsilon(1e-11));
  }
}

TEST_CASE("gamma and leading prefactor") {
  CHECK(dinikit::gamma(5.0) == doctest::Approx(24.0));
  CHECK(dinikit::gamma(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)));
  CHECK(leading_prefactor(1.0, 1.0) == doctest::Approx(0.5));
}
