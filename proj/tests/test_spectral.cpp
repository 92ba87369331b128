#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dinikit/spectral.hpp"
#include "dinikit/zeros.hpp"
#include "oracles.hpp"

using namespace dinikit;

TEST_CASE("Bessel Rayleigh sums against zero sums") {
  for (double nu : {0.0, 1.5}) {
    // Direct sums over Boost zeros with an integral tail estimate.
    for (int m : {2, 3}) {
      double sum = 0.0;
      for (int n = 1; n <= 4000; ++n) sum += std::pow(oracle::bessel_zero(nu, n), -2.0 * m);
      CHECK(oracle::rel_err(bessel_rayleigh_sum(Order(nu), m), sum) < 1e-9);
    }
    CHECK(bessel_rayleigh_sum(Order(nu), 1) == doctest::Approx(0.25 / (nu + 1)));
    // sigma_4 = 1 / (16 (nu+1)^2 (nu+2)).
    CHECK(bessel_rayleigh_sum(Order(nu), 2) ==
          doctest::Approx(1.0 / (16 * (nu + 1) * (nu + 1) * (nu + 2))));
  }
}

TEST_CASE("tail enclosure brackets a long explicit sum") {
  const Order nu(0.0);
  const auto z = zero_table(nu, ZeroKind::dini, 20000);
  double tail = 0.0;
  for (int n = 19999; n >= 100; --n) tail += std::pow(z.values[n], -4.0);
  const Enclosure e = dini_tail_enclosure(nu, 2, 100);
  CHECK(e.lower <= tail);
  CHECK(tail <= e.upper);
}

TEST_CASE("eta_2 enclosures contain the closed form") {
  for (double nu : {-0.9, -0.5, 0.0, 0.5, 1.0, 2.0, 10.0}) {
    const RayleighEnclosure e = rayleigh_enclosure(Order(nu), 1, 1e-7);
    CHECK(e.width() <= 1e-7);
    CHECK(e.contains(0.75 / (nu + 1)));
    CHECK(eta2_exact(Order(nu)) == doctest::Approx(0.75 / (nu + 1)));
  }
}

TEST_CASE("higher sums for order 1/2") {
  // x tan x = sum_m 2 eta_{2m} x^{2m} with alpha_n = (2n-1) pi / 2:
  // eta_4 = 1/6 and eta_6 = 1/15.
  const RayleighEnclosure e4 = rayleigh_enclosure(Order(0.5), 2, 1e-9);
  const RayleighEnclosure e6 = rayleigh_enclosure(Order(0.5), 3, 1e-9);
  CHECK(std::fabs(e4.midpoint() - 1.0 / 6) < 1e-8);
  CHECK(std::fabs(e6.midpoint() - 1.0 / 15) < 1e-8);
}

TEST_CASE("unreachable enclosure width") {
  CHECK_THROWS_AS(rayleigh_enclosure(Order(0), 1, 1e-17), EnclosureError);
  CHECK_THROWS_AS(rayleigh_enclosure(Order(0), 0, 1e-3), DomainError);
}

TEST_CASE("product representation") {
  for (double nu : {-0.5, 0.0, 1.0}) {
    const double a3 = dini_zero(Order(nu), 3);
    for (int i = 1; i <= 10; ++i) {
      const double x = a3 * i / 11;
      const ProductValue p = weierstrass_product(Order(nu), x, 2000);
      REQUIRE(p.tail_bound.has_value());
      const double direct = oracle::dini(nu, x);
      CHECK(std::fabs(p.value - direct) <= std::max(1e-8, *p.tail_bound * std::fabs(p.value)));
    }
  }
  CHECK(weierstrass_product(Order(0), 0.0, 10).value == 1.0);
  CHECK_THROWS_AS(weierstrass_product(Order(-0.5), 0.0, 10), DomainError);
}

TEST_CASE("log-derivative series for order 1/2") {
  // g_{1/2}' = cos, so g''/g' = -tan.
  for (double x : {0.2, 1.0, 1.4, -0.9}) {
    CHECK(std::fabs(logderiv_series(Order(0.5), x, 2000) + std::tan(x)) < 1e-9);
  }
  CHECK_THROWS_AS(logderiv_series(Order(0.5), dini_zero(Order(0.5), 1), 10), PoleError);
}

TEST_CASE("power series of the scaled log-derivative") {
  const double edge = 0.8 * std::numbers::pi / 2;
  for (int i = -8; i <= 8; ++i) {
    const double x = edge * i / 8;
    const PowerSeriesValue s = logderiv_power_series(Order(0.5), x, 80);
    CHECK(std::fabs(s.value - (0.5 - x * std::tan(x))) < 1e-6);
  }
  const PowerSeriesValue s = logderiv_power_series(Order(0.5), 0.3, 5);
  CHECK(s.coefficients[0] == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(s.coefficients[1] == doctest::Approx(1.0 / 6).epsilon(1e-8));
  CHECK_THROWS_AS(logderiv_power_series(Order(0.5), 2.0, 5), DomainError);
}
