#include <doctest.h>

#include <cmath>
#include <numbers>
#include <thread>
#include <vector>

#include "dinikit/zeros.hpp"
#include "oracles.hpp"

using namespace dinikit;

TEST_CASE("tabulated Bessel zeros") {
  CHECK(bessel_zero(Order(0), 1) == doctest::Approx(2.404825557695773).epsilon(1e-13));
  CHECK(bessel_zero(Order(0), 2) == doctest::Approx(5.520078110286311).epsilon(1e-13));
  CHECK(bessel_zero(Order(1), 1) == doctest::Approx(3.831705970207512).epsilon(1e-13));
}

TEST_CASE("Bessel zeros against Boost") {
  for (double nu : {-0.9, -0.5, 0.0, 0.5, 1.0, 2.7, 10.0, 25.0}) {
    const ZeroTable t = zero_table(Order(nu), ZeroKind::bessel, 200);
    for (int n = 1; n <= 200; ++n) {
      CHECK(oracle::rel_err(t.values[n - 1], oracle::bessel_zero(nu, n)) < 1e-12);
    }
  }
}

TEST_CASE("Dini zeros against an independent bisection") {
  for (double nu : {-0.9, -0.3, 0.0, 1.0, 2.7, 10.0}) {
    for (int n = 1; n <= 30; ++n) {
      CHECK(oracle::rel_err(dini_zero(Order(nu), n), oracle::dini_zero(nu, n)) < 1e-11);
    }
  }
}

TEST_CASE("first Dini zeros for small orders") {
  CHECK(dini_zero(Order(0), 1) == doctest::Approx(1.2557837118).epsilon(1e-9));
  CHECK(dini_zero(Order(1), 1) == doctest::Approx(1.8411837813).epsilon(1e-9));
}

TEST_CASE("half-integer order zeros are odd multiples of pi/2") {
  const ZeroTable t = zero_table(Order(0.5), ZeroKind::dini, 50);
  for (int n = 1; n <= 50; ++n) {
    CHECK(std::fabs(t.values[n - 1] - (2 * n - 1) * std::numbers::pi / 2) < 1e-11);
  }
}

TEST_CASE("order -1/2 zeros solve cot x = x") {
  for (int n = 1; n <= 20; ++n) {
    CHECK(std::fabs(dini_zero(Order(-0.5), n) - oracle::cot_root(n)) < 1e-11);
  }
}

TEST_CASE("interlacing and table invariants") {
  for (double nu : {-0.7, 0.0, 3.0}) {
    const ZeroTable j = zero_table(Order(nu), ZeroKind::bessel, 100);
    const ZeroTable a = zero_table(Order(nu), ZeroKind::dini, 100);
    CHECK(a.values[0] < j.values[0]);
    for (int n = 1; n < 100; ++n) {
      CHECK(j.values[n - 1] < a.values[n]);
      CHECK(a.values[n] < j.values[n]);
    }
    CHECK(a.bracket_width <= 1e-12 * (1 + a.values.back()));
    CHECK(a.count == 100);
  }
}

TEST_CASE("tables are deterministic and prefix-stable") {
  const ZeroTable small = zero_table(Order(1.25), ZeroKind::dini, 5);
  const ZeroTable big = zero_table(Order(1.25), ZeroKind::dini, 800);
  for (int n = 0; n < 5; ++n) CHECK(small.values[n] == big.values[n]);
  const ZeroTable again = zero_table(Order(1.25), ZeroKind::dini, 800);
  CHECK(again.values == big.values);
}

TEST_CASE("concurrent table requests agree") {
  std::vector<std::vector<double>> results(8);
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([i, &results] {
      results[i] = shared_zero_table(Order(4.125), ZeroKind::dini, 300 + 50 * i)->values;
    });
  }
  for (auto& t : threads) t.join();
  for (int i = 1; i < 8; ++i) {
    for (int n = 0; n < 300; ++n) CHECK(results[i][n] == results[0][n]);
  }
}

TEST_CASE("zero index and order validation") {
  CHECK_THROWS_AS(bessel_zero(Order(0), 0), DomainError);
  CHECK_THROWS_AS(zero_table(Order(0), ZeroKind::dini, 0), DomainError);
  CHECK_THROWS_AS(zero_table(Order(0), ZeroKind::dini, kMaxTableSize + 1), DomainError);
}

TEST_CASE("McMahon guess is close for large n") {
  for (double nu : {0.0, 2.0}) {
    CHECK(std::fabs(mcmahon_guess(nu, 40) - oracle::bessel_zero(nu, 40)) < 1e-4);
  }
}

TEST_CASE("positivity domain") {
  const PositivityDomain d = positivity_domain(Order(0.5), 3);
  REQUIRE(d.intervals.size() == 3);
  CHECK(d.intervals[0].lo == 0.0);
  CHECK(d.intervals[0].hi == doctest::Approx(std::numbers::pi / 2));
  CHECK(d.intervals[1].lo == doctest::Approx(3 * std::numbers::pi / 2));
  CHECK(d.component_of(0.3) == 0);
  CHECK(d.component_of(5.0) == 1);
  CHECK(!d.component_of(3.0).has_value());
}

TEST_CASE("zero monotonicity in the order") {
  const std::vector<Order> grid{Order(-0.9), Order(-0.5), Order(0), Order(0.5),
                                Order(1), Order(2), Order(5)};
  const PropertyReport r = nu_zero_monotone_check(grid, 10);
  CHECK(r.verdict == Verdict::pass);
  CHECK(r.min_margin > 0.0);
  const PropertyReport b = first_zero_bound_check(grid);
  CHECK(b.verdict == Verdict::pass);
}
