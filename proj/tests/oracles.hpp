#pragma once

// Reference implementations used only by the tests. Each one is independent
// of the library code paths it is compared against.

#include <cmath>
#include <functional>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/tools/roots.hpp>

namespace oracle {

inline double j(double nu, double x) { return boost::math::cyl_bessel_j(nu, x); }

inline double dini(double nu, double x) { return j(nu, x) - x * j(nu + 1.0, x); }

inline double bessel_zero(double nu, int n) {
  return boost::math::cyl_bessel_j_zero(nu, n);
}

/// Plain bisection to full double precision.
inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double fm = f(mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// n-th positive root of cot x = x, which lies in ((n-1) pi, (n-1) pi + pi/2).
inline double cot_root(int n) {
  const double pi = 3.14159265358979323846;
  const double lo = (n - 1) * pi + 1e-12;
  const double hi = (n - 1) * pi + pi / 2;
  return bisect([](double x) { return std::cos(x) - x * std::sin(x); }, lo, hi);
}

/// n-th positive zero of J_nu - x J_{nu+1}, bracketed by the Bessel zeros.
inline double dini_zero(double nu, int n) {
  const double lo = n == 1 ? 1e-9 : bessel_zero(nu, n - 1);
  const double hi = bessel_zero(nu, n);
  return bisect([nu](double x) { return dini(nu, x); }, lo, hi);
}

/// Plain binary64 power series of J_nu, 30 terms.
inline double series_j(double nu, double x) {
  double term = std::pow(x / 2.0, nu) / std::tgamma(nu + 1.0);
  double sum = term;
  for (int k = 1; k < 30; ++k) {
    term *= -(x * x / 4.0) / (k * (nu + k));
    sum += term;
  }
  return sum;
}

inline double rel_err(double got, double want) {
  return std::fabs(got - want) / std::max(std::fabs(want), 1e-300);
}

}  // namespace oracle
