#pragma once

#include <cmath>
#include <limits>

namespace dinikit::detail {

struct RootResult {
  double root;
  double bracket_width;  // width of the final sign-change bracket
  int evaluations;
};

/// Brent's zeroin on a sign-change bracket [a, b] with fa = f(a), fb = f(b)
/// of opposite signs (or one of them zero). Stops when the bracket containing
/// the root is narrower than tol (plus a few ulps of the root).
template <class F>
RootResult brent_root(F&& f, double a, double b, double fa, double fb,
                      double tol, int max_evals = 200) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (fa == 0.0) return {a, 0.0, 0};
  if (fb == 0.0) return {b, 0.0, 0};
  double c = a;
  double fc = fa;
  double d = b - a;
  double e = d;
  int evals = 0;
  for (;;) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * eps * std::fabs(b) + 0.5 * tol;
    const double xm = 0.5 * (c - b);
    if (std::fabs(xm) <= tol1 || fb == 0.0 || evals >= max_evals) {
      return {b, fb == 0.0 ? 0.0 : std::fabs(c - b), evals};
    }
    if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
      const double s = fb / fa;
      double p;
      double q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) {
        q = -q;
      } else {
        p = -p;
      }
      if (2.0 * p < std::fmin(3.0 * xm * q - std::fabs(tol1 * q),
                              std::fabs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::fabs(d) > tol1 ? d : std::copysign(tol1, xm);
    fb = f(b);
    ++evals;
  }
}

}  // namespace dinikit::detail
