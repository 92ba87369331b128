#include "dinikit/core_eval.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "double_double.hpp"

namespace dinikit {

namespace {

using detail::DoubleDouble;

struct ScaledPair {
  // J_nu(x) = leading_prefactor(nu, x) * s,
  // J_{nu+1}(x) = leading_prefactor(nu + 1, x) * s_next.
  double s;
  double s_next;
};

std::string describe(const char* what, double nu, double x) {
  std::ostringstream os;
  os.precision(17);
  os << what << " (nu=" << nu << ", x=" << x << ")";
  return os.str();
}

/// Sum_k (-x^2/4)^k / (k! (nu+1)_k), the power series of J_nu(x) with the
/// leading factor x^nu / (2^nu Gamma(nu+1)) removed. Terms and partial sums
/// are carried in double-double arithmetic.
double normalized_series(double nu, double x, const EvalPolicy& policy) {
  const DoubleDouble y = detail::two_prod(x, x) * DoubleDouble(0.25);
  DoubleDouble term(1.0);
  DoubleDouble sum(1.0);
  for (int k = 0; k < policy.max_terms; ++k) {
    const double kp1 = static_cast<double>(k + 1);
    const DoubleDouble denom = detail::two_sum(kp1, nu) * DoubleDouble(kp1);
    term = -(term * y) / denom;
    sum = sum + term;
    // Once the term ratio drops below one the alternating tail is bounded by
    // the first omitted term.
    const bool decreasing = y.hi < denom.hi;
    const double limit =
        std::fmax(policy.abs_tol, policy.rel_tol * detail::abs_hi(sum));
    if (decreasing && detail::abs_hi(term) < limit) {
      return sum.to_double();
    }
  }
  throw TruncationError(describe("power series did not converge", nu, x),
                        detail::abs_hi(term));
}

/// Hankel asymptotic expansion of J_nu(x) for large x and |nu| <= 3/2.
double hankel_j(double nu, double x, const EvalPolicy& policy) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0;  // a_k(nu) / x^k
  double p = 1.0;
  double q = 0.0;
  double previous = INFINITY;
  for (int k = 0; k < policy.max_terms; ++k) {
    const double odd = 2.0 * k + 1.0;
    term *= (mu - odd * odd) / ((k + 1.0) * 8.0 * x);
    const int idx = k + 1;
    const double sign = ((idx / 2) % 2 == 0) ? 1.0 : -1.0;
    if (idx % 2 == 0) {
      p += sign * term;
    } else {
      q += sign * term;
    }
    const double mag = std::fabs(term);
    if (mag < policy.rel_tol * 1e-2 || term == 0.0) {
      break;
    }
    if (mag > previous) {
      throw TruncationError(describe("Hankel expansion diverged", nu, x), mag);
    }
    previous = mag;
  }
  const double phase = (0.5 * nu + 0.25) * std::numbers::pi;
  const double cp = std::cos(phase);
  const double sp = std::sin(phase);
  const double cx = std::cos(x);
  const double sx = std::sin(x);
  const double cos_chi = cx * cp + sx * sp;
  const double sin_chi = sx * cp - cx * sp;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * cos_chi - q * sin_chi);
}

bool use_hankel(double nu, double x) {
  return x > detail::kSeriesLimit && x > 2.0 * (nu + 2.0);
}

/// J_nu, J_{nu+1} for large x: Hankel at a reduced order in (-1/2, 1/2]
/// followed by forward recurrence, which is stable while the order is below x.
detail::BesselPair hankel_pair(double nu, double x, const EvalPolicy& policy) {
  if (nu <= 0.5) {
    return {hankel_j(nu, x, policy), hankel_j(nu + 1.0, x, policy)};
  }
  const double steps = std::ceil(nu - 0.5);
  const double base = nu - steps;
  double a = hankel_j(base, x, policy);
  double b = hankel_j(base + 1.0, x, policy);
  const int n = static_cast<int>(steps);
  for (int i = 1; i <= n; ++i) {
    const double c = 2.0 * (base + i) / x * b - a;
    a = b;
    b = c;
  }
  return {a, b};
}

ScaledPair scaled_pair(double nu, double x, const EvalPolicy& policy) {
  if (use_hankel(nu, x)) {
    const detail::BesselPair p = hankel_pair(nu, x, policy);
    return {p.j / leading_prefactor(nu, x),
            p.j_next / leading_prefactor(nu + 1.0, x)};
  }
  return {normalized_series(nu, x, policy),
          normalized_series(nu + 1.0, x, policy)};
}

void check_argument(double nu, double x, bool allow_zero) {
  if (!std::isfinite(x) || x < 0.0 || (!allow_zero && x == 0.0)) {
    throw DomainError(describe("argument outside domain", nu, x));
  }
}

}  // namespace

Order::Order(double nu) : nu_(nu) {
  if (!std::isfinite(nu) || nu <= -1.0) {
    std::ostringstream os;
    os << "order must satisfy nu > -1, got " << nu;
    throw DomainError(os.str());
  }
}

void EvalPolicy::validate() const {
  if (!(std::isfinite(rel_tol) && rel_tol > 0.0) ||
      !(std::isfinite(abs_tol) && abs_tol > 0.0) || max_terms < 8) {
    throw DomainError("invalid evaluation policy");
  }
}

double gamma(double x) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw DomainError(describe("gamma requires x > 0", 0.0, x));
  }
  return std::tgamma(x);
}

double leading_prefactor(double nu, double x) {
  if (nu == 0.0) {
    return 1.0;
  }
  return std::exp(nu * std::log(0.5 * x) - std::lgamma(nu + 1.0));
}

namespace detail {

BesselPair bessel_pair(double nu, double x, const EvalPolicy& policy) {
  if (use_hankel(nu, x)) {
    return hankel_pair(nu, x, policy);
  }
  const double lp = leading_prefactor(nu, x);
  return {lp * normalized_series(nu, x, policy),
          lp * (0.5 * x / (nu + 1.0)) * normalized_series(nu + 1.0, x, policy)};
}

}  // namespace detail

double bessel_j(Order order, double x, const EvalPolicy& policy) {
  policy.validate();
  const double nu = order.value();
  check_argument(nu, x, nu >= 0.0);
  if (x == 0.0) {
    return nu == 0.0 ? 1.0 : 0.0;
  }
  if (use_hankel(nu, x)) {
    return hankel_pair(nu, x, policy).j;
  }
  return leading_prefactor(nu, x) * normalized_series(nu, x, policy);
}

double bessel_j_prime(Order order, double x, const EvalPolicy& policy) {
  policy.validate();
  const double nu = order.value();
  check_argument(nu, x, false);
  const detail::BesselPair p = detail::bessel_pair(nu, x, policy);
  return (nu * p.j - x * p.j_next) / x;
}

double dini(Order order, double x, const EvalPolicy& policy) {
  policy.validate();
  const double nu = order.value();
  check_argument(nu, x, nu >= 0.0);
  if (x == 0.0) {
    return nu == 0.0 ? 1.0 : 0.0;
  }
  const detail::BesselPair p = detail::bessel_pair(nu, x, policy);
  return p.j - x * p.j_next;
}

double dini_prime(Order order, double x, const EvalPolicy& policy) {
  policy.validate();
  const double nu = order.value();
  check_argument(nu, x, false);
  const detail::BesselPair p = detail::bessel_pair(nu, x, policy);
  return (nu / x - x) * p.j + (nu - 1.0) * p.j_next;
}

double dini_log_derivative_scaled(Order order, double x,
                                  const EvalPolicy& policy) {
  policy.validate();
  const double nu = order.value();
  check_argument(nu, x, false);
  // Normalized values avoid overflow of x^nu for small x and large |nu|.
  const ScaledPair s = scaled_pair(nu, x, policy);
  const double r = 0.5 * x / (nu + 1.0);  // lp(nu+1) / lp(nu)
  const double d = s.s - x * r * s.s_next;
  const double xdp = (nu - x * x) * s.s + (nu - 1.0) * x * r * s.s_next;
  return xdp / d;
}

GPair g_pair(Order order, double x, const EvalPolicy& policy) {
  policy.validate();
  const double nu = order.value();
  check_argument(nu, x, true);
  if (x == 0.0) {
    return {0.0, 1.0};
  }
  // g = x J_nu / lp(nu), g' = d_nu / lp(nu) with lp(nu) = x^nu/(2^nu G(nu+1)).
  const ScaledPair s = scaled_pair(nu, x, policy);
  const double r = 0.5 * x / (nu + 1.0);
  return {x * s.s, s.s - x * r * s.s_next};
}

HalfIntegerValues halfint_oracle(Order order, double x) {
  const double nu = order.value();
  if (nu != 0.5 && nu != -0.5) {
    throw DomainError("closed forms exist only for nu = +1/2 and nu = -1/2");
  }
  check_argument(nu, x, false);
  const double c = std::cos(x);
  const double s = std::sin(x);
  const double root = std::sqrt(2.0 / (std::numbers::pi * x));
  if (nu == 0.5) {
    return {root * s, root * x * c, s, c};
  }
  return {root * c, root * (c - x * s), x * c, c - x * s};
}

}  // namespace dinikit
