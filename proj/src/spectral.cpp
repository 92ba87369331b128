#include "dinikit/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dinikit/kahan.hpp"
#include "dinikit/zeros.hpp"

namespace dinikit {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct HeadSum {
  double sum;
  double error;  // zero uncertainty plus summation rounding
};

/// sum_{n<=count} v_n^{-2m}. Each zero is known to within its final bracket
/// width, which bounds the perturbation of v^{-2m}.
HeadSum inverse_power_head(const ZeroTable& t, int count, int m) {
  KahanSum sum;
  KahanSum error;
  const double p = -2.0 * m;
  for (int i = 0; i < count; ++i) {
    const double v = t.values[i];
    const double term = std::pow(v, p);
    sum += term;
    const double rel = std::max(t.widths[i], 4.0 * kEps * v) / v;
    error += term * std::expm1(2.0 * m * rel * 1.01);
  }
  const double s = sum.value();
  return {s, error.value() + 8.0 * kEps * s};
}

void check_m(int m) {
  if (m < 1) throw DomainError("Rayleigh sum index m must be positive");
}

}  // namespace

double bessel_rayleigh_sum(Order order, int m) {
  check_m(m);
  const double nu = order.value();
  std::vector<double> sigma(static_cast<size_t>(m) + 1, 0.0);
  sigma[1] = 0.25 / (nu + 1.0);
  for (int k = 2; k <= m; ++k) {
    KahanSum acc;
    for (int i = 1; i < k; ++i) acc += sigma[i] * sigma[k - i];
    sigma[k] = acc.value() / (nu + k);
  }
  return sigma[m];
}

Enclosure dini_tail_enclosure(Order order, int m, int n_head) {
  check_m(m);
  if (n_head < 1) throw DomainError("tail enclosure needs at least one head term");
  const auto bessel = shared_zero_table(order, ZeroKind::bessel, n_head);
  const double sigma = bessel_rayleigh_sum(order, m);
  const HeadSum head = inverse_power_head(*bessel, n_head, m);
  // sum_{n>N} j_n^{-2m} <= tail <= j_N^{-2m} + sum_{n>N} j_n^{-2m}.
  const double rest = sigma - head.sum;
  const double err = head.error + 8.0 * kEps * sigma;
  const double jn = bessel->values[n_head - 1];
  const double jn_low = jn - std::max(bessel->widths[n_head - 1], 4.0 * kEps * jn);
  return {std::max(0.0, rest - err),
          std::max(0.0, rest + err) + std::pow(jn_low, -2.0 * m)};
}

ProductValue weierstrass_product(Order order, double x, int n_factors) {
  const double nu = order.value();
  if (!std::isfinite(x) || x < 0.0) {
    throw DomainError("product requires x >= 0");
  }
  if (n_factors < 1 || n_factors >= kMaxTableSize) {
    throw DomainError("factor count out of range");
  }
  if (x == 0.0) {
    if (nu < 0.0) throw DomainError("product is singular at x = 0 for nu < 0");
    return {nu == 0.0 ? 1.0 : 0.0, 0.0};
  }
  const auto zeros = shared_zero_table(order, ZeroKind::dini, n_factors + 1);
  double product = leading_prefactor(nu, x);
  for (int n = 0; n < n_factors; ++n) {
    const double t = x / zeros->values[n];
    product *= (1.0 - t) * (1.0 + t);
  }
  const double next = zeros->values[n_factors];
  if (!(x < next)) {
    return {product, std::nullopt};
  }
  const double u = dini_tail_enclosure(order, 1, n_factors).upper;
  const double r = (x / next) * (x / next);
  return {product, std::expm1(x * x * u / (1.0 - r))};
}

double logderiv_series(Order order, double x, int n_terms) {
  if (!std::isfinite(x)) throw DomainError("argument must be finite");
  if (n_terms < 1 || n_terms >= kMaxTableSize) {
    throw DomainError("term count out of range");
  }
  const auto zeros = shared_zero_table(order, ZeroKind::dini, n_terms + 1);
  const double ax = std::fabs(x);
  KahanSum sum;
  for (int n = 0; n < n_terms; ++n) {
    const double a = zeros->values[n];
    const double den = (a - ax) * (a + ax);
    if (den == 0.0) {
      std::ostringstream os;
      os << "pole at alpha_{nu," << n + 1 << "}";
      throw PoleError(os.str(), n + 1);
    }
    sum += 2.0 * x / den;
  }
  const double next = zeros->values[n_terms];
  if (ax < next) {
    // alpha^-2 <= (alpha^2 - x^2)^-1 <= alpha^-2 / (1 - x^2/alpha_{N+1}^2).
    const Enclosure tail = dini_tail_enclosure(order, 1, n_terms);
    const double r = (ax / next) * (ax / next);
    const double mid = 0.5 * (tail.lower + tail.upper / (1.0 - r));
    sum += 2.0 * x * mid;
  }
  return -sum.value();
}

double eta2_exact(Order order) { return 0.75 / (order.value() + 1.0); }

RayleighEnclosure rayleigh_enclosure(Order order, int m, double width) {
  check_m(m);
  if (!(width > 0.0) || !std::isfinite(width)) {
    throw DomainError("enclosure width must be positive");
  }
  double best = std::numeric_limits<double>::infinity();
  for (int n = 32;; n = std::min(2 * n, kMaxTableSize - 1)) {
    const auto zeros = shared_zero_table(order, ZeroKind::dini, n);
    const HeadSum head = inverse_power_head(*zeros, n, m);
    const Enclosure tail = dini_tail_enclosure(order, m, n);
    RayleighEnclosure e{order, m, head.sum - head.error + tail.lower,
                        head.sum + head.error + tail.upper, n};
    e.lower = std::max(e.lower, 0.0);
    if (e.width() <= width) return e;
    // Stop once doubling the head no longer helps: the floor is set by the
    // accuracy of the zeros themselves.
    const bool stalled = e.width() > 0.75 * best;
    best = std::min(best, e.width());
    if (n >= kMaxTableSize - 1 || stalled) {
      std::ostringstream os;
      os.precision(3);
      os << "enclosure width " << width << " unreachable; best " << best;
      throw EnclosureError(os.str(), best);
    }
  }
}

PowerSeriesValue logderiv_power_series(Order order, double x, int m_max) {
  if (m_max < 1 || m_max > 200) throw DomainError("m_max must lie in [1, 200]");
  const double alpha1 = dini_zero(order, 1);
  if (!std::isfinite(x) || !(std::fabs(x) < alpha1)) {
    throw DomainError("power series requires |x| < alpha_{nu,1}");
  }
  PowerSeriesValue out{order.value(), {}, {}, 0.0};
  const double x2 = x * x;
  KahanSum series;
  KahanSum radius_sum;
  double x_power = 1.0;
  double last_upper = 0.0;
  for (int m = 1; m <= m_max; ++m) {
    const double scale = std::pow(alpha1, -2.0 * m);
    const double rel = m == 1 ? 1e-8 : 1e-9;
    const RayleighEnclosure e = rayleigh_enclosure(order, m, rel * scale);
    x_power *= x2;
    out.coefficients.push_back(e.midpoint());
    out.coefficient_radius.push_back(0.5 * e.width());
    series += e.midpoint() * x_power;
    radius_sum += 0.5 * e.width() * x_power;
    last_upper = e.upper;
  }
  // eta_{2m} <= alpha_1^{-2(m-M)} eta_{2M} for m > M: geometric tail.
  const double r = x2 / (alpha1 * alpha1);
  const double tail = 2.0 * last_upper * x_power * r / (1.0 - r);
  out.value = order.value() - 2.0 * series.value();
  out.remainder_bound = 2.0 * radius_sum.value() + tail;
  return out;
}

}  // namespace dinikit
