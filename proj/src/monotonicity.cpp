#include "dinikit/monotonicity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "dinikit/kahan.hpp"
#include "dinikit/spectral.hpp"
#include "dinikit/zeros.hpp"

namespace dinikit {

namespace {

using TablePtr = std::shared_ptr<const ZeroTable>;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

TablePtr dini_zeros(Order order, int n_terms) {
  if (n_terms < 1 || n_terms >= kMaxTableSize) {
    throw DomainError("term count out of range");
  }
  return shared_zero_table(order, ZeroKind::dini, n_terms + 1);
}

void check_square_domain(Order nu, double x) {
  const double a1 = dini_zero(nu, 1);
  if (!std::isfinite(x) || x < 0.0 || !(x < a1 * a1)) {
    throw DomainError("argument must lie in [0, alpha_{nu,1}^2), got " + num(x));
  }
}

void check_order_pair(Order mu, Order nu) {
  if (mu < nu) throw DomainError("requires mu >= nu");
}

double factorial(int m) {
  double f = 1.0;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

/// 2^nu Gamma(nu + 1).
double normalizer(double nu) {
  return std::exp(nu * std::numbers::ln2 + std::lgamma(nu + 1.0));
}

/// y^{(k)}, k = 0..m_max, for y' = h y, from y(x) and h^{(i)}(x).
std::vector<double> leibniz(double y0, const std::vector<double>& h, int m_max) {
  std::vector<double> y(static_cast<size_t>(m_max) + 1, 0.0);
  y[0] = y0;
  for (int k = 0; k < m_max; ++k) {
    KahanSum acc;
    double binom = 1.0;  // C(k, i)
    for (int i = 0; i <= k; ++i) {
      acc += binom * h[i] * y[k - i];
      binom = binom * (k - i) / (i + 1);
    }
    y[k + 1] = acc.value();
  }
  return y;
}

/// Index of the positivity-domain component holding x (0 counts as the
/// closure point of the first component).
int locate_component(const PositivityDomain& domain, double x) {
  if (x == 0.0) return 0;
  const auto k = domain.component_of(x);
  if (!k) {
    throw DomainError("point " + num(x) +
                      " is not in the positivity domain of d_nu");
  }
  return *k;
}

PositivityDomain domain_covering(Order nu, double x_max) {
  const int k = static_cast<int>(std::floor(x_max / (2.0 * std::numbers::pi))) + 2;
  return positivity_domain(nu, k);
}

int common_component(Order nu, double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b) || a < 0.0 || b < 0.0) {
    throw DomainError("points must be finite and nonnegative");
  }
  const PositivityDomain domain = domain_covering(nu, std::max(a, b));
  const int ka = locate_component(domain, a);
  const int kb = locate_component(domain, b);
  if (ka != kb) {
    throw DomainError("points " + num(a) + " and " + num(b) +
                      " lie in different components (" + std::to_string(ka) +
                      ", " + std::to_string(kb) +
                      ") of the positivity domain; g_nu' must stay positive "
                      "between them");
  }
  return ka;
}

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) break;
    }
    nodes[i] = z;
    weights[i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

}  // namespace

std::vector<double> grid_points(const GridSpec& grid) {
  if (grid.points < 1 || !std::isfinite(grid.lo) || !std::isfinite(grid.hi) ||
      grid.hi < grid.lo) {
    throw DomainError("invalid grid");
  }
  std::vector<double> xs;
  xs.reserve(grid.points);
  if (grid.points == 1) {
    xs.push_back(grid.lo);
    return xs;
  }
  for (int i = 0; i < grid.points; ++i) {
    xs.push_back(i + 1 == grid.points
                     ? grid.hi
                     : grid.lo + (grid.hi - grid.lo) * i / (grid.points - 1));
  }
  return xs;
}

SeriesTerm f_derivative(Order mu, Order nu, double x, int m, int n_terms) {
  check_order_pair(mu, nu);
  check_square_domain(nu, x);
  if (m < 0) throw DomainError("derivative order must be nonnegative");
  const TablePtr zn = dini_zeros(nu, n_terms);
  const TablePtr zm = dini_zeros(mu, n_terms);
  const double fact = factorial(m);
  const double p = -(m + 1.0);
  KahanSum head;
  for (int n = 0; n < n_terms; ++n) {
    const double an = zn->values[n];
    const double am = zm->values[n];
    if (m == 0) {
      head += 1.0 / (an * an - x) - 1.0 / (am * am - x);
    } else {
      head += fact * (std::pow(an * an - x, p) - std::pow(am * am - x, p));
    }
  }
  // Paired terms are positive and dominated by the nu-terms, so the omitted
  // part is bounded by the nu tail of sum (alpha^2 - x)^{-(m+1)}.
  const double next = zn->values[n_terms];
  const double r = x / (next * next);
  SeriesTerm out{0.0, 0.0, 0.0};
  if (m == 0) {
    // sum_n [1/(a_nu^2-x) - 1/(a_mu^2-x)] =
    //   sum_n (a_nu^-2 - a_mu^-2) + x sum_n [a_nu^-2/(a_nu^2-x) - (same, mu)].
    // The first tail decays like n^-3 and is estimated by Euler-Maclaurin on
    // alpha_n ~ alpha_N + (n - N) pi; the second is bounded.
    const double aN = zn->values[n_terms - 1];
    const double amN = zm->values[n_terms - 1];
    const double last = 1.0 / (aN * aN) - 1.0 / (amN * amN);
    out.tail_estimate =
        last * (aN / (2.0 * std::numbers::pi) - 0.5 +
                std::numbers::pi / (4.0 * aN));
    out.tail_bound =
        x * dini_tail_enclosure(nu, 2, n_terms).upper / (1.0 - r);
    const double constant = 0.75 * (nu.value() - mu.value()) /
                            ((nu.value() + 1.0) * (mu.value() + 1.0));
    out.value = head.value() + out.tail_estimate + constant;
  } else {
    out.tail_bound = fact * dini_tail_enclosure(nu, m + 1, n_terms).upper /
                     std::pow(1.0 - r, m + 1.0);
    out.value = head.value();
  }
  return out;
}

double f_derivs(Order mu, Order nu, double x, int m, int n_terms) {
  return f_derivative(mu, nu, x, m, n_terms).value;
}

double g_ratio(Order mu, Order nu, double x) {
  check_order_pair(mu, nu);
  check_square_domain(nu, x);
  const double m = mu.value();
  const double n = nu.value();
  const double k = normalizer(n) / normalizer(m);
  if (x == 0.0) return k;
  const double t = std::sqrt(x);
  // x^{(nu-mu)/2} d_mu(t)/d_nu(t) = k g_mu'(t) / g_nu'(t).
  const double ratio = g_pair(mu, t).g_prime / g_pair(nu, t).g_prime;
  return k * std::exp(0.75 * x * (1.0 / (m + 1.0) - 1.0 / (n + 1.0))) * ratio;
}

std::vector<double> g_ratio_derivatives(Order mu, Order nu, double x,
                                        int m_max, int n_terms) {
  if (m_max < 0) throw DomainError("derivative order must be nonnegative");
  std::vector<double> h;
  for (int i = 0; i < m_max; ++i) h.push_back(f_derivs(mu, nu, x, i, n_terms));
  return leibniz(g_ratio(mu, nu, x), h, m_max);
}

std::vector<double> q_log_derivatives(Order nu, double x, int count,
                                      int n_terms) {
  check_square_domain(nu, x);
  const TablePtr z = dini_zeros(nu, n_terms);
  const double next = z->values[n_terms];
  const double r = x / (next * next);
  std::vector<double> out;
  for (int i = 0; i < count; ++i) {
    KahanSum head;
    double tail_mid;
    if (i == 0) {
      // sum_n [(a^2 - x)^{-1} - a^{-2}] = x sum_n a^{-2} (a^2 - x)^{-1}
      for (int n = 0; n < n_terms; ++n) {
        const double a2 = z->values[n] * z->values[n];
        head += x / (a2 * (a2 - x));
      }
      const Enclosure t = dini_tail_enclosure(nu, 2, n_terms);
      tail_mid = 0.5 * x * (t.lower + t.upper / (1.0 - r));
    } else {
      const double fact = factorial(i);
      for (int n = 0; n < n_terms; ++n) {
        const double a2 = z->values[n] * z->values[n];
        head += fact * std::pow(a2 - x, -(i + 1.0));
      }
      const Enclosure t = dini_tail_enclosure(nu, i + 1, n_terms);
      tail_mid = 0.5 * fact * (t.lower + t.upper / std::pow(1.0 - r, i + 1.0));
    }
    out.push_back(head.value() + tail_mid);
  }
  return out;
}

double q_fun(Order nu, double x, int m, int n_terms) {
  if (m < 0) throw DomainError("derivative order must be nonnegative");
  check_square_domain(nu, x);
  const double n = nu.value();
  // q = 2^nu G(nu+1) e^{-3x/(4(nu+1))} / g_nu'(sqrt x).
  const double value = x == 0.0
                           ? normalizer(n)
                           : normalizer(n) * std::exp(-0.75 * x / (n + 1.0)) /
                                 g_pair(nu, std::sqrt(x)).g_prime;
  if (m == 0) return value;
  return leibniz(value, q_log_derivatives(nu, x, m, n_terms), m)[m];
}

std::vector<double> q_derivatives(Order nu, double x, int m_max, int n_terms) {
  if (m_max < 0) throw DomainError("derivative order must be nonnegative");
  return leibniz(q_fun(nu, x, 0), q_log_derivatives(nu, x, m_max, n_terms),
                 m_max);
}

PropertyReport abs_monotone_report(MonotoneTarget target, Order mu, Order nu,
                                   const GridSpec& grid, int m_max,
                                   int n_terms) {
  const char* names[] = {"abs_monotone_f", "abs_monotone_g_ratio",
                         "abs_monotone_q"};
  ReportBuilder b(names[static_cast<int>(target)]);
  b.param("mu", mu.value()).param("nu", nu.value()).param("m_max", m_max);
  b.param("n_terms", n_terms).grid(grid);
  if (m_max < 0) throw DomainError("m_max must be nonnegative");
  if (target != MonotoneTarget::q) check_order_pair(mu, nu);
  for (const double x : grid_points(grid)) {
    std::vector<double> values;
    switch (target) {
      case MonotoneTarget::f:
        for (int m = 0; m <= m_max; ++m) {
          values.push_back(f_derivs(mu, nu, x, m, n_terms));
        }
        break;
      case MonotoneTarget::g_ratio:
        values = g_ratio_derivatives(mu, nu, x, m_max, n_terms);
        break;
      case MonotoneTarget::q:
        values = q_derivatives(nu, x, m_max, n_terms);
        break;
    }
    for (const double v : values) b.check(x, v, 0.0);
  }
  return std::move(b).finish();
}

PropertyReport bound_check(Order nu, const GridSpec& grid) {
  const double n = nu.value();
  const double a1 = dini_zero(nu, 1);
  const double j1 = bessel_zero(nu, 1);
  const std::vector<double> xs = grid_points(grid);
  for (const double x : xs) {
    if (!(x > 0.0 && x < a1)) {
      throw DomainError("bound check grid must lie in (0, alpha_{nu,1})");
    }
  }
  const double k6 = 0.75 / (n + 1.0);
  const double k7 = 0.25 / (n + 1.0);
  ReportBuilder dini_bound("dini_exponential_bound", 0.0);
  ReportBuilder bessel_bound("bessel_exponential_bound", 0.0);
  ReportBuilder ordering("bound_ordering", 0.0);
  for (auto* r : {&dini_bound, &bessel_bound, &ordering}) {
    r->param("nu", n).param("alpha1", a1).param("j1", j1).grid(grid);
  }
  for (const double x : xs) {
    const double lp = leading_prefactor(n, x);
    const GPair g = g_pair(nu, x);
    const double b6 = lp * std::exp(-k6 * x * x);
    const double b7 = lp * std::exp(-k7 * x * x);
    // d = lp g' and J = lp g / x, so relative margins avoid x^nu entirely.
    dini_bound.check_margin(x, 1.0 - g.g_prime * std::exp(k6 * x * x), b6,
                            lp * g.g_prime);
    bessel_bound.check_margin(x, 1.0 - (g.g / x) * std::exp(k7 * x * x), b7,
                              lp * g.g / x);
    ordering.check_margin(x, 1.0 - std::exp(-(k6 - k7) * x * x), b7, b6);
    ordering.check_margin(x, 1.0 - g.g_prime * std::exp(k7 * x * x), b7,
                          lp * g.g_prime);
  }
  const double x0 = *std::min_element(xs.begin(), xs.end());
  const double ratio = g_pair(nu, x0).g_prime * std::exp(k6 * x0 * x0);
  ReportBuilder b("exponential_bounds");
  b.param("nu", n).param("sharpness_x", x0).param("sharpness_ratio", ratio);
  b.grid(grid);
  b.add_child(std::move(dini_bound).finish());
  b.add_child(std::move(bessel_bound).finish());
  b.add_child(std::move(ordering).finish());
  return std::move(b).finish();
}

PropertyReport logderiv_bound_check(Order nu, const GridSpec& grid) {
  const double n = nu.value();
  const auto zeros = shared_zero_table(nu, ZeroKind::dini, 3);
  const double a1 = zeros->values[0];
  ReportBuilder b("logderiv_bound", 0.0);
  b.param("nu", n).param("alpha1", a1).grid(grid);
  for (const double x : grid_points(grid)) {
    if (!(x > 0.0 && x < a1)) {
      throw DomainError("log-derivative grid must lie in (0, alpha_{nu,1})");
    }
    const double v = dini_log_derivative_scaled(nu, x);
    b.check_margin(x, n - v, n, v);
    if (!(v < n)) b.violate(x, n, v);
  }
  const double probe = zeros->values[1] + 0.03 * (zeros->values[2] - zeros->values[1]);
  const double pv = dini_log_derivative_scaled(nu, probe);
  b.param("probe_x", probe).param("probe_value", pv);
  if (pv >= n) {
    b.note("bound fails in the second component: x d'/d = " + num(pv) +
           " >= nu at x = " + num(probe) + "; it holds on (0, alpha_{nu,1}) only");
  } else {
    b.note("probe at x = " + num(probe) + " in the second component gave " +
           num(pv) + " < nu");
  }
  return std::move(b).finish();
}

double log_gprime_first(Order nu, double x, int n_terms) {
  return logderiv_series(nu, x, n_terms);
}

double log_gprime_second(Order nu, double x, int n_terms) {
  const TablePtr z = dini_zeros(nu, n_terms);
  KahanSum sum;
  for (int n = 0; n < n_terms; ++n) {
    const double a = z->values[n];
    const double den = (a - x) * (a + x);
    if (den == 0.0) {
      throw PoleError("pole at alpha_{nu," + std::to_string(n + 1) + "}", n + 1);
    }
    sum += (a * a + x * x) / (den * den);
  }
  // Each omitted term exceeds alpha^-2, so adding a lower bound of the
  // alpha^-2 tail keeps the result an upper bound.
  sum += dini_tail_enclosure(nu, 1, n_terms).lower;
  return -2.0 * sum.value();
}

PropertyReport log_concavity_check(ConcavityTarget target, Order nu,
                                   int component_index, int grid_points,
                                   int n_terms) {
  const double n = nu.value();
  if (target == ConcavityTarget::dini && n < 0.0) {
    throw DomainError("log-concavity of d_nu is only asserted for nu >= 0");
  }
  if (component_index < 0 || grid_points < 1) {
    throw DomainError("invalid component index or grid size");
  }
  const PositivityDomain domain = positivity_domain(nu, component_index + 1);
  const OpenInterval iv = domain.intervals[component_index];
  ReportBuilder b(target == ConcavityTarget::dini ? "log_concave_dini"
                                                  : "log_concave_gprime",
                  0.0);
  b.param("nu", n).param("component", component_index).param("n_terms", n_terms);
  b.grid({iv.lo, iv.hi, grid_points});
  for (int i = 1; i <= grid_points; ++i) {
    const double x = iv.lo + (iv.hi - iv.lo) * i / (grid_points + 1);
    double v = log_gprime_second(nu, x, n_terms);
    if (target == ConcavityTarget::dini) v -= n / (x * x);
    b.check_margin(x, -v, 0.0, v);
    if (!(v < 0.0)) b.violate(x, 0.0, v);
  }
  return std::move(b).finish();
}

PropertyReport corput_check(Order nu, double a, double b) {
  const int component = common_component(nu, a, b);
  const double n = nu.value();
  const double c = normalizer(n);
  const GPair ga = g_pair(nu, a);
  const GPair gb = g_pair(nu, b);
  const double gap = std::fabs(a - b);
  const double lhs = std::fabs(ga.g - gb.g);
  const double rhs = gap * std::sqrt(ga.g_prime * gb.g_prime);

  // Same inequality written with J_nu and d_nu directly.
  auto scaled_j = [&](double x) {
    return x == 0.0 ? 0.0 : std::exp((1.0 - n) * std::log(x)) * bessel_j(nu, x);
  };
  auto scaled_d = [&](double x) {
    return x == 0.0 ? 1.0 / c : std::exp(-n * std::log(x)) * dini(nu, x);
  };
  const double lhs_j = std::fabs(scaled_j(a) - scaled_j(b));
  const double rhs_j = gap * std::sqrt(scaled_d(a) * scaled_d(b));
  const double margin = lhs - rhs;
  const double margin_j = lhs_j - rhs_j;

  ReportBuilder r("van_der_corput");
  r.param("nu", n).param("a", a).param("b", b).param("component", component);
  r.param("margin_bessel_form", margin_j).param("normalizer", c);
  r.grid({std::min(a, b), std::max(a, b), 2});
  r.check(a, lhs, rhs);
  if (std::fabs(margin - c * margin_j) > 1e-10 * std::max(1.0, lhs)) {
    r.violate(b, margin, c * margin_j);
    r.note("g-form and Bessel-form margins disagree");
  }
  return std::move(r).finish();
}

PropertyReport corput_chain_check(Order nu, double a, double b) {
  const int component = common_component(nu, a, b);
  ReportBuilder r("van_der_corput_chain");
  r.param("nu", nu.value()).param("a", a).param("b", b).param("component", component);
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  r.grid({lo, hi, 2});
  if (lo == hi) {
    r.check(lo, 0.0, 0.0);
    return std::move(r).finish();
  }
  std::vector<double> nodes;
  std::vector<double> weights;
  gauss_legendre(12, nodes, weights);
  constexpr int kPanels = 16;
  KahanSum integral;
  const double h = (hi - lo) / kPanels;
  for (int p = 0; p < kPanels; ++p) {
    const double mid = lo + (p + 0.5) * h;
    for (size_t i = 0; i < nodes.size(); ++i) {
      const double x = mid + 0.5 * h * nodes[i];
      integral += 0.5 * h * weights[i] * std::log(g_pair(nu, x).g_prime);
    }
  }
  const GPair gl = g_pair(nu, lo);
  const GPair gh = g_pair(nu, hi);
  const double mean_log = integral.value() / (hi - lo);
  const double log_mean = std::log((gh.g - gl.g) / (hi - lo));
  const double endpoint = 0.5 * (std::log(gl.g_prime) + std::log(gh.g_prime));
  r.param("log_mean_slope", log_mean).param("mean_log_derivative", mean_log);
  r.param("endpoint_average", endpoint);
  r.check(lo, log_mean, mean_log);
  r.check(hi, mean_log, endpoint);
  return std::move(r).finish();
}

PropertyReport trig_case_check(double a, double b) {
  const Order nu(-0.5);
  const int component = common_component(nu, a, b);
  auto weight = [](double x) { return std::cos(x) - x * std::sin(x); };
  auto printed_weight = [](double x) { return std::cos(x) - std::sin(x); };
  const double lhs = std::fabs(a * std::cos(a) - b * std::cos(b));
  const double rhs = std::fabs(a - b) * std::sqrt(weight(a) * weight(b));

  ReportBuilder r("trig_van_der_corput");
  r.param("a", a).param("b", b).param("component", component);
  r.grid({std::min(a, b), std::max(a, b), 2});
  r.check(a, lhs, rhs);

  const double r1 = dini_zero(nu, 1);
  r.param("first_zero", r1);
  r.note("zeros of d_{-1/2} solve cot x = x; first component is (0, " +
         num(r1) + "), not (0, pi/4)");
  const double wp = printed_weight(a) * printed_weight(b);
  if (wp < 0.0) {
    r.note("variant with weights (cos - sin): weight product " + num(wp) +
           " is negative, right side undefined");
  } else {
    const double rhs_p = std::fabs(a - b) * std::sqrt(wp);
    r.param("variant_rhs", rhs_p);
    r.note("variant with weights (cos - sin): lhs " + num(lhs) + ", rhs " +
           num(rhs_p) + (lhs >= rhs_p ? ", holds" : ", fails"));
  }
  return std::move(r).finish();
}

PropertyReport nu_monotone_check(Order nu, Order mu, const GridSpec& grid) {
  check_order_pair(mu, nu);
  const double n = nu.value();
  const double m = mu.value();
  const double a1 = dini_zero(nu, 1);
  const double k = normalizer(n) / normalizer(m);
  ReportBuilder gprime("gprime_increasing_in_nu", 0.0);
  ReportBuilder logderiv("logderiv_increasing_in_nu", 0.0);
  ReportBuilder ratio("dini_ratio_increasing_in_x", 0.0);
  for (auto* r : {&gprime, &logderiv, &ratio}) {
    r->param("nu", n).param("mu", m).grid(grid);
  }
  double prev_ratio = 0.0;
  bool first = true;
  for (const double x : grid_points(grid)) {
    if (!(x > 0.0 && x < a1)) {
      throw DomainError("grid must lie in (0, alpha_{nu,1})");
    }
    const double gm = g_pair(mu, x).g_prime;
    const double gn = g_pair(nu, x).g_prime;
    // x^{nu-mu} d_mu/d_nu = k g_mu'/g_nu'.
    gprime.check_margin(x, gm / gn - 1.0, k * gm / gn, k);
    const double lm = dini_log_derivative_scaled(mu, x) / x;
    const double ln = dini_log_derivative_scaled(nu, x) / x;
    logderiv.check(x, lm, ln);
    const double rx = k * std::exp((m - n) * std::log(x)) * gm / gn;
    if (!first) {
      ratio.check_margin(x, rx / prev_ratio - 1.0, rx, prev_ratio);
    }
    prev_ratio = rx;
    first = false;
  }
  ReportBuilder b("nu_monotone");
  b.param("nu", n).param("mu", m).grid(grid);
  b.add_child(std::move(gprime).finish());
  b.add_child(std::move(logderiv).finish());
  b.add_child(std::move(ratio).finish());
  return std::move(b).finish();
}

}  // namespace dinikit
