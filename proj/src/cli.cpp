#include "dinikit/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <future>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "dinikit/monotonicity.hpp"
#include "dinikit/spectral.hpp"
#include "dinikit/zeros.hpp"

namespace dinikit {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<Order> orders(const std::vector<double>& nus) {
  std::vector<Order> out;
  for (const double v : nus) out.emplace_back(v);
  return out;
}

std::string nu_label(double nu) { return "nu=" + fmt(nu); }

PropertyReport renamed(PropertyReport r, std::string name) {
  r.name = std::move(name);
  return r;
}

/// (0, alpha_1) sampled from 1e-3 (the sharpness point) to 0.99 alpha_1.
GridSpec first_component_grid(Order nu, int points) {
  return {1e-3, 0.99 * dini_zero(nu, 1), points};
}

GridSpec squared_grid(Order nu, int points) {
  const double a1 = dini_zero(nu, 1);
  return {0.0, 0.95 * a1 * a1, points};
}

std::vector<double> split_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw DomainError("not a number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

void write_csv_row(std::ostream& os, const std::vector<double>& values) {
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) os << ',';
    os << fmt(values[i]);
  }
  os << '\n';
}

void flatten_report(std::ostream& os, const PropertyReport& r,
                    const std::string& prefix) {
  const std::string path = prefix.empty() ? r.name : prefix + "/" + r.name;
  os << path << ',' << to_string(r.verdict) << ',' << fmt(r.min_margin) << ','
     << r.violations.size() << ',' << r.notes.size() << '\n';
  for (const auto& c : r.children) flatten_report(os, c, path);
}

bool any_failed(const std::map<std::string, PropertyReport>& reports) {
  return std::any_of(reports.begin(), reports.end(),
                     [](const auto& kv) { return !kv.second.passed(); });
}

}  // namespace

std::vector<FigureRow> figure_data(int fig, double x_max, int points) {
  if (fig != 1) throw DomainError("only figure 1 is available");
  if (!(x_max > 0.0) || !std::isfinite(x_max) || points < 2) {
    throw DomainError("figure needs x_max > 0 and at least 2 points");
  }
  const Order one(1.0);
  std::vector<FigureRow> rows;
  for (const double x : grid_points({0.0, x_max, points})) {
    rows.push_back({x, dini(one, x), 0.5 * x * std::exp(-0.375 * x * x)});
  }
  return rows;
}

std::string figure_csv(const std::vector<FigureRow>& rows) {
  std::ostringstream os;
  os << "x,d1,envelope\n";
  for (const auto& r : rows) write_csv_row(os, {r.x, r.d1, r.envelope});
  return os.str();
}

PropertyReport eta2_report(Order nu, double width) {
  const RayleighEnclosure e = rayleigh_enclosure(nu, 1, width);
  const double exact = eta2_exact(nu);
  ReportBuilder b("eta2_identity", 0.0);
  b.param("nu", nu.value()).param("closed_form", exact);
  b.param("lower", e.lower).param("upper", e.upper).param("width", e.width());
  b.param("n_used", e.n_used);
  b.check_margin(nu.value(), std::min(exact - e.lower, e.upper - exact), e.upper,
                 exact);
  return std::move(b).finish();
}

PropertyReport product_report(Order nu, int n_factors, int points, double floor) {
  if (points < 1) throw DomainError("need at least one point");
  const double a3 = dini_zero(nu, 3);
  ReportBuilder b("product_vs_series", 0.0);
  b.param("nu", nu.value()).param("n_factors", n_factors).param("floor", floor);
  b.grid({a3 / (points + 1), a3 * points / (points + 1), points});
  double worst = 0.0;
  for (int i = 1; i <= points; ++i) {
    const double x = a3 * i / (points + 1);
    const ProductValue p = weierstrass_product(nu, x, n_factors);
    const double direct = dini(nu, x);
    const double allowed =
        std::max(floor, p.tail_bound.value_or(INFINITY) * std::fabs(p.value));
    const double err = std::fabs(p.value - direct);
    worst = std::max(worst, err / allowed);
    b.check_margin(x, allowed - err, p.value, direct);
  }
  b.param("worst_error_ratio", worst);
  return std::move(b).finish();
}

PropertyReport power_series_report(Order nu, double fraction, int points,
                                   int m_max, double floor) {
  if (!(fraction > 0.0 && fraction < 1.0) || points < 2) {
    throw DomainError("power series report needs 0 < fraction < 1, points >= 2");
  }
  const double a1 = dini_zero(nu, 1);
  const double r = fraction * a1;
  ReportBuilder agree("series_vs_direct", 0.0);
  agree.param("nu", nu.value()).param("m_max", m_max).grid({-r, r, points});
  std::vector<double> coefficients;
  std::vector<double> radii;
  for (const double x : grid_points({-r, r, points})) {
    const PowerSeriesValue s = logderiv_power_series(nu, x, m_max);
    if (coefficients.empty()) {
      coefficients = s.coefficients;
      radii = s.coefficient_radius;
    }
    const double direct =
        x == 0.0 ? nu.value() : dini_log_derivative_scaled(nu, std::fabs(x));
    const double err = std::fabs(s.value - direct);
    agree.check_margin(x, s.remainder_bound + floor - err, s.value, direct);
  }
  ReportBuilder positive("coefficients_positive", 0.0);
  positive.param("nu", nu.value()).grid({1.0, static_cast<double>(m_max), m_max});
  for (size_t m = 0; m < coefficients.size(); ++m) {
    positive.check_margin(m + 1.0, coefficients[m] - radii[m], coefficients[m], 0.0);
    if (!(coefficients[m] - radii[m] > 0.0)) {
      positive.violate(m + 1.0, coefficients[m], 0.0);
    }
  }
  ReportBuilder b("power_series");
  b.param("nu", nu.value());
  b.add_child(std::move(agree).finish());
  b.add_child(std::move(positive).finish());
  return std::move(b).finish();
}

PropertyReport rayleigh_order_report(std::vector<double> nu_grid, int m_max) {
  if (nu_grid.size() < 2 || m_max < 1) {
    throw DomainError("need at least two orders and m_max >= 1");
  }
  std::sort(nu_grid.begin(), nu_grid.end());
  ReportBuilder b("rayleigh_decreasing_in_nu", 0.0);
  b.param("m_max", m_max).grid({nu_grid.front(), nu_grid.back(),
                                static_cast<int>(nu_grid.size())});
  for (int m = 1; m <= m_max; ++m) {
    std::optional<RayleighEnclosure> prev;
    for (const double v : nu_grid) {
      const Order nu(v);
      const double scale = std::pow(dini_zero(nu, 1), -2.0 * m);
      const RayleighEnclosure e = rayleigh_enclosure(nu, m, 1e-9 * scale);
      if (prev) {
        b.check_margin(v, prev->lower - e.upper, prev->lower, e.upper);
        if (!(prev->lower > e.upper)) b.violate(v, prev->lower, e.upper);
      }
      prev = e;
    }
  }
  return std::move(b).finish();
}

PropertyReport corput_pairs_report(Order nu, int pairs, std::uint64_t seed,
                                   int components, bool chain) {
  if (pairs < 1 || components < 1) throw DomainError("invalid pair sampling");
  const PositivityDomain domain = positivity_domain(nu, components);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ReportBuilder b(chain ? "corput_chain_pairs" : "corput_pairs");
  b.param("nu", nu.value()).param("pairs", pairs).param("components", components);
  for (int i = 0; i < pairs; ++i) {
    const OpenInterval iv = domain.intervals[i % components];
    const double span = iv.hi - iv.lo;
    const double a = iv.lo + span * (0.001 + 0.998 * unit(rng));
    const double c = iv.lo + span * (0.001 + 0.998 * unit(rng));
    const PropertyReport r = chain ? corput_chain_check(nu, a, c) : corput_check(nu, a, c);
    b.check_margin(a, r.min_margin, a, c);
    if (!r.passed()) b.violate(a, a, c);
    if (a != c && !(r.min_margin > 0.0)) b.violate(a, a, c);
  }
  // Equality case.
  const double mid = 0.5 * (domain.intervals[0].lo + domain.intervals[0].hi);
  const PropertyReport eq = corput_check(nu, mid, mid);
  b.param("equal_pair_margin", eq.min_margin);
  if (eq.min_margin != 0.0) b.violate(mid, eq.min_margin, 0.0);
  return std::move(b).finish();
}

void SuiteConfig::validate() const {
  if (nu_grid.empty()) throw DomainError("the nu grid is empty");
  for (const double v : nu_grid) (void)Order(v);
  for (const double m : mu_offsets) {
    if (!(m >= 0.0) || !std::isfinite(m)) {
      throw DomainError("mu offsets must be finite and nonnegative");
    }
  }
  if (mu_offsets.empty()) throw DomainError("the mu offsets are empty");
  if (grid_points < 2) throw DomainError("grid_points must be at least 2");
  if (corput_pairs < 1) throw DomainError("corput_pairs must be positive");
}

SuiteConfig suite_config_from_json(const nlohmann::json& j) {
  SuiteConfig c;
  if (!j.is_object()) throw DomainError("suite config must be a JSON object");
  try {
    if (j.contains("nu_grid")) c.nu_grid = j.at("nu_grid").get<std::vector<double>>();
    if (j.contains("mu_offsets")) {
      c.mu_offsets = j.at("mu_offsets").get<std::vector<double>>();
    }
    if (j.contains("grid_points")) c.grid_points = j.at("grid_points").get<int>();
    if (j.contains("corput_pairs")) c.corput_pairs = j.at("corput_pairs").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("bad suite config: ") + e.what());
  }
  return c;
}

nlohmann::json to_json(const SuiteConfig& c) {
  return {{"nu_grid", c.nu_grid},
          {"mu_offsets", c.mu_offsets},
          {"grid_points", c.grid_points},
          {"corput_pairs", c.corput_pairs},
          {"seed", c.seed}};
}

std::map<std::string, PropertyReport> report_suite(const SuiteConfig& config) {
  config.validate();
  const std::vector<Order> nus = orders(config.nu_grid);
  const int pts = config.grid_points;

  auto per_nu = [&](const std::string& name,
                    const std::function<std::vector<PropertyReport>(Order)>& fn) {
    std::vector<PropertyReport> parts;
    for (const Order nu : nus) {
      parts.push_back(combine(nu_label(nu.value()), fn(nu)));
    }
    return combine(name, std::move(parts));
  };
  auto seed_for = [&](size_t salt) { return config.seed + 7919 * salt; };
  auto corput_for = [&](Order nu, bool chain) {
    const auto idx = static_cast<size_t>(
        std::find(nus.begin(), nus.end(), nu) - nus.begin());
    return corput_pairs_report(nu, config.corput_pairs, seed_for(idx), 3, chain);
  };
  auto nu_monotone = [&](Order nu) {
    std::vector<PropertyReport> out;
    for (const double off : config.mu_offsets) {
      out.push_back(nu_monotone_check(nu, Order(nu.value() + off),
                                      first_component_grid(nu, pts)));
    }
    return out;
  };
  auto power_series = [&](Order nu) {
    return std::vector{power_series_report(nu)};
  };

  std::map<std::string, std::function<PropertyReport()>> jobs;
  jobs["T1"] = [&] {
    return per_nu("weierstrass_product",
                  [&](Order nu) { return std::vector{product_report(nu)}; });
  };
  jobs["T2"] = [&] {
    return per_nu("absolute_monotonicity", [&](Order nu) {
      std::vector<PropertyReport> out;
      const GridSpec g = squared_grid(nu, pts);
      for (const double off : config.mu_offsets) {
        const Order mu(nu.value() + off);
        out.push_back(abs_monotone_report(MonotoneTarget::f, mu, nu, g, 8));
        out.push_back(abs_monotone_report(MonotoneTarget::g_ratio, mu, nu, g, 6));
      }
      out.push_back(abs_monotone_report(MonotoneTarget::q, nu, nu, g, 6));
      out.push_back(eta2_report(nu));
      return out;
    });
  };
  jobs["C1"] = [&] {
    return per_nu("dini_exponential_bound", [&](Order nu) {
      return std::vector{bound_check(nu, first_component_grid(nu, pts))};
    });
  };
  jobs["E6"] = [&] {
    return per_nu("dini_exponential_bound", [&](Order nu) {
      return std::vector{bound_check(nu, first_component_grid(nu, pts)).children[0]};
    });
  };
  jobs["E7"] = [&] {
    return per_nu("bessel_exponential_bound", [&](Order nu) {
      const PropertyReport r = bound_check(nu, first_component_grid(nu, pts));
      return std::vector{r.children[1], r.children[2]};
    });
  };
  jobs["T3"] = [&] {
    return per_nu("log_concavity_dini", [&](Order nu) {
      std::vector<PropertyReport> out;
      if (nu.value() >= 0.0) {
        for (int k = 0; k < 3; ++k) {
          out.push_back(log_concavity_check(ConcavityTarget::dini, nu, k, pts));
        }
      }
      out.push_back(logderiv_bound_check(nu, first_component_grid(nu, pts)));
      return out;
    });
  };
  jobs["E8"] = [&] {
    return per_nu("logderiv_bound", [&](Order nu) {
      return std::vector{logderiv_bound_check(nu, first_component_grid(nu, pts))};
    });
  };
  jobs["T4"] = [&] {
    return per_nu("log_concavity_gprime", [&](Order nu) {
      std::vector<PropertyReport> out;
      for (int k = 0; k < 3; ++k) {
        out.push_back(log_concavity_check(ConcavityTarget::g_prime, nu, k, pts));
      }
      out.push_back(corput_for(nu, false));
      return out;
    });
  };
  jobs["E9"] = [&] {
    return per_nu("van_der_corput",
                  [&](Order nu) { return std::vector{corput_for(nu, false)}; });
  };
  jobs["E10"] = [&] {
    return per_nu("van_der_corput_chain",
                  [&](Order nu) { return std::vector{corput_for(nu, true)}; });
  };
  jobs["C2"] = [&] {
    std::vector<PropertyReport> parts;
    for (const auto& [a, b] : std::vector<std::pair<double, double>>{
             {0.2, 0.5}, {0.05, 0.8}, {0.4, 0.4}, {4.0, 6.0}}) {
      parts.push_back(trig_case_check(a, b));
    }
    return combine("trig_case", std::move(parts));
  };
  jobs["T5"] = [&] {
    PropertyReport r = per_nu("power_series", power_series);
    r.children.push_back(rayleigh_order_report(config.nu_grid.size() > 1
                                                   ? config.nu_grid
                                                   : std::vector<double>{
                                                         config.nu_grid[0],
                                                         config.nu_grid[0] + 1.0}));
    return combine("power_series", std::move(r.children));
  };
  jobs["E11"] = [&] { return per_nu("power_series", power_series); };
  jobs["T6"] = [&] {
    PropertyReport r = per_nu("nu_monotone", nu_monotone);
    r.children.push_back(nu_zero_monotone_check(nus, 10));
    r.children.push_back(first_zero_bound_check(nus));
    return combine("nu_monotone", std::move(r.children));
  };
  jobs["E12"] = [&] { return per_nu("nu_monotone", nu_monotone); };

  std::map<std::string, std::future<PropertyReport>> running;
  for (auto& [id, job] : jobs) running.emplace(id, std::async(std::launch::async, job));
  std::map<std::string, PropertyReport> out;
  for (auto& [id, fut] : running) out.emplace(id, fut.get());
  return out;
}

nlohmann::json suite_document(const SuiteConfig& config,
                              const std::map<std::string, PropertyReport>& reports) {
  nlohmann::json doc;
  doc["config"] = to_json(config);
  doc["overall"] = any_failed(reports) ? "FAIL" : "PASS";
  nlohmann::json rs = nlohmann::json::object();
  for (const auto& [id, r] : reports) rs[id] = r;
  doc["reports"] = std::move(rs);
  return doc;
}

namespace {

struct Options {
  double nu = 0.0;
  double mu = 0.0;
  std::optional<double> x;
  int count = 10;
  std::string kind = "dini";
  int m = 1;
  std::optional<int> m_max;
  std::optional<double> grid_min;
  std::optional<double> grid_max;
  std::optional<int> grid_points;
  std::string format;
  std::string out_path;
  std::optional<double> tol;
  double width = 1e-9;
  double a = 0.0;
  double b = 0.0;
  std::string target;
  int component = 0;
  int fig = 1;
  double x_max = 5.0;
  int points = 500;
  std::string property;
  std::string nu_grid;
  std::string mu_offsets;
  std::string config_path;
  std::optional<int> pairs;
  std::optional<std::uint64_t> seed;
  bool nu_grid_given = false;
};

GridSpec grid_or(const Options& o, GridSpec fallback) {
  if (o.grid_min) fallback.lo = *o.grid_min;
  if (o.grid_max) fallback.hi = *o.grid_max;
  if (o.grid_points) fallback.points = *o.grid_points;
  if (!(fallback.hi >= fallback.lo) || fallback.points < 1) {
    throw DomainError("invalid grid");
  }
  return fallback;
}

std::vector<double> nu_grid_or_default(const Options& o) {
  if (o.nu_grid.empty()) return SuiteConfig{}.nu_grid;
  return split_list(o.nu_grid);
}

void emit_json(std::ostream& os, const nlohmann::json& j) { os << j.dump(2) << '\n'; }

int emit_report(std::ostream& os, const Options& o, const PropertyReport& r) {
  if (o.format == "csv") {
    os << "name,verdict,min_margin,violations,notes\n";
    flatten_report(os, r, "");
  } else {
    emit_json(os, nlohmann::json(r));
  }
  return r.passed() ? kExitOk : kExitFail;
}

int cmd_eval(std::ostream& os, const Options& o) {
  const Order nu(o.nu);
  std::vector<double> xs;
  if (o.x) {
    xs.push_back(*o.x);
  } else {
    xs = grid_points(grid_or(o, {0.5, 5.0, 10}));
  }
  const Order next(o.nu + 1.0);
  const char* header = "nu,x,bessel_j,bessel_j_next,dini,dini_prime,g,g_prime";
  nlohmann::json rows = nlohmann::json::array();
  std::ostringstream csv;
  csv << header << '\n';
  for (const double x : xs) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("eval requires x > 0");
    const GPair g = g_pair(nu, x);
    const std::vector<double> v{o.nu,          x,           bessel_j(nu, x),
                                bessel_j(next, x), dini(nu, x), dini_prime(nu, x),
                                g.g,           g.g_prime};
    write_csv_row(csv, v);
    rows.push_back({{"nu", v[0]}, {"x", v[1]}, {"bessel_j", v[2]},
                    {"bessel_j_next", v[3]}, {"dini", v[4]}, {"dini_prime", v[5]},
                    {"g", v[6]}, {"g_prime", v[7]}});
  }
  if (o.format == "json") {
    emit_json(os, rows);
  } else {
    os << csv.str();
  }
  return kExitOk;
}

int cmd_zeros(std::ostream& os, const Options& o) {
  ZeroKind kind;
  if (o.kind == "dini") {
    kind = ZeroKind::dini;
  } else if (o.kind == "bessel") {
    kind = ZeroKind::bessel;
  } else {
    throw DomainError("--kind must be bessel or dini");
  }
  if (o.count < 1 || o.count > kMaxTableSize) throw DomainError("--count out of range");
  const ZeroTable t = zero_table(Order(o.nu), kind, o.count);
  if (o.format == "json") {
    emit_json(os, {{"nu", o.nu},
                   {"kind", to_string(kind)},
                   {"zeros", t.values},
                   {"bracket_widths", t.widths}});
  } else {
    os << "n,zero,bracket_width\n";
    for (int i = 0; i < o.count; ++i) {
      write_csv_row(os, {i + 1.0, t.values[i], t.widths[i]});
    }
  }
  return kExitOk;
}

int cmd_sums(std::ostream& os, const Options& o) {
  const Order nu(o.nu);
  if (o.x) {
    const int m_max = o.m_max.value_or(30);
    const PowerSeriesValue s = logderiv_power_series(nu, *o.x, m_max);
    const double direct =
        *o.x == 0.0 ? o.nu : dini_log_derivative_scaled(nu, std::fabs(*o.x));
    if (o.format == "json") {
      emit_json(os, {{"nu", o.nu},
                     {"x", *o.x},
                     {"m_max", m_max},
                     {"value", s.value},
                     {"remainder_bound", s.remainder_bound},
                     {"direct", direct},
                     {"coefficients", s.coefficients}});
    } else {
      os << "nu,x,m_max,value,remainder_bound,direct\n";
      write_csv_row(os, {o.nu, *o.x, static_cast<double>(m_max), s.value,
                         s.remainder_bound, direct});
    }
    return kExitOk;
  }
  const int lo = o.m_max ? 1 : o.m;
  const int hi = o.m_max.value_or(o.m);
  if (lo < 1 || hi < lo) throw DomainError("invalid --m / --m-max");
  nlohmann::json rows = nlohmann::json::array();
  std::ostringstream csv;
  csv << "m,lower,upper,midpoint,width,n_used\n";
  for (int m = lo; m <= hi; ++m) {
    const RayleighEnclosure e = rayleigh_enclosure(nu, m, o.width);
    write_csv_row(csv, {static_cast<double>(m), e.lower, e.upper, e.midpoint(),
                        e.width(), static_cast<double>(e.n_used)});
    rows.push_back({{"m", m}, {"lower", e.lower}, {"upper", e.upper},
                    {"midpoint", e.midpoint()}, {"width", e.width()},
                    {"n_used", e.n_used}});
  }
  if (o.format == "json") {
    emit_json(os, {{"nu", o.nu}, {"sums", rows}});
  } else {
    os << csv.str();
  }
  return kExitOk;
}

MonotoneTarget monotone_target(const std::string& t) {
  if (t == "f" || t.empty()) return MonotoneTarget::f;
  if (t == "g_ratio") return MonotoneTarget::g_ratio;
  if (t == "q") return MonotoneTarget::q;
  throw DomainError("--target must be f, g_ratio or q");
}

ConcavityTarget concavity_target(const std::string& t) {
  if (t == "g_prime" || t.empty()) return ConcavityTarget::g_prime;
  if (t == "dini") return ConcavityTarget::dini;
  throw DomainError("--target must be dini or g_prime");
}

int cmd_verify(std::ostream& os, const Options& o) {
  const Order nu(o.nu);
  const std::string& p = o.property;
  const int pts = o.grid_points.value_or(20);
  PropertyReport r;
  if (p == "eta2") {
    r = eta2_report(nu, o.tol.value_or(1e-7));
  } else if (p == "product") {
    r = product_report(nu, o.count == 10 ? 2000 : o.count, pts, o.tol.value_or(1e-8));
  } else if (p == "abs-monotone") {
    const MonotoneTarget t = monotone_target(o.target);
    const Order mu(t == MonotoneTarget::q ? o.nu : std::max(o.mu, o.nu));
    r = abs_monotone_report(t, mu, nu, grid_or(o, squared_grid(nu, 20)),
                            o.m_max.value_or(t == MonotoneTarget::f ? 8 : 6));
  } else if (p == "bound") {
    r = bound_check(nu, grid_or(o, first_component_grid(nu, 20)));
  } else if (p == "logderiv-bound") {
    r = logderiv_bound_check(nu, grid_or(o, first_component_grid(nu, 20)));
  } else if (p == "log-concavity") {
    r = log_concavity_check(concavity_target(o.target), nu, o.component, pts);
  } else if (p == "corput") {
    r = corput_check(nu, o.a, o.b);
  } else if (p == "corput-chain") {
    r = corput_chain_check(nu, o.a, o.b);
  } else if (p == "trig") {
    r = trig_case_check(o.a, o.b);
  } else if (p == "nu-monotone") {
    r = nu_monotone_check(nu, Order(o.mu), grid_or(o, first_component_grid(nu, 20)));
  } else if (p == "zero-monotone") {
    r = nu_zero_monotone_check(orders(nu_grid_or_default(o)), o.count);
  } else if (p == "first-zero-bound") {
    r = first_zero_bound_check(orders(nu_grid_or_default(o)));
  } else if (p == "power-series") {
    r = power_series_report(nu, 0.5, pts < 2 ? 11 : pts, o.m_max.value_or(30),
                            o.tol.value_or(1e-9));
  } else if (p == "rayleigh-order") {
    r = rayleigh_order_report(nu_grid_or_default(o), o.m_max.value_or(5));
  } else {
    throw CLI::ValidationError("verify", "unknown property '" + p + "'");
  }
  return emit_report(os, o, r);
}

int cmd_figure(std::ostream& os, const Options& o) {
  const std::vector<FigureRow> rows = figure_data(o.fig, o.x_max, o.points);
  if (o.format == "json") {
    nlohmann::json data = nlohmann::json::array();
    for (const auto& r : rows) data.push_back({r.x, r.d1, r.envelope});
    emit_json(os, {{"columns", {"x", "d1", "envelope"}}, {"rows", data}});
  } else {
    os << figure_csv(rows);
  }
  return kExitOk;
}

int cmd_report(std::ostream& os, const Options& o) {
  SuiteConfig c;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw DomainError("cannot read config file " + o.config_path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw DomainError(std::string("bad config file: ") + e.what());
    }
    c = suite_config_from_json(j);
  }
  if (o.nu_grid_given) c.nu_grid = split_list(o.nu_grid);
  if (!o.mu_offsets.empty()) c.mu_offsets = split_list(o.mu_offsets);
  if (o.grid_points) c.grid_points = *o.grid_points;
  if (o.pairs) c.corput_pairs = *o.pairs;
  if (o.seed) c.seed = *o.seed;
  c.validate();
  const auto reports = report_suite(c);
  if (o.format == "csv") {
    os << "name,verdict,min_margin,violations,notes\n";
    for (const auto& [id, r] : reports) flatten_report(os, renamed(r, id), "");
  } else {
    emit_json(os, suite_document(c, reports));
  }
  return any_failed(reports) ? kExitFail : kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dini function evaluation, zeros, spectral sums and inequality checks",
               "dinikit"};
  app.require_subcommand(1);
  Options o;

  auto add_format = [&](CLI::App* s) {
    s->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    s->add_option("--out", o.out_path, "Write output to this file");
  };
  auto add_grid = [&](CLI::App* s) {
    s->add_option("--grid-min", o.grid_min, "Grid lower end");
    s->add_option("--grid-max", o.grid_max, "Grid upper end");
    s->add_option("--grid-points", o.grid_points, "Grid size");
  };

  CLI::App* eval = app.add_subcommand("eval", "Evaluate J_nu, d_nu, g_nu and derivatives");
  eval->add_option("--nu", o.nu, "Order nu > -1")->required();
  eval->add_option("--x", o.x, "Single argument x > 0");
  add_grid(eval);
  add_format(eval);

  CLI::App* zeros = app.add_subcommand("zeros", "Tabulate positive zeros");
  zeros->add_option("--nu", o.nu, "Order nu > -1")->required();
  zeros->add_option("--kind", o.kind, "bessel or dini")
      ->check(CLI::IsMember({"bessel", "dini"}));
  zeros->add_option("--count", o.count, "Number of zeros");
  add_format(zeros);

  CLI::App* sums = app.add_subcommand("sums", "Rayleigh sum enclosures or the power series");
  sums->add_option("--nu", o.nu, "Order nu > -1")->required();
  sums->add_option("--m", o.m, "Single index m");
  sums->add_option("--m-max", o.m_max, "Indices 1..m_max (series length with --x)");
  sums->add_option("--width", o.width, "Target enclosure width");
  sums->add_option("--x", o.x, "Evaluate the truncated power series at x");
  add_format(sums);

  CLI::App* verify = app.add_subcommand("verify", "Run one property check");
  verify->add_option("property", o.property,
                     "eta2, product, abs-monotone, bound, logderiv-bound, "
                     "log-concavity, corput, corput-chain, trig, nu-monotone, "
                     "zero-monotone, first-zero-bound, power-series, rayleigh-order")
      ->required();
  verify->add_option("--nu", o.nu, "Order nu > -1");
  verify->add_option("--mu", o.mu, "Second order mu >= nu");
  verify->add_option("--m-max", o.m_max, "Highest derivative or index");
  verify->add_option("--count", o.count, "Zero index bound or factor count");
  verify->add_option("--target", o.target, "Checked function");
  verify->add_option("--component", o.component, "Positivity component index");
  verify->add_option("--a", o.a, "First point");
  verify->add_option("--b", o.b, "Second point");
  verify->add_option("--tol", o.tol, "Absolute error floor or enclosure width");
  verify->add_option("--nu-grid", o.nu_grid, "Comma separated orders");
  add_grid(verify);
  add_format(verify);

  CLI::App* figure = app.add_subcommand("figure", "Emit figure data");
  figure->add_option("--fig", o.fig, "Figure number");
  figure->add_option("--x-max", o.x_max, "Upper end of the x range");
  figure->add_option("--points", o.points, "Number of rows");
  add_format(figure);

  CLI::App* report = app.add_subcommand("report", "Run the full verification suite");
  report->add_option("--config", o.config_path, "JSON suite configuration");
  report->add_option("--nu-grid", o.nu_grid, "Comma separated orders");
  report->add_option("--mu-offsets", o.mu_offsets, "Comma separated mu - nu offsets");
  report->add_option("--grid-points", o.grid_points, "Grid size");
  report->add_option("--pairs", o.pairs, "Random pairs per order");
  report->add_option("--seed", o.seed, "Sampling seed");
  add_format(report);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << '\n' << app.help();
    return kExitUsage;
  }

  std::ostringstream buffer;
  int code = kExitOk;
  try {
    if (*eval) {
      code = cmd_eval(buffer, o);
    } else if (*zeros) {
      code = cmd_zeros(buffer, o);
    } else if (*sums) {
      code = cmd_sums(buffer, o);
    } else if (*verify) {
      if (o.format.empty()) o.format = "json";
      code = cmd_verify(buffer, o);
    } else if (*figure) {
      code = cmd_figure(buffer, o);
    } else {
      o.nu_grid_given = report->count("--nu-grid") > 0;
      code = cmd_report(buffer, o);
    }
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFail;
  }

  if (o.out_path.empty()) {
    out << buffer.str();
  } else {
    std::ofstream file(o.out_path, std::ios::binary);
    if (!file) {
      err << "error: cannot write " << o.out_path << '\n';
      return kExitUsage;
    }
    file << buffer.str();
  }
  return code;
}

}  // namespace dinikit
