#pragma once

// Command-line front end and the batch verification suite.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "dinikit/core_eval.hpp"
#include "dinikit/report.hpp"

namespace dinikit {

/// Exit codes of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct FigureRow {
  double x;
  double d1;
  double envelope;  // (x/2) e^{-3x^2/8}
};

/// d_1 and its exponential envelope on `points` evenly spaced x in [0, x_max].
std::vector<FigureRow> figure_data(int fig = 1, double x_max = 5.0, int points = 500);

/// Header "x,d1,envelope", one %.17g row per entry, LF endings.
std::string figure_csv(const std::vector<FigureRow>& rows);

// Checkers assembled here because they combine several modules.

/// eta_2 enclosure of the requested width against 3/(4(nu+1)).
PropertyReport eta2_report(Order nu, double width = 1e-7);

/// Truncated product against the direct series at `points` interior points
/// of (0, alpha_{nu,3}); allowed error max(floor, tail_bound * |product|).
PropertyReport product_report(Order nu, int n_factors = 2000, int points = 50,
                              double floor = 1e-8);

/// Truncated even power series of x d'/d against the direct evaluation on
/// `points` points of [-fraction alpha_1, fraction alpha_1], plus positivity
/// of the recovered coefficients.
PropertyReport power_series_report(Order nu, double fraction = 0.5,
                                   int points = 11, int m_max = 30,
                                   double floor = 1e-9);

/// eta_{2m}(nu) strictly decreasing along the sorted grid, for m <= m_max.
PropertyReport rayleigh_order_report(std::vector<double> nu_grid, int m_max = 5);

/// Van der Corput inequality (or its averaging chain) on random pairs drawn
/// within the first `components` components of the positivity domain.
/// Margins must be strictly positive whenever a != b.
PropertyReport corput_pairs_report(Order nu, int pairs, std::uint64_t seed,
                                   int components = 3, bool chain = false);

struct SuiteConfig {
  std::vector<double> nu_grid{-0.9, -0.5, 0.0, 0.5, 1.0, 2.0, 5.0};
  std::vector<double> mu_offsets{0.0, 0.5, 2.0};
  int grid_points = 20;
  int corput_pairs = 50;
  std::uint64_t seed = 20240611;

  /// DomainError on an empty or invalid grid.
  void validate() const;
};

SuiteConfig suite_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SuiteConfig& c);

/// Every identifier T1..T6, C1, C2, E6..E12 mapped to its report.
std::map<std::string, PropertyReport> report_suite(const SuiteConfig& config);

/// {"config": ..., "overall": ..., "reports": {...}}
nlohmann::json suite_document(const SuiteConfig& config,
                              const std::map<std::string, PropertyReport>& reports);

}  // namespace dinikit
