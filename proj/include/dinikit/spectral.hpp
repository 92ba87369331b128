#pragma once

// Expansions of d_nu over its zeros: the Weierstrass product, the
// Mittag-Leffler series of (ln g_nu')', Rayleigh sums
// eta_{2m}(nu) = sum_n alpha_{nu,n}^{-2m} and the Maclaurin series of
// x d_nu'(x) / d_nu(x).

#include <optional>
#include <stdexcept>
#include <vector>

#include "dinikit/core_eval.hpp"

namespace dinikit {

/// Evaluation at a zero of a denominator alpha_{nu,n}^2 - x^2.
class PoleError : public DomainError {
 public:
  PoleError(const std::string& what, int index)
      : DomainError(what), index_(index) {}
  int index() const noexcept { return index_; }

 private:
  int index_;
};

/// Requested enclosure width not reached within the zero table cap.
class EnclosureError : public std::runtime_error {
 public:
  EnclosureError(const std::string& what, double best_width)
      : std::runtime_error(what), best_width_(best_width) {}
  double best_width() const noexcept { return best_width_; }

 private:
  double best_width_;
};

struct Enclosure {
  double lower = 0.0;
  double upper = 0.0;

  double midpoint() const { return 0.5 * (lower + upper); }
  double width() const { return upper - lower; }
  bool contains(double v) const { return lower <= v && v <= upper; }
};

/// sigma_{2m}(nu) = sum_n j_{nu,n}^{-2m}, from the recurrence
/// sigma_{2m} = (nu + m)^{-1} sum_{k=1}^{m-1} sigma_{2k} sigma_{2m-2k},
/// sigma_2 = 1/(4(nu+1)).
double bessel_rayleigh_sum(Order order, int m);

/// Two-sided bound on sum_{n > n_head} alpha_{nu,n}^{-2m} from the
/// interlacing j_{nu,n-1} < alpha_{nu,n} < j_{nu,n}. n_head >= 1.
Enclosure dini_tail_enclosure(Order order, int m, int n_head);

struct ProductValue {
  double value;
  /// Bound on |omitted factors - 1|; empty when x >= alpha_{nu,N+1}.
  std::optional<double> tail_bound;
};

/// x^nu / (2^nu Gamma(nu+1)) * prod_{n<=N} (1 - x^2/alpha_{nu,n}^2).
ProductValue weierstrass_product(Order order, double x, int n_factors);

/// g_nu''(x)/g_nu'(x) = -sum_n 2x/(alpha_{nu,n}^2 - x^2): N explicit terms
/// plus the midpoint of the tail enclosure when |x| < alpha_{nu,N+1}.
double logderiv_series(Order order, double x, int n_terms);

/// 3 / (4 (nu + 1)).
double eta2_exact(Order order);

struct RayleighEnclosure {
  Order order;
  int m;
  double lower;
  double upper;
  int n_used;

  double midpoint() const { return 0.5 * (lower + upper); }
  double width() const { return upper - lower; }
  bool contains(double v) const { return lower <= v && v <= upper; }
};

/// Encloses eta_{2m}(nu) within `width`, growing the explicit head as needed.
RayleighEnclosure rayleigh_enclosure(Order order, int m, double width);

struct PowerSeriesValue {
  double value;
  std::vector<double> coefficients;  // coefficients[m-1] ~ eta_{2m}(nu)
  std::vector<double> coefficient_radius;
  double remainder_bound;  // truncation plus coefficient uncertainty
};

/// nu - 2 sum_{m<=m_max} eta_{2m}(nu) x^{2m}, for |x| < alpha_{nu,1}.
PowerSeriesValue logderiv_power_series(Order order, double x, int m_max);

}  // namespace dinikit
