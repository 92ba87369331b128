#pragma once

// Quotients of Dini functions whose monotonicity follows from the zero
// expansions of d_nu, and checkers that evaluate each resulting inequality on
// sample grids and return a PropertyReport.

#include <vector>

#include "dinikit/core_eval.hpp"
#include "dinikit/report.hpp"

namespace dinikit {

inline constexpr int kDefaultTerms = 2000;

/// Evenly spaced abscissae lo, ..., hi (points >= 1; a single point is lo).
std::vector<double> grid_points(const GridSpec& grid);

struct SeriesTerm {
  double value;
  /// Bound on the omitted positive tail (value is then a lower bound).
  double tail_bound;
  /// Tail correction already folded into value (m = 0 only).
  double tail_estimate;
};

/// m-th derivative of
/// f_{mu,nu}(x) = sum_n (1/(a_{nu,n}^2 - x) - 1/(a_{mu,n}^2 - x))
///                + 3(nu - mu)/(4(nu+1)(mu+1)),
/// the log-derivative of g_{mu,nu}. mu >= nu, 0 <= x < alpha_{nu,1}^2.
SeriesTerm f_derivative(Order mu, Order nu, double x, int m,
                        int n_terms = kDefaultTerms);

double f_derivs(Order mu, Order nu, double x, int m,
                int n_terms = kDefaultTerms);

/// g_{mu,nu}(x) = x^{(nu-mu)/2} exp(3x/4 (1/(mu+1) - 1/(nu+1)))
///                * d_mu(sqrt x) / d_nu(sqrt x); 2^{nu-mu} G(nu+1)/G(mu+1) at 0.
double g_ratio(Order mu, Order nu, double x);

/// g_{mu,nu}^{(k)}(x) for k = 0..m_max by Leibniz recursion over f^{(i)}.
std::vector<double> g_ratio_derivatives(Order mu, Order nu, double x,
                                        int m_max, int n_terms = kDefaultTerms);

/// q_nu(x) = x^{nu/2} e^{-3x/(4(nu+1))} / d_nu(sqrt x), or its m-th
/// derivative. q_nu(0) = 2^nu Gamma(nu+1).
double q_fun(Order nu, double x, int m, int n_terms = kDefaultTerms);

std::vector<double> q_derivatives(Order nu, double x, int m_max,
                                  int n_terms = kDefaultTerms);

/// (ln q_nu)^{(i)} for i = 0..count-1.
std::vector<double> q_log_derivatives(Order nu, double x, int count,
                                      int n_terms = kDefaultTerms);

enum class MonotoneTarget { f, g_ratio, q };

/// Nonnegativity of derivatives 0..m_max on the grid (tolerance 1e-9).
PropertyReport abs_monotone_report(MonotoneTarget target, Order mu, Order nu,
                                   const GridSpec& grid, int m_max,
                                   int n_terms = kDefaultTerms);

/// d_nu(x) <= x^nu e^{-3x^2/(4(nu+1))} / (2^nu G(nu+1)) on (0, alpha_{nu,1}),
/// J_nu(x) <= x^nu e^{-x^2/(4(nu+1))} / (2^nu G(nu+1)) on (0, j_{nu,1}), the
/// ordering of the two bounds, and the ratio d_nu/bound at the smallest grid
/// point. Margins are relative: 1 - value/bound.
PropertyReport bound_check(Order nu, const GridSpec& grid);

/// x d_nu'(x)/d_nu(x) < nu on a grid of (0, alpha_{nu,1}); a probe just right
/// of alpha_{nu,2} is reported as a note.
PropertyReport logderiv_bound_check(Order nu, const GridSpec& grid);

/// (ln g_nu')'(x) = -sum_n 2x/(alpha^2 - x^2) truncated at n_terms.
double log_gprime_first(Order nu, double x, int n_terms = kDefaultTerms);

/// (ln g_nu')''(x) = -2 sum_n (alpha^2 + x^2)/(alpha^2 - x^2)^2: n_terms
/// explicit terms plus -2 times a lower bound of sum_{n > N} alpha^-2. Each
/// omitted term is below -2 alpha^-2, so the result is an upper bound.
double log_gprime_second(Order nu, double x, int n_terms = kDefaultTerms);

enum class ConcavityTarget { dini, g_prime };

/// (ln target)'' < 0 at grid_points interior points of component
/// `component_index` of the positivity domain. Target dini requires nu >= 0.
PropertyReport log_concavity_check(ConcavityTarget target, Order nu,
                                   int component_index, int grid_points,
                                   int n_terms = kDefaultTerms);

/// |g(a) - g(b)| >= |a - b| sqrt(g'(a) g'(b)) and its Bessel form, for a and
/// b in one component of the positivity domain.
PropertyReport corput_check(Order nu, double a, double b);

/// The averaging chain behind the van der Corput inequality for f = g_nu:
/// ln((g(b)-g(a))/(b-a)) >= mean of ln g' >= (ln g'(a) + ln g'(b))/2.
PropertyReport corput_chain_check(Order nu, double a, double b);

/// The nu = -1/2 instance: |a cos a - b cos b| >=
/// |a-b| sqrt((cos a - a sin a)(cos b - b sin b)) on the positivity domain of
/// d_{-1/2}. The variant with weights (cos - sin) is evaluated as a note.
PropertyReport trig_case_check(double a, double b);

/// For mu >= nu on (0, alpha_{nu,1}): g_mu' >= g_nu' (as
/// x^{nu-mu} d_mu/d_nu >= 2^{nu-mu} G(nu+1)/G(mu+1)), d_mu'/d_mu >= d_nu'/d_nu,
/// and d_mu/d_nu increasing along the grid.
PropertyReport nu_monotone_check(Order nu, Order mu, const GridSpec& grid);

}  // namespace dinikit
