#pragma once

// Real-argument evaluation of J_nu, J_nu', the Dini function
// d_nu(x) = (1 - nu) J_nu(x) + x J_nu'(x) = J_nu(x) - x J_{nu+1}(x)
// and the normalized pair g_nu, g_nu'.

#include <stdexcept>
#include <string>

namespace dinikit {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a series runs out of terms before meeting its tolerance.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, double last_term)
      : std::runtime_error(what), last_term_(last_term) {}
  double last_term() const noexcept { return last_term_; }

 private:
  double last_term_;
};

/// Bessel order nu > -1.
class Order {
 public:
  explicit Order(double nu);
  double value() const noexcept { return nu_; }
  friend bool operator==(Order a, Order b) noexcept { return a.nu_ == b.nu_; }
  friend bool operator<(Order a, Order b) noexcept { return a.nu_ < b.nu_; }

 private:
  double nu_;
};

struct EvalPolicy {
  int max_terms = 400;
  double rel_tol = 1e-15;
  double abs_tol = 1e-300;

  /// Throws DomainError unless tolerances are finite and positive and
  /// max_terms >= 8.
  void validate() const;
};

/// Gamma function for x > 0.
double gamma(double x);

/// J_nu(x). Requires x >= 0, and x > 0 when nu < 0.
double bessel_j(Order order, double x, const EvalPolicy& policy = {});

/// J_nu'(x) through x J_nu' = nu J_nu - x J_{nu+1}. Requires x > 0.
double bessel_j_prime(Order order, double x, const EvalPolicy& policy = {});

/// d_nu(x) = J_nu(x) - x J_{nu+1}(x). At x = 0: 1 for nu = 0, 0 for nu > 0,
/// DomainError for nu < 0.
double dini(Order order, double x, const EvalPolicy& policy = {});

/// d_nu'(x) = (nu/x - x) J_nu(x) + (nu - 1) J_{nu+1}(x). Requires x > 0.
double dini_prime(Order order, double x, const EvalPolicy& policy = {});

/// x d_nu'(x) / d_nu(x). Requires x > 0.
double dini_log_derivative_scaled(Order order, double x,
                                  const EvalPolicy& policy = {});

struct GPair {
  double g;
  double g_prime;
};

/// g_nu(x) = 2^nu Gamma(nu+1) x^(1-nu) J_nu(x) and
/// g_nu'(x) = 2^nu Gamma(nu+1) x^(-nu) d_nu(x). (0, 1) at the origin.
GPair g_pair(Order order, double x, const EvalPolicy& policy = {});

struct HalfIntegerValues {
  double j;
  double d;
  double g;
  double g_prime;
};

/// Elementary closed forms for nu = +1/2 and nu = -1/2.
HalfIntegerValues halfint_oracle(Order order, double x);

/// x^nu / (2^nu Gamma(nu+1)), the leading coefficient of the power series,
/// computed as exp(nu ln(x/2) - lgamma(nu+1)). Requires x > 0.
double leading_prefactor(double nu, double x);

namespace detail {

struct BesselPair {
  double j;       // J_nu(x)
  double j_next;  // J_{nu+1}(x)
};

/// J_nu(x) and J_{nu+1}(x) from a single evaluation path. x > 0.
BesselPair bessel_pair(double nu, double x, const EvalPolicy& policy);

/// Arguments above this use the Hankel expansion plus forward recurrence.
inline constexpr double kSeriesLimit = 35.0;

}  // namespace detail

}  // namespace dinikit
