#pragma once

// Positive zeros j_{nu,n} of J_nu and alpha_{nu,n} of d_nu, found inside
// sign-change brackets and refined with Brent's method.

#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dinikit/core_eval.hpp"
#include "dinikit/report.hpp"

namespace dinikit {

/// A bracket search left its scan window without a sign change.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A structural assumption (interlacing, single sign change per bracket,
/// positivity) failed at run time.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ZeroKind { bessel, dini };

std::string to_string(ZeroKind kind);

inline constexpr int kMaxTableSize = 100000;

struct ZeroTable {
  Order order;
  ZeroKind kind;
  std::vector<double> values;  // values[n-1] is the n-th positive zero
  std::vector<double> widths;  // final bracket width of each entry
  double bracket_width = 0.0;  // max of widths
  int count = 0;

  std::span<const double> first(int n) const {
    return std::span<const double>(values).first(static_cast<size_t>(n));
  }
};

/// n-th positive zero of J_nu, n >= 1.
double bessel_zero(Order order, int n);

/// n-th positive zero of d_nu, n >= 1.
double dini_zero(Order order, int n);

/// First `count` zeros (1 <= count <= 100000). Deterministic.
ZeroTable zero_table(Order order, ZeroKind kind, int count);

/// Shared, immutable table holding at least `min_count` zeros. Tables are
/// cached per (nu rounded to 1e-12, kind); concurrent callers share one
/// construction.
std::shared_ptr<const ZeroTable> shared_zero_table(Order order, ZeroKind kind,
                                                   int min_count);

/// McMahon's large-n estimate of j_{nu,n}. Only used to seed bracket search.
double mcmahon_guess(double nu, int n);

struct OpenInterval {
  double lo;
  double hi;
  bool contains(double x) const { return x > lo && x < hi; }
};

/// The first components (alpha_{2k}, alpha_{2k+1}), alpha_0 = 0, of the set
/// where d_nu > 0.
struct PositivityDomain {
  Order order;
  std::vector<OpenInterval> intervals;

  /// Index of the component containing x, if any.
  std::optional<int> component_of(double x) const;
};

PositivityDomain positivity_domain(Order order, int k_components);

/// alpha_{nu_i,n} < alpha_{nu_{i+1},n} for consecutive grid orders, n <= n_max.
PropertyReport nu_zero_monotone_check(std::span<const Order> nu_grid, int n_max);

/// alpha_{nu,1} >= sqrt(4(nu+1)/3) at each grid order.
PropertyReport first_zero_bound_check(std::span<const Order> nu_grid);

}  // namespace dinikit
