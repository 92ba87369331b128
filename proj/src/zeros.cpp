#include "dinikit/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <utility>

#include "brent.hpp"

namespace dinikit {

namespace {

constexpr double kRootTol = 0.5e-12;  // bracket target, relative to 1 + x
constexpr double kScanCell = 0.5;     // well below the minimum zero spacing
constexpr int kDiniScanPoints = 64;
constexpr int kMaxWindows = 400;

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

std::string where(double nu, int n) {
  std::ostringstream os;
  os.precision(17);
  os << "(nu=" << nu << ", n=" << n << ")";
  return os.str();
}

double root_tolerance(double x) { return kRootTol * (1.0 + std::fabs(x)); }

/// Appends j_{nu,n} for n = values.size()+1 .. count. Each zero is searched
/// for strictly to the right of its predecessor, so indices cannot be skipped.
void extend_bessel(Order order, ZeroTable& t, int count) {
  const double nu = order.value();
  auto J = [&](double x) { return bessel_j(order, x); };
  for (int n = static_cast<int>(t.values.size()) + 1; n <= count; ++n) {
    const int expected = (n % 2 == 1) ? 1 : -1;
    double lo;
    if (n == 1) {
      // j_{nu,1}^2 > 4(nu+1): J_nu is positive up to this point.
      lo = 2.0 * std::sqrt(nu + 1.0);
      while (sign_of(J(lo)) != 1) {
        lo *= 0.5;
        if (lo < 1e-8) throw BracketError("no positive start " + where(nu, n));
      }
    } else {
      lo = t.values.back() + 0.05;
      if (sign_of(J(lo)) != expected) {
        throw InvariantViolation("unexpected sign after previous zero " +
                                 where(nu, n));
      }
    }
    double hi = std::clamp(mcmahon_guess(nu, n), lo + 1.0, lo + 64.0);
    bool found = false;
    for (int window = 0; window < kMaxWindows && !found; ++window) {
      const int cells =
          std::max(4, static_cast<int>(std::ceil((hi - lo) / kScanCell)));
      double prev_x = lo;
      for (int i = 1; i <= cells; ++i) {
        const double x = lo + (hi - lo) * i / cells;
        const double fx = J(x);
        if (sign_of(fx) != expected) {
          const double fprev = J(prev_x);
          const auto r =
              detail::brent_root(J, prev_x, x, fprev, fx, root_tolerance(x));
          t.values.push_back(r.root);
          t.widths.push_back(r.bracket_width);
          found = true;
          break;
        }
        prev_x = x;
      }
      if (!found) {
        lo = hi;
        hi = lo + 2.0 * std::numbers::pi;
      }
    }
    if (!found) {
      throw BracketError("bracket search window exhausted " + where(nu, n));
    }
  }
}

/// Appends alpha_{nu,n}. alpha_1 lies in (0, j_1) and alpha_n in
/// (j_{n-1}, j_n): d_nu(j_{nu,n}) = -j_{nu,n} J_{nu+1}(j_{nu,n}) has sign
/// (-1)^n while d_nu > 0 near the origin.
void extend_dini(Order order, ZeroTable& t, int count,
                 const ZeroTable& bessel) {
  const double nu = order.value();
  auto D = [&](double x) { return dini(order, x); };
  for (int n = static_cast<int>(t.values.size()) + 1; n <= count; ++n) {
    const double right = bessel.values[n - 1];
    double left;
    if (n == 1) {
      left = 0.5 * std::sqrt(nu + 1.0);
      while (sign_of(D(left)) != 1) {
        left *= 0.5;
        if (left < 1e-8) throw BracketError("no positive start " + where(nu, n));
      }
    } else {
      left = bessel.values[n - 2];
    }
    std::vector<double> xs(kDiniScanPoints + 2);
    std::vector<double> fs(kDiniScanPoints + 2);
    for (int i = 0; i <= kDiniScanPoints + 1; ++i) {
      xs[i] = (i == kDiniScanPoints + 1)
                  ? right
                  : left + (right - left) * i / (kDiniScanPoints + 1);
      fs[i] = D(xs[i]);
    }
    const int expected_left = (n % 2 == 1) ? 1 : -1;
    if (sign_of(fs.front()) != expected_left ||
        sign_of(fs.back()) != -expected_left) {
      throw InvariantViolation("no sign change across interlacing bracket " +
                               where(nu, n));
    }
    int changes = 0;
    int cell = -1;
    for (int i = 0; i + 1 < static_cast<int>(fs.size()); ++i) {
      if (sign_of(fs[i]) != sign_of(fs[i + 1])) {
        ++changes;
        if (cell < 0) cell = i;
      }
    }
    // A zero sample splits one crossing into two sign transitions.
    const bool exact_hit =
        changes == 2 && fs[cell + 1] == 0.0;
    if (changes != 1 && !exact_hit) {
      throw InvariantViolation("bracket holds more than one sign change " +
                               where(nu, n));
    }
    if (fs[cell + 1] == 0.0) {
      t.values.push_back(xs[cell + 1]);
      t.widths.push_back(0.0);
      continue;
    }
    const auto r = detail::brent_root(D, xs[cell], xs[cell + 1], fs[cell],
                                      fs[cell + 1], root_tolerance(right));
    t.values.push_back(r.root);
    t.widths.push_back(r.bracket_width);
  }
}

void finalize(ZeroTable& t, const ZeroTable* bessel) {
  const double nu = t.order.value();
  t.count = static_cast<int>(t.values.size());
  t.bracket_width = 0.0;
  for (int i = 0; i < t.count; ++i) {
    const double v = t.values[i];
    if (!(v > 0.0) || (i > 0 && !(v > t.values[i - 1]))) {
      throw InvariantViolation("zeros not strictly increasing " +
                               where(nu, i + 1));
    }
    if (t.widths[i] > 1e-12 * (1.0 + v)) {
      throw InvariantViolation("root bracket too wide " + where(nu, i + 1));
    }
    if (bessel != nullptr) {
      const double lower = i == 0 ? 0.0 : bessel->values[i - 1];
      if (!(v > lower && v < bessel->values[i])) {
        throw InvariantViolation("interlacing broken " + where(nu, i + 1));
      }
    }
    t.bracket_width = std::max(t.bracket_width, t.widths[i]);
  }
}

std::shared_ptr<const ZeroTable> build(Order order, ZeroKind kind, int count,
                                       const ZeroTable* prefix) {
  ZeroTable t{order, kind, {}, {}, 0.0, 0};
  if (prefix != nullptr) {
    t = *prefix;
  }
  t.values.reserve(count);
  t.widths.reserve(count);
  if (kind == ZeroKind::bessel) {
    extend_bessel(order, t, count);
    finalize(t, nullptr);
  } else {
    const auto bessel = shared_zero_table(order, ZeroKind::bessel, count);
    extend_dini(order, t, count, *bessel);
    finalize(t, bessel.get());
  }
  return std::make_shared<const ZeroTable>(std::move(t));
}

class ZeroCache {
 public:
  using TablePtr = std::shared_ptr<const ZeroTable>;

  TablePtr get(Order order, ZeroKind kind, int count) {
    const Key key{std::llround(order.value() * 1e12), kind};
    for (;;) {
      std::shared_future<TablePtr> pending;
      std::promise<TablePtr> promise;
      TablePtr prefix;
      {
        std::unique_lock lock(mutex_);
        auto it = entries_.find(key);
        if (it != entries_.end()) {
          pending = it->second;
          if (!ready(pending)) {
            lock.unlock();
            pending.wait();
            continue;
          }
          TablePtr existing;
          try {
            existing = pending.get();
          } catch (...) {
            entries_.erase(it);
            throw;
          }
          if (existing->count >= count) return existing;
          prefix = existing;
        }
        // This caller builds; others wait on the shared future.
        pending = promise.get_future().share();
        entries_[key] = pending;
      }
      const int target =
          prefix ? std::min(kMaxTableSize, std::max(count, 2 * prefix->count))
                 : count;
      try {
        TablePtr table = build(prefix ? prefix->order : order, kind, target,
                               prefix.get());
        promise.set_value(table);
        return table;
      } catch (...) {
        promise.set_exception(std::current_exception());
        std::lock_guard lock(mutex_);
        entries_.erase(key);
        throw;
      }
    }
  }

 private:
  struct Key {
    long long nu;
    ZeroKind kind;
    auto operator<=>(const Key&) const = default;
  };

  static bool ready(const std::shared_future<TablePtr>& f) {
    return f.wait_for(std::chrono::seconds(0)) == std::future_status::ready;
  }

  std::mutex mutex_;
  std::map<Key, std::shared_future<TablePtr>> entries_;
};

ZeroCache& cache() {
  static ZeroCache instance;
  return instance;
}

void check_count(int n) {
  if (n < 1 || n > kMaxTableSize) {
    throw DomainError("zero index must lie in [1, 100000]");
  }
}

}  // namespace

std::string to_string(ZeroKind kind) {
  return kind == ZeroKind::bessel ? "bessel" : "dini";
}

double mcmahon_guess(double nu, int n) {
  const double beta = (n + 0.5 * nu - 0.25) * std::numbers::pi;
  const double mu = 4.0 * nu * nu;
  const double e = 8.0 * beta;
  return beta - (mu - 1.0) / e - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) /
                                     (3.0 * e * e * e);
}

std::shared_ptr<const ZeroTable> shared_zero_table(Order order, ZeroKind kind,
                                                   int min_count) {
  check_count(min_count);
  return cache().get(order, kind, min_count);
}

double bessel_zero(Order order, int n) {
  check_count(n);
  return shared_zero_table(order, ZeroKind::bessel, n)->values[n - 1];
}

double dini_zero(Order order, int n) {
  check_count(n);
  return shared_zero_table(order, ZeroKind::dini, n)->values[n - 1];
}

ZeroTable zero_table(Order order, ZeroKind kind, int count) {
  check_count(count);
  const auto shared = shared_zero_table(order, kind, count);
  ZeroTable t{order, kind, {}, {}, 0.0, count};
  t.values.assign(shared->values.begin(), shared->values.begin() + count);
  t.widths.assign(shared->widths.begin(), shared->widths.begin() + count);
  t.bracket_width = *std::max_element(t.widths.begin(), t.widths.end());
  return t;
}

std::optional<int> PositivityDomain::component_of(double x) const {
  for (size_t k = 0; k < intervals.size(); ++k) {
    if (intervals[k].contains(x)) return static_cast<int>(k);
  }
  return std::nullopt;
}

PositivityDomain positivity_domain(Order order, int k_components) {
  if (k_components < 1) {
    throw DomainError("k_components must be positive");
  }
  const auto zeros = shared_zero_table(order, ZeroKind::dini, 2 * k_components);
  PositivityDomain domain{order, {}};
  for (int k = 0; k < k_components; ++k) {
    const double lo = k == 0 ? 0.0 : zeros->values[2 * k - 1];
    const double hi = zeros->values[2 * k];
    const double mid = 0.5 * (lo + hi);
    if (!(dini(order, mid) > 0.0)) {
      throw InvariantViolation("d_nu not positive at component midpoint");
    }
    domain.intervals.push_back({lo, hi});
  }
  return domain;
}

PropertyReport nu_zero_monotone_check(std::span<const Order> nu_grid,
                                      int n_max) {
  check_count(n_max);
  for (size_t i = 1; i < nu_grid.size(); ++i) {
    if (!(nu_grid[i - 1] < nu_grid[i])) {
      throw DomainError("order grid must be strictly increasing");
    }
  }
  ReportBuilder b("zero_monotone_in_nu", 0.0);
  b.param("n_max", n_max);
  if (!nu_grid.empty()) {
    b.grid({nu_grid.front().value(), nu_grid.back().value(),
            static_cast<int>(nu_grid.size())});
  }
  double min_gap = std::numeric_limits<double>::infinity();
  for (size_t i = 1; i < nu_grid.size(); ++i) {
    const auto lower = shared_zero_table(nu_grid[i - 1], ZeroKind::dini, n_max);
    const auto upper = shared_zero_table(nu_grid[i], ZeroKind::dini, n_max);
    for (int n = 0; n < n_max; ++n) {
      const double gap = upper->values[n] - lower->values[n];
      min_gap = std::min(min_gap, gap);
      if (gap > 0.0) {
        b.check_margin(nu_grid[i - 1].value(), gap, upper->values[n],
                       lower->values[n]);
      } else {
        b.violate(nu_grid[i - 1].value(), upper->values[n], lower->values[n]);
      }
    }
  }
  b.param("min_gap", min_gap);
  return std::move(b).finish();
}

PropertyReport first_zero_bound_check(std::span<const Order> nu_grid) {
  ReportBuilder b("first_zero_lower_bound", 0.0);
  if (!nu_grid.empty()) {
    b.grid({nu_grid.front().value(), nu_grid.back().value(),
            static_cast<int>(nu_grid.size())});
  }
  for (const Order order : nu_grid) {
    const double nu = order.value();
    b.check(nu, dini_zero(order, 1), std::sqrt(4.0 * (nu + 1.0) / 3.0));
  }
  return std::move(b).finish();
}

}  // namespace dinikit
