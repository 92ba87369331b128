#pragma once

// Outcome of a single numerical verification, plus JSON serialization.

#include <limits>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace dinikit {

enum class Verdict { pass, fail, pass_with_notes };

std::string to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

/// Sampling description: `points` abscissae spanning [lo, hi].
struct GridSpec {
  double lo = 0.0;
  double hi = 0.0;
  int points = 0;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct Violation {
  double point = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;

  friend bool operator==(const Violation&, const Violation&) = default;
};

inline constexpr double kDefaultTolerance = 1e-9;

struct PropertyReport {
  std::string name;
  std::map<std::string, double> params;  // always carries "tol"
  GridSpec grid;
  double min_margin = std::numeric_limits<double>::infinity();
  std::vector<Violation> violations;
  std::vector<std::string> notes;
  Verdict verdict = Verdict::pass;
  std::vector<PropertyReport> children;

  double tolerance() const;
  bool passed() const { return verdict != Verdict::fail; }

  friend bool operator==(const PropertyReport&, const PropertyReport&) = default;
};

/// Accumulates margins for a claim of the form lhs >= rhs (margin = lhs - rhs)
/// and derives the verdict: PASS iff there are no violations and the minimum
/// margin is at least -tol; notes turn PASS into PASS_WITH_NOTES.
class ReportBuilder {
 public:
  ReportBuilder(std::string name, double tol = kDefaultTolerance);

  ReportBuilder& param(const std::string& key, double value);
  ReportBuilder& grid(GridSpec g);
  ReportBuilder& note(std::string text);

  /// Records lhs >= rhs at `point`.
  void check(double point, double lhs, double rhs);
  /// Records a precomputed margin; lhs/rhs are kept for the violation list.
  void check_margin(double point, double margin, double lhs, double rhs);
  /// Records a hard failure independent of the margin.
  void violate(double point, double lhs, double rhs);

  void add_child(PropertyReport child);

  PropertyReport finish() &&;

 private:
  PropertyReport report_;
  double tol_;
};

/// Merges independent reports under one name.
PropertyReport combine(std::string name, std::vector<PropertyReport> parts);

void to_json(nlohmann::json& j, const PropertyReport& r);
void from_json(const nlohmann::json& j, PropertyReport& r);

}  // namespace dinikit
