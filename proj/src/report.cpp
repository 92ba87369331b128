#include "dinikit/report.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dinikit {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "PASS";
    case Verdict::fail:
      return "FAIL";
    case Verdict::pass_with_notes:
      return "PASS_WITH_NOTES";
  }
  return "FAIL";
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "PASS") return Verdict::pass;
  if (s == "FAIL") return Verdict::fail;
  if (s == "PASS_WITH_NOTES") return Verdict::pass_with_notes;
  throw std::invalid_argument("unknown verdict: " + s);
}

double PropertyReport::tolerance() const {
  const auto it = params.find("tol");
  return it == params.end() ? kDefaultTolerance : it->second;
}

ReportBuilder::ReportBuilder(std::string name, double tol) : tol_(tol) {
  report_.name = std::move(name);
  report_.params["tol"] = tol;
}

ReportBuilder& ReportBuilder::param(const std::string& key, double value) {
  report_.params[key] = value;
  return *this;
}

ReportBuilder& ReportBuilder::grid(GridSpec g) {
  report_.grid = g;
  return *this;
}

ReportBuilder& ReportBuilder::note(std::string text) {
  report_.notes.push_back(std::move(text));
  return *this;
}

void ReportBuilder::check(double point, double lhs, double rhs) {
  check_margin(point, lhs - rhs, lhs, rhs);
}

void ReportBuilder::check_margin(double point, double margin, double lhs,
                                 double rhs) {
  if (std::isnan(margin)) {
    violate(point, lhs, rhs);
    return;
  }
  report_.min_margin = std::min(report_.min_margin, margin);
  if (margin < -tol_) {
    report_.violations.push_back({point, lhs, rhs});
  }
}

void ReportBuilder::violate(double point, double lhs, double rhs) {
  report_.violations.push_back({point, lhs, rhs});
}

void ReportBuilder::add_child(PropertyReport child) {
  report_.min_margin = std::min(report_.min_margin, child.min_margin);
  report_.children.push_back(std::move(child));
}

PropertyReport ReportBuilder::finish() && {
  bool ok = report_.violations.empty() && report_.min_margin >= -tol_;
  bool noted = !report_.notes.empty();
  for (const auto& c : report_.children) {
    ok = ok && c.verdict != Verdict::fail;
    noted = noted || c.verdict == Verdict::pass_with_notes;
  }
  report_.verdict =
      !ok ? Verdict::fail : (noted ? Verdict::pass_with_notes : Verdict::pass);
  return std::move(report_);
}

PropertyReport combine(std::string name, std::vector<PropertyReport> parts) {
  double tol = 0.0;
  for (const auto& p : parts) tol = std::max(tol, p.tolerance());
  ReportBuilder b(std::move(name), parts.empty() ? kDefaultTolerance : tol);
  for (auto& p : parts) b.add_child(std::move(p));
  return std::move(b).finish();
}

namespace {

nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double parse_number(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

void to_json(nlohmann::json& j, const PropertyReport& r) {
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : r.params) params[k] = number(v);
  nlohmann::json violations = nlohmann::json::array();
  for (const auto& v : r.violations) {
    violations.push_back({{"point", number(v.point)},
                          {"lhs", number(v.lhs)},
                          {"rhs", number(v.rhs)}});
  }
  j = nlohmann::json{
      {"name", r.name},
      {"params", params},
      {"grid",
       {{"lo", number(r.grid.lo)},
        {"hi", number(r.grid.hi)},
        {"points", r.grid.points}}},
      {"min_margin", number(r.min_margin)},
      {"violations", violations},
      {"notes", r.notes},
      {"verdict", to_string(r.verdict)},
  };
  if (!r.children.empty()) {
    j["checks"] = r.children;
  }
}

void from_json(const nlohmann::json& j, PropertyReport& r) {
  r.name = j.at("name").get<std::string>();
  r.params.clear();
  for (const auto& [k, v] : j.at("params").items()) r.params[k] = parse_number(v);
  const auto& g = j.at("grid");
  r.grid = {parse_number(g.at("lo")), parse_number(g.at("hi")),
            g.at("points").get<int>()};
  r.min_margin = parse_number(j.at("min_margin"));
  r.violations.clear();
  for (const auto& v : j.at("violations")) {
    r.violations.push_back({parse_number(v.at("point")),
                            parse_number(v.at("lhs")),
                            parse_number(v.at("rhs"))});
  }
  r.notes = j.at("notes").get<std::vector<std::string>>();
  r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  r.children.clear();
  if (j.contains("checks")) {
    r.children = j.at("checks").get<std::vector<PropertyReport>>();
  }
}

}  // namespace dinikit
