#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "dinikit/cli.hpp"
#include "dinikit/zeros.hpp"

using namespace dinikit;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("zeros subcommand") {
  const Result r = call({"zeros", "--nu", "0.5", "--kind", "dini", "--count", "3",
                         "--format", "csv"});
  CHECK(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "n,zero,bracket_width");
  for (int n = 1; n <= 3; ++n) {
    std::getline(lines, line);
    const double v = std::stod(line.substr(line.find(',') + 1));
    CHECK(std::fabs(v - (2 * n - 1) * M_PI / 2) < 1e-11);
  }
  CHECK(r.out.find('\r') == std::string::npos);
}

TEST_CASE("verify eta2 emits an enclosing report") {
  const Result r = call({"verify", "eta2", "--nu", "0"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["params"]["closed_form"].get<double>() == 0.75);
  CHECK(j["params"]["lower"].get<double>() <= 0.75);
  CHECK(j["params"]["upper"].get<double>() >= 0.75);
  CHECK(j["verdict"] == "PASS");
}

TEST_CASE("usage and domain errors exit with 2") {
  CHECK(call({"eval", "--badflag"}).code == 2);
  CHECK(call({}).code == 2);
  CHECK(call({"zeros", "--nu", "-1.5"}).code == 2);
  CHECK(call({"zeros", "--nu", "0", "--kind", "other"}).code == 2);
  CHECK(call({"verify", "nonsense"}).code == 2);
  CHECK(call({"verify", "corput", "--nu", "0.5", "--a", "0.3", "--b", "5"}).code == 2);
  CHECK(call({"figure", "--fig", "2"}).code == 2);
  CHECK(call({"report", "--nu-grid", ""}).code == 2);
  const Result r = call({"eval", "--badflag"});
  CHECK(!r.err.empty());
}

TEST_CASE("eval subcommand") {
  const Result r = call({"eval", "--nu", "0", "--x", "1", "--format", "json"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j[0]["bessel_j"].get<double>() == doctest::Approx(0.7651976865579666));
  CHECK(j[0]["dini"].get<double>() == doctest::Approx(0.3251471008130331));
  const Result csv = call({"eval", "--nu", "0", "--grid-min", "1", "--grid-max", "2",
                           "--grid-points", "3"});
  CHECK(csv.out.rfind("nu,x,bessel_j,bessel_j_next,dini,dini_prime,g,g_prime\n", 0) == 0);
}

TEST_CASE("sums subcommand") {
  const Result r = call({"sums", "--nu", "0.5", "--m-max", "3", "--width", "1e-9"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("m,lower,upper,midpoint,width,n_used\n", 0) == 0);
  const Result s = call({"sums", "--nu", "0.5", "--x", "0.3", "--format", "json"});
  const auto j = nlohmann::json::parse(s.out);
  CHECK(j["value"].get<double>() == doctest::Approx(0.5 - 0.3 * std::tan(0.3)).epsilon(1e-10));
}

TEST_CASE("verify report formats and exit codes") {
  const Result trig = call({"verify", "trig", "--a", "0.2", "--b", "0.5"});
  CHECK(trig.code == 0);
  CHECK(nlohmann::json::parse(trig.out)["verdict"] == "PASS_WITH_NOTES");
  const Result csv = call({"verify", "nu-monotone", "--nu", "0", "--mu", "1",
                           "--format", "csv"});
  CHECK(csv.code == 0);
  CHECK(csv.out.rfind("name,verdict,min_margin,violations,notes\n", 0) == 0);
}

TEST_CASE("figure data") {
  const auto rows = figure_data(1, 5.0, 500);
  REQUIRE(rows.size() == 500);
  CHECK(rows[0].x == 0.0);
  CHECK(rows[0].d1 == 0.0);
  CHECK(rows[0].envelope == 0.0);
  const double a1 = dini_zero(Order(1), 1);
  for (size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].x > rows[i - 1].x);
    if (rows[i].x < a1) CHECK(rows[i].envelope >= rows[i].d1);
  }
  const auto unit = figure_data(1, 1.0, 2);
  CHECK(unit[1].d1 == doctest::Approx(0.3251471008130331));
  CHECK(unit[1].envelope == doctest::Approx(0.3436446393954861));
}

TEST_CASE("figure output matches the golden file") {
  const std::string golden = slurp(DINIKIT_GOLDEN_DIR "/figure1_points11.csv");
  REQUIRE(!golden.empty());
  const Result r = call({"figure", "--points", "11"});
  CHECK(r.code == 0);
  CHECK(r.out == golden);
  CHECK(call({"figure", "--points", "11"}).out == r.out);
}

TEST_CASE("report JSON round trip") {
  ReportBuilder b("demo");
  b.param("nu", 0.5).grid({0.0, 1.0, 3}).note("a note");
  b.check(0.1, 2.0, 1.0);
  b.check(0.2, 1.0, 1.5);
  ReportBuilder child("child", 0.0);
  child.check(0.3, 1.0, 1.0);
  b.add_child(std::move(child).finish());
  const PropertyReport r = std::move(b).finish();
  CHECK(r.verdict == Verdict::fail);
  const nlohmann::json j = r;
  CHECK(j.contains("checks"));
  const PropertyReport back = nlohmann::json::parse(j.dump()).get<PropertyReport>();
  CHECK(back == r);

  ReportBuilder empty("empty");
  const PropertyReport e = std::move(empty).finish();
  CHECK(nlohmann::json(e)["min_margin"] == "inf");
  CHECK(nlohmann::json(e).get<PropertyReport>() == e);
}

TEST_CASE("suite runner on a reduced configuration") {
  SuiteConfig c;
  c.nu_grid = {0.0, 1.5};
  c.mu_offsets = {0.0, 1.0};
  c.grid_points = 6;
  c.corput_pairs = 5;
  const auto reports = report_suite(c);
  for (const char* id : {"T1", "T2", "T3", "T4", "T5", "T6", "C1", "C2", "E6", "E7",
                         "E8", "E9", "E10", "E11", "E12"}) {
    REQUIRE(reports.count(id) == 1);
    CHECK(reports.at(id).passed());
  }
  CHECK(reports.at("C2").verdict == Verdict::pass_with_notes);
  const std::string first = suite_document(c, reports).dump();
  CHECK(suite_document(c, report_suite(c)).dump() == first);

  SuiteConfig bad = c;
  bad.nu_grid.clear();
  CHECK_THROWS_AS(bad.validate(), DomainError);
  CHECK(suite_config_from_json(to_json(c)).nu_grid == c.nu_grid);
}
