#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "wparab/cli/scenario.hpp"

using namespace wparab;
using namespace wparab::cli;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("wparab_test_cli_" + name);
  std::filesystem::remove_all(p);
  return p;
}

json run_one(const std::string& scenario, const std::filesystem::path& out = scratch("one")) {
  RunOptions opt;
  opt.out_dir = out;
  RunResult r = run_config(load_config("{\"scenarios\": [" + scenario + "]}"), opt);
  return r.report.at("scenarios").at(0);
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(cell);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST(Config, MalformedJsonReportsPosition) {
  try {
    load_config("{\"scenarios\": [ {\"id\": \"a\", ");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("byte"), std::string::npos);
  }
}

TEST(Config, StructuralErrors) {
  EXPECT_THROW(load_config("[]"), ConfigError);
  EXPECT_THROW(load_config("{}"), ConfigError);
  EXPECT_THROW(load_config(R"({"scenarios": [{"task": "curves"}]})"), ConfigError);
  EXPECT_THROW(load_config(R"({"scenarios": [{"id": "a", "task": "plot"}]})"), ConfigError);
  EXPECT_THROW(load_config(R"({"scenarios": [{"id": "a", "task": "curves"}, {"id": "a", "task": "curves"}]})"), ConfigError);
  EXPECT_NO_THROW(load_config(R"({"scenarios": []})"));
}

TEST(Scenario, GaussianRadialCaseIsParabolicWithAhlforsEvidence) {
  json s = run_one(R"({"id": "g", "task": "classify", "model": {"m": 3, "f": "gaussian"},
                       "params": {"criterion": "cor_radialcase", "c": 0}})");
  ASSERT_EQ(s.at("status"), "ok") << s.dump();
  EXPECT_EQ(s.at("result").at("verdict").at("outcome"), "parabolic");
  EXPECT_EQ(s.at("result").at("ahlfors").at("outcome"), "parabolic");
  EXPECT_EQ(s.at("result").at("ahlfors").at("integral_evidence").at("kind"), "divergent");
}

TEST(Scenario, PlaneCapacity) {
  json s = run_one(R"({"id": "c", "task": "capacity", "model": {"m": 2, "w": "euclidean", "f": "zero"},
                       "params": {"rho": 1, "R": 2.718281828459045}})");
  ASSERT_EQ(s.at("status"), "ok") << s.dump();
  EXPECT_NEAR(s.at("result").at("capacity").get<double>(), 2.0 * std::numbers::pi, 1e-8);
}

TEST(Scenario, CapacityToInfinityOfSpace) {
  json s = run_one(R"({"id": "c", "task": "capacity", "model": {"m": 3, "w": "t"}, "params": {"rho": 2, "R": "inf"}})");
  ASSERT_EQ(s.at("status"), "ok") << s.dump();
  EXPECT_NEAR(s.at("result").at("capacity").get<double>(), 8.0 * std::numbers::pi, 1e-6);
}

TEST(Scenario, UnknownCatalogNamesAreScenarioErrors) {
  json s = run_one(R"({"id": "x", "task": "classify", "model": {"m": 3, "f": "gausian"}})");
  EXPECT_EQ(s.at("status"), "error");
  EXPECT_EQ(s.at("error").at("type"), "invalid_argument");
  s = run_one(R"({"id": "x", "task": "classify", "model": {"m": 3}, "submanifold": "torus"})");
  EXPECT_EQ(s.at("error").at("type"), "invalid_argument");
  s = run_one(R"({"id": "x", "task": "classify", "model": {"m": 3, "f": "exp(t"}})");
  EXPECT_EQ(s.at("error").at("type"), "expression_parse_error");
}

TEST(Curves, GaussianMinimalSphereCrossing) {
  auto out = scratch("gauss");
  json s = run_one(R"({"id": "gc", "task": "curves", "model": {"m": 3, "f": "gaussian"},
                       "params": {"t_lo": 0.1, "t_hi": 5, "samples": 50, "n": 2}})",
                   out);
  ASSERT_EQ(s.at("status"), "ok") << s.dump();
  auto rows = read_csv(out / "gc.csv");
  ASSERT_EQ(rows.size(), 51u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"t", "area", "volume", "H", "Hh_n"}));
  int crossings = 0;
  for (std::size_t i = 2; i < rows.size(); ++i) {
    double a = std::stod(rows[i - 1][4]), b = std::stod(rows[i][4]);
    if (a > 0 && b <= 0) {
      ++crossings;
      EXPECT_LT(std::stod(rows[i - 1][0]), std::sqrt(2.0));
      EXPECT_GE(std::stod(rows[i][0]), std::sqrt(2.0));
    }
  }
  EXPECT_EQ(crossings, 1);
}

TEST(Curves, PlanePotentialColumn) {
  auto out = scratch("phi");
  double se = std::sqrt(std::numbers::e);
  std::ostringstream cfg;
  cfg.precision(17);
  cfg << R"({"id": "p", "task": "curves", "model": {"m": 2}, "params": {"t_lo": )" << se - 0.5 << R"(, "t_hi": )"
      << se + 0.5 << R"(, "samples": 3, "rho": 1, "R": 2.718281828459045}})";
  json s = run_one(cfg.str(), out);
  ASSERT_EQ(s.at("status"), "ok") << s.dump();
  auto rows = read_csv(out / "p.csv");
  ASSERT_EQ(rows[0].back(), "phi");
  EXPECT_NEAR(std::stod(rows[2][0]), se, 1e-15);
  EXPECT_NEAR(std::stod(rows[2].back()), 0.5, 1e-12);
  EXPECT_NEAR(std::stod(rows[1].back()), 1.0 - std::log(std::stod(rows[1][0])), 1e-12);
}

TEST(Curves, PoleSingularWeight) {
  auto out = scratch("pole");
  json s = run_one(R"({"id": "l", "task": "curves", "model": {"m": 3, "f": {"name": "logpow", "k": 1}},
                       "params": {"t_lo": 0, "t_hi": 2}})",
                   out);
  ASSERT_EQ(s.at("status"), "error");
  EXPECT_EQ(s.at("error").at("type"), "domain_error");
  EXPECT_NE(s.at("error").at("message").get<std::string>().find("t_min"), std::string::npos);
  s = run_one(R"({"id": "l", "task": "curves", "model": {"m": 3, "f": {"name": "logpow", "k": 1}},
                  "params": {"t_lo": 0.5, "t_hi": 2, "samples": 4}})",
              out);
  ASSERT_EQ(s.at("status"), "ok") << s.dump();
  EXPECT_EQ(read_csv(out / "l.csv")[0], (std::vector<std::string>{"t", "area", "H", "Hh_n"}));
}

TEST(Run, SeedsDependOnIdOnly) {
  const char* sc = R"({"id": "h", "task": "mc-verify", "model": {"m": 2},
                      "params": {"mode": "hit", "start": [1.5, 0], "rho": 1, "R": 2, "N": 200, "dt": 0.002}})";
  json a = run_one(sc);
  RunOptions opt;
  opt.out_dir = scratch("two");
  opt.workers = 2;
  json cfg = load_config(std::string("{\"scenarios\": [") +
                         R"({"id": "z", "task": "capacity", "model": {"m": 2}, "params": {"rho": 1, "R": 2}}, )" + sc + "]}");
  json b = run_config(cfg, opt).report.at("scenarios").at(1);
  EXPECT_EQ(a.dump(), b.dump());
  EXPECT_EQ(a.at("resolved").at("seed").get<std::uint64_t>(), scenario_seed(1, "h"));
}

TEST(Run, NonFiniteNumbersBecomeNull) {
  EXPECT_TRUE(num(std::numeric_limits<double>::infinity()).is_null());
  EXPECT_TRUE(num(std::nan("")).is_null());
  EXPECT_EQ(num(1.5).get<double>(), 1.5);
}
