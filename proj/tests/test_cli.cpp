#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "if2ode/cli.hpp"

namespace if2ode {
namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "if2ode");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

TEST(Cli, SolveCsv) {
  const Outcome o = run_cli({"solve", "--B", "3", "--C", "2", "--R", "0", "--interval", "0",
                             "2", "--ic", "1", "-1", "--format", "csv"});
  ASSERT_EQ(o.code, 0) << o.err;
  std::istringstream in(o.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,y,yprime");
  bool found = false;
  while (std::getline(in, line)) {
    const auto cells = split_line(line);
    ASSERT_EQ(cells.size(), 3u);
    if (std::stod(cells[0]) == 1.0) {
      EXPECT_NEAR(std::stod(cells[1]), 0.367879, 1e-6);
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(Cli, ClassifyText) {
  const Outcome o =
      run_cli({"classify", "--B", "2*x", "--C", "x^2+1", "--interval", "0", "2"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(o.out.substr(0, o.out.find('\n')), "route: discriminant-zero (Corollary 1), D ≡ 0");
}

TEST(Cli, ClassifyReportsBothDAndK) {
  const Outcome o = run_cli({"classify", "--B", "2*x", "--C", "x^2", "--interval", "0", "2"});
  ASSERT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("D ≡ 4"), std::string::npos) << o.out;
  EXPECT_NE(o.out.find("k = D/4 = 1"), std::string::npos) << o.out;
}

TEST(Cli, SingularityExitsWithTwo) {
  const Outcome o = run_cli({"solve", "--B", "0", "--C", "1", "--R", "0", "--interval", "0",
                             "2", "--riccati-q0", "0", "--force-route", "riccati"});
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.err.find("SingularityDetected near x=1.5708; try --riccati-q0 <other>"),
            std::string::npos)
      << o.err;
}

TEST(Cli, JsonErrorOnStderr) {
  const Outcome o = run_cli({"solve", "--B", "0", "--C", "1", "--interval", "0", "2",
                             "--force-route", "riccati", "--format", "json"});
  EXPECT_EQ(o.code, 2);
  const auto j = nlohmann::json::parse(o.err);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["error"], "SingularityDetected");
  EXPECT_EQ(j["stage"], "solve");
}

TEST(Cli, JsonReport) {
  const Outcome o = run_cli({"solve", "--B", "2*x", "--C", "x^2", "--interval", "0", "2",
                             "--ic", "1", "1", "--format", "json"});
  ASSERT_EQ(o.code, 0) << o.err;
  const auto j = nlohmann::json::parse(o.out);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["route"], "discriminant-constant");
  EXPECT_NEAR(j["k"].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(j["D"].get<double>(), 4.0, 1e-12);
  EXPECT_TRUE(j.contains("c"));
  EXPECT_EQ(j["metrics"]["factor_defects"].size(), 3u);
  EXPECT_TRUE(j["metrics"].contains("max_abs_error"));
  EXPECT_EQ(j["samples"].size(), 513u);
}

TEST(Cli, TextReportListsDiagnostics) {
  const Outcome o = run_cli({"solve", "--B", "x", "--C", "1", "--interval", "0", "1",
                             "--ic", "1", "0", "--riccati-q0", "0.25"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find("general-riccati"), std::string::npos);
  EXPECT_NE(o.out.find("q0: 0.25"), std::string::npos);
  EXPECT_NE(o.out.find("factor defects"), std::string::npos);
}

TEST(Cli, Deterministic) {
  const std::vector<std::string> args{"solve", "--B", "x", "--C", "cos(x)", "--R", "1",
                                      "--interval", "-1", "1", "--x0", "0.2", "--ic", "0",
                                      "1", "--format", "json"};
  const Outcome a = run_cli(args);
  const Outcome b = run_cli(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  auto csv = args;
  csv.back() = "csv";
  EXPECT_EQ(run_cli(csv).out, run_cli(csv).out);
}

TEST(Cli, Verify) {
  const Outcome ok = run_cli({"verify", "--B", "2*x", "--C", "x^2+1", "--interval", "0", "2",
                              "--ic", "1", "0"});
  EXPECT_EQ(ok.code, 0) << ok.out << ok.err;
  EXPECT_NE(ok.out.find("verification passed"), std::string::npos);
  const Outcome missing = run_cli({"verify", "--B", "1", "--C", "1", "--interval", "0", "1"});
  EXPECT_EQ(missing.code, 1);
}

TEST(Cli, VerifyFailsWhenThresholdIsUnreachable) {
  const Outcome o = run_cli({"verify", "--B", "0", "--C", "1", "--interval", "-1", "2.1",
                             "--ic", "0", "1", "--force-route", "cor2"});
  EXPECT_EQ(o.code, 2) << o.out;
  EXPECT_NE(o.out.find("FAIL"), std::string::npos);
}

TEST(Cli, BasisCsv) {
  const Outcome o = run_cli({"basis", "--B", "0", "--C", "1", "--interval", "0", "1",
                             "--format", "csv"});
  ASSERT_EQ(o.code, 0) << o.err;
  std::istringstream in(o.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,u,v");
  std::vector<std::array<double, 3>> rows;
  while (std::getline(in, line)) {
    const auto cells = split_line(line);
    ASSERT_EQ(cells.size(), 3u);
    rows.push_back({std::stod(cells[0]), std::stod(cells[1]), std::stod(cells[2])});
  }
  ASSERT_EQ(rows.size(), 513u);
  // Each column must be alpha cos x + beta sin x, fixed by the end points.
  for (int col : {1, 2}) {
    const double alpha = rows.front()[col];
    const double beta = (rows.back()[col] - alpha * std::cos(1.0)) / std::sin(1.0);
    for (const auto& r : rows)
      EXPECT_NEAR(r[col], alpha * std::cos(r[0]) + beta * std::sin(r[0]), 1e-8);
  }
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run_cli({}).code, 1);
  EXPECT_EQ(run_cli({"solve", "--B", "3x", "--C", "1", "--interval", "0", "1"}).code, 1);
  EXPECT_EQ(run_cli({"solve", "--B", "1", "--C", "1", "--interval", "1", "0"}).code, 1);
  EXPECT_EQ(run_cli({"solve", "--B", "1", "--C", "1", "--interval", "0", "1", "--x0", "2"})
                .code,
            1);
  EXPECT_EQ(run_cli({"solve", "--B", "1", "--C", "1", "--interval", "0", "1", "--grid", "32"})
                .code,
            1);
  EXPECT_EQ(run_cli({"solve", "--B", "1", "--C", "1", "--interval", "0", "1", "--format",
                     "xml"})
                .code,
            1);
  EXPECT_EQ(run_cli({"solve", "--B", "1", "--C", "1", "--interval", "0", "1",
                     "--force-route", "magic"})
                .code,
            1);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST(Cli, LibraryFailuresExitWithTwo) {
  const Outcome zero = run_cli({"solve", "--B", "0", "--C", "0", "--f", "x", "--interval",
                                "-1", "1", "--force-route", "complementary"});
  EXPECT_EQ(zero.code, 2);
  EXPECT_NE(zero.err.find("ZeroOnInterval"), std::string::npos) << zero.err;
  EXPECT_EQ(run_cli({"solve", "--B", "1/x", "--C", "1", "--interval", "0", "1"}).code, 2);
}

TEST(Cli, OutputFile) {
  const auto path = std::filesystem::temp_directory_path() / "if2ode_cli_test.csv";
  const Outcome o = run_cli({"solve", "--B", "3", "--C", "2", "--interval", "0", "1", "--ic",
                             "1", "-1", "--format", "csv", "--output", path.string()});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_TRUE(o.out.empty());
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "x,y,yprime");
  std::filesystem::remove(path);
}

TEST(Cli, ToleranceOverride) {
  const Tolerances t = cli::parse_tolerance_override("quad=1e-8,const=1e-6", {});
  EXPECT_EQ(t.quadrature, 1e-8);
  EXPECT_EQ(t.constant, 1e-6);
  EXPECT_EQ(t.stepper, 1e-10);
  const Tolerances s = cli::parse_tolerance_override("1e-7", {});
  EXPECT_EQ(s.quadrature, 1e-7);
  EXPECT_EQ(s.stepper, 1e-7);
  EXPECT_THROW(cli::parse_tolerance_override("speed=2", {}), std::invalid_argument);
  EXPECT_THROW(cli::parse_tolerance_override("-1", {}), std::invalid_argument);

  ::setenv("IF2ODE_TOL", "garbage", 1);
  EXPECT_EQ(run_cli({"classify", "--B", "1", "--C", "1", "--interval", "0", "1"}).code, 1);
  ::setenv("IF2ODE_TOL", "const=1e-2", 1);
  const Outcome loose =
      run_cli({"classify", "--B", "1+1e-4*x", "--C", "1", "--interval", "0", "1"});
  EXPECT_NE(loose.out.find("constant-coefficients"), std::string::npos) << loose.out;
  ::unsetenv("IF2ODE_TOL");
  const Outcome strict =
      run_cli({"classify", "--B", "1+1e-4*x", "--C", "1", "--interval", "0", "1"});
  EXPECT_EQ(strict.out.find("constant-coefficients"), std::string::npos) << strict.out;
}

}  // namespace
}  // namespace if2ode
