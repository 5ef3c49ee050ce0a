#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace {

struct Result {
  int code = -1;
  std::string out;
};

// Runs the CLI with stderr discarded and returns stdout plus the exit status.
Result run_cli(const std::string& args) {
  const std::string cmd = std::string(AUGLAG_CLI_PATH) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int st = pclose(pipe);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace

TEST(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(run_cli("--help").code, 0);
  EXPECT_EQ(run_cli("").code, 2);
  EXPECT_EQ(run_cli("solve --bogus").code, 2);
  EXPECT_EQ(run_cli("solve --problem no-such-problem").code, 2);
  EXPECT_EQ(run_cli("gap --problem disjoint-mult --phi no-such-family").code, 2);
  EXPECT_EQ(run_cli("dual-scan --problem sharp-demo --phi sharp --lambda=1:0:0.5").code, 2);
}

TEST(Cli, ReferenceTraceCommandPasses) {
  const Result r = run_cli("table1");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("PASS: 10/10"), std::string::npos) << r.out;
}

TEST(Cli, ReferenceTraceLooseToleranceIsFlagged) {
  const Result r = run_cli("table1 --eps 0.5");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("MISMATCH"), std::string::npos);
}

TEST(Cli, GapOnDisjointIsZero) {
  const Result r = run_cli("gap --problem disjoint-mult --phi hpr");
  ASSERT_EQ(r.code, 0);
  const auto js = nlohmann::json::parse(r.out);
  EXPECT_EQ(js.at("status"), "ok");
  EXPECT_NEAR(js.at("gap").get<double>(), 0.0, 1e-3);
}

TEST(Cli, PenaltyMapOnSharpDemo) {
  const Result r = run_cli("penalty-map --problem sharp-demo --phi sharp --lambda=-3:3:0.25");
  ASSERT_EQ(r.code, 0);
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 26u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"lambda1", "c_star"}));
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const double l = std::stod(rows[k][0]);
    EXPECT_NEAR(std::stod(rows[k][1]), std::fabs(l - 1.0), 1e-2) << l;
  }
}

TEST(Cli, ExponentialRowFailsGrowth) {
  const Result r = run_cli("check-axioms --family exponential --cone nonpos:1 --format csv");
  ASSERT_EQ(r.code, 0);
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 2u);
  std::size_t col = 0;
  while (col < rows[0].size() && rows[0][col] != "A12") ++col;
  ASSERT_LT(col, rows[0].size());
  EXPECT_EQ(rows[1][0], "exponential");
  EXPECT_EQ(rows[1][col], "fail");
}

TEST(Cli, DivergenceIsNotAnError) {
  const Result r = run_cli("solve --problem disjoint-mult --phi hpr --c0 4 --c-max 1e3 --max-iter 100 --format json");
  ASSERT_EQ(r.code, 0);
  const auto js = nlohmann::json::parse(r.out);
  EXPECT_EQ(js.at("termination"), "c-diverged");
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
  for (const std::string args : {"solve --problem convex-qp --phi hpr --max-iter 8 --format json",
                                 "dual-scan --problem disjoint-mult --phi hpr --lambda=0:1:0.5 --c=3:4:1",
                                 "check-axioms --family cubic --cone nonpos:2 --samples 100 --seed 7 --format csv"}) {
    const Result a = run_cli(args);
    const Result b = run_cli(args);
    EXPECT_EQ(a.code, 0) << args;
    EXPECT_FALSE(a.out.empty()) << args;
    EXPECT_EQ(a.out, b.out) << args;
  }
}
