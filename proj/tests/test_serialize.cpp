#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "auglag/errors.hpp"
#include "auglag/serialize.hpp"

using namespace auglag;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

BlockVec v(std::vector<double> x) { return BlockVec::vec(std::move(x)); }

RunReport table_run() {
  const Problem p = builtin("disjoint-mult");
  SolverCfg cfg;
  cfg.lambda0 = v({1.0, 1.0});
  cfg.c0 = 3.0;
  cfg.c_min = 2.5;
  cfg.eps = 1e-10;
  cfg.max_iter = 10;
  return run(p, phi_from_name("hpr", p.K), cfg);
}

}  // namespace

TEST(Reals, RoundTripExactly) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> ex(-300, 300);
  for (int k = 0; k < 2000; ++k) {
    const double x = std::ldexp(mant(rng), ex(rng));
    EXPECT_EQ(parse_real(fmt_real(x)), x) << fmt_real(x);
  }
  EXPECT_EQ(parse_real(fmt_real(kInf)), kInf);
  EXPECT_EQ(parse_real(fmt_real(-kInf)), -kInf);
  EXPECT_TRUE(std::isnan(parse_real("nan")));
  EXPECT_THROW(parse_real("1.5x"), DomainError);
}

TEST(TraceCsv, RoundTrip) {
  const RunReport r = table_run();
  const std::string csv = trace_to_csv(r.trace);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "n,x1,lambda1,lambda2,c,eps,L,f,feas,Vnorm");
  const auto back = trace_from_csv(csv, ConeSpec::nonpos(2));
  ASSERT_EQ(back.size(), r.trace.size());
  for (std::size_t k = 0; k < back.size(); ++k) {
    EXPECT_EQ(back[k].n, r.trace[k].n);
    EXPECT_EQ(back[k].x, r.trace[k].x);
    EXPECT_EQ(back[k].lambda.to_flat(), r.trace[k].lambda.to_flat());
    EXPECT_EQ(back[k].c, r.trace[k].c);
    EXPECT_EQ(back[k].L, r.trace[k].L);
    EXPECT_EQ(back[k].f, r.trace[k].f);
    EXPECT_EQ(back[k].v_norm, r.trace[k].v_norm);
  }
  EXPECT_EQ(trace_to_csv(back), csv);
}

TEST(TraceCsv, MatrixMultipliersUseTheUpperTriangle) {
  IterateRecord it;
  it.x = {0.5, -0.25};
  it.lambda = BlockVec::from_flat(ConeSpec::nsd(2), {1.0, 2.0, 3.0});
  it.c = 2.0;
  const std::string csv = trace_to_csv({it});
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "n,x1,x2,lambda1,lambda2,lambda3,c,eps,L,f,feas,Vnorm");
  const auto back = trace_from_csv(csv, ConeSpec::nsd(2));
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].lambda.block(0).at(1, 0), 2.0);
  EXPECT_THROW(trace_from_csv(csv, ConeSpec::nonpos(2)), DomainError);
}

TEST(RunReportJson, RoundTrip) {
  const RunReport r = table_run();
  const std::string js = run_report_to_json(r);
  const RunReport back = run_report_from_json(js, ConeSpec::nonpos(2));
  EXPECT_EQ(back.problem, r.problem);
  EXPECT_EQ(back.phi, r.phi);
  EXPECT_EQ(back.termination, r.termination);
  ASSERT_EQ(back.trace.size(), r.trace.size());
  EXPECT_EQ(back.trace[3].x, r.trace[3].x);
  EXPECT_EQ(back.monitors.b2_bounded, r.monitors.b2_bounded);
  EXPECT_EQ(back.monitors.primal_limit.has_value(), r.monitors.primal_limit.has_value());
  EXPECT_EQ(run_report_to_json(back), js);
}

TEST(GapReportJson, RoundTripWithInfinities) {
  GapReport g;
  g.theta_star = ExtReal(-1.0);
  g.f_star = 0.0;
  g.gap = ExtReal(1.0);
  g.liminf_beta = ExtReal(-1.0);
  g.lambda0_used = v({0.0});
  g.c_schedule = {1.0, 10.0};
  g.theta_values = {ExtReal::neg_inf(), ExtReal(-1.0)};
  g.p_scales = {1e-2, 1e-4};
  g.beta_minima = {ExtReal(-0.99), ExtReal::pos_inf()};
  g.formula_guaranteed = false;
  const std::string js = gap_report_to_json(g);
  const GapReport back = gap_report_from_json(js, ConeSpec::nonpos(1));
  EXPECT_TRUE(back.theta_values[0].is_neg_inf());
  EXPECT_TRUE(back.beta_minima[1].is_pos_inf());
  EXPECT_EQ(back.gap.value(), 1.0);
  EXPECT_FALSE(back.formula_guaranteed);
  EXPECT_EQ(gap_report_to_json(back), js);
}

TEST(GapReportJson, UnknownOptimalValue) {
  GapReport g;
  g.theta_star = ExtReal(2.0);
  g.gap = ExtReal(0.0);
  g.liminf_beta = ExtReal(2.0);
  g.lambda0_used = v({0.0});
  const GapReport back = gap_report_from_json(gap_report_to_json(g), ConeSpec::nonpos(1));
  EXPECT_FALSE(back.f_star.has_value());
}

TEST(DualScanCsv, RoundTrip) {
  const std::vector<DualScanRow> rows{
      {v({0.0, 0.0}), 4.0, ExtReal(-2.0), InnerStatus::Finite},
      {v({3.0, 0.0}), 1.0, ExtReal::neg_inf(), InnerStatus::MinusInfinityDetected},
      {v({0.5, 1.5}), 0.25, ExtReal(-7.125), InnerStatus::MaxBoxReached},
  };
  const std::string csv = dual_scan_to_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "lambda1,lambda2,c,theta,status");
  const auto back = dual_scan_from_csv(csv, ConeSpec::nonpos(2));
  ASSERT_EQ(back.size(), 3u);
  EXPECT_TRUE(back[1].theta.is_neg_inf());
  EXPECT_EQ(back[1].status, InnerStatus::MinusInfinityDetected);
  EXPECT_EQ(back[2].status, InnerStatus::MaxBoxReached);
  EXPECT_EQ(dual_scan_to_csv(back), csv);
}

TEST(PenaltyCsv, RoundTrip) {
  const std::vector<PenaltyRow> rows{{v({3.0}), ExtReal(2.0)}, {v({-1.0}), ExtReal::pos_inf()}};
  const std::string csv = penalty_map_to_csv(rows);
  const auto back = penalty_map_from_csv(csv, ConeSpec::nonpos(1));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].c_star.value(), 2.0);
  EXPECT_TRUE(back[1].c_star.is_pos_inf());
  EXPECT_EQ(penalty_map_to_csv(back), csv);
}

TEST(AxiomMatrix, HeaderAndRows) {
  AxiomRow row;
  row.family = "hpr";
  AxiomReport a;
  a.id = AxiomId::A1;
  a.verdict = Verdict::Pass;
  AxiomReport b;
  b.id = AxiomId::A12;
  b.verdict = Verdict::PassOnHorizon;
  row.reports = {a, b};
  EXPECT_EQ(axiom_matrix_to_csv({row}), "family,A1,A12\nhpr,pass,pass-on-horizon\n");
  const std::string md = axiom_matrix_to_markdown({row});
  EXPECT_NE(md.find("| hpr |"), std::string::npos);
}
