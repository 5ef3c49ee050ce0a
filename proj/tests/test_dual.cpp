#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "auglag/dual.hpp"
#include "auglag/errors.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace auglag;

namespace {

BlockVec v(std::vector<double> x) { return BlockVec::vec(std::move(x)); }

const Problem& disjoint() {
  static const Problem p = builtin("disjoint-mult");
  return p;
}
const Problem& sharp_demo() {
  static const Problem p = builtin("sharp-demo");
  return p;
}
const Problem& qp() {
  static const Problem p = builtin("convex-qp");
  return p;
}

PhiSpec hpr(const Problem& p) { return phi_from_name("hpr", p.K); }
PhiSpec sharp(const Problem& p) { return phi_from_name("sharp", p.K); }

// Theta(0, c) for the disjoint problem: inf of -x^2 + (c/2)(max{0, x-1}^2 + max{0, -x-1}^2).
double disjoint_theta0_oracle(double c) {
  return oracle::grid_min_1d(
      [c](double x) {
        const double a = std::max(0.0, x - 1.0), b = std::max(0.0, -x - 1.0);
        return -x * x + 0.5 * c * (a * a + b * b);
      },
      -50.0, 50.0, 100000);
}

// Smallest -x^2 over x with x - 1 - p1 <= 0 and -x - 1 - p2 <= 0.
double disjoint_beta_oracle(double p1, double p2) {
  const double lo = -1.0 - p2, hi = 1.0 + p1;
  if (lo > hi) return std::numeric_limits<double>::infinity();
  return oracle::grid_min_1d([](double x) { return -x * x; }, lo, hi, 10000);
}

}  // namespace

TEST(Theta, DisjointAtZeroMultiplier) {
  for (double c : {3.0, 4.0, 8.0}) {
    const DualEval d = theta(disjoint(), hpr(disjoint()), v({0.0, 0.0}), c);
    EXPECT_NEAR(d.value.value(), -1.0 - 2.0 / (c - 2.0), 1e-6) << c;
    EXPECT_NEAR(d.value.value(), disjoint_theta0_oracle(c), 1e-6) << c;
  }
  EXPECT_NEAR(theta(disjoint(), hpr(disjoint()), v({0.0, 0.0}), 4.0).value.value(), -2.0, 1e-8);
}

TEST(Theta, SharpDemoRegimes) {
  const DualEval zero = theta(sharp_demo(), sharp(sharp_demo()), v({1.0}), 0.5);
  EXPECT_NEAR(zero.value.value(), 0.0, 1e-9);
  const DualEval down = theta(sharp_demo(), sharp(sharp_demo()), v({3.0}), 1.0);
  EXPECT_TRUE(down.value.is_neg_inf());
  EXPECT_EQ(down.status, InnerStatus::MinusInfinityDetected);
  EXPECT_FALSE(down.argmin.has_value());
}

TEST(Theta, ArgumentChecks) {
  EXPECT_THROW(theta(disjoint(), hpr(disjoint()), v({0.0, 0.0}), 0.0), DomainError);
  EXPECT_THROW(theta(disjoint(), hpr(disjoint()), v({0.0}), 1.0), StructuralError);
  EXPECT_THROW(theta(qp(), PhiSpec::exponential(1), v({-1.0}), 1.0), AdmissibilityError);
  EXPECT_THROW(theta(qp(), hpr(disjoint()), v({0.0, 0.0}), 1.0), StructuralError);
}

TEST(Beta, DisjointPerturbations) {
  EXPECT_NEAR(beta(disjoint(), v({0.0, 0.0})).value(), -1.0, 1e-9);
  EXPECT_TRUE(beta(disjoint(), v({-3.0, 0.0})).is_pos_inf());
  EXPECT_NEAR(beta(disjoint(), v({0.5, 0.5})).value(), -2.25, 1e-9);
  EXPECT_NEAR(beta(disjoint(), v({0.5, 0.5})).value(), disjoint_beta_oracle(0.5, 0.5), 1e-9);
  for (auto [a, b] : {std::pair{0.2, -0.7}, std::pair{-0.4, 0.1}, std::pair{1.5, 0.0}}) {
    EXPECT_NEAR(beta(disjoint(), v({a, b})).value(), disjoint_beta_oracle(a, b), 1e-8) << a << "," << b;
  }
}

TEST(ThetaStar, ZeroGapFixtures) {
  const GapReport d = theta_star(disjoint(), hpr(disjoint()));
  EXPECT_EQ(d.status, "ok");
  EXPECT_NEAR(d.gap.value(), 0.0, 1e-3);
  const GapReport q = theta_star(qp(), hpr(qp()));
  EXPECT_NEAR(q.gap.value(), 0.0, 1e-3);
  EXPECT_NEAR(q.theta_star.value(), 1.0, 1e-3);
}

TEST(ThetaStar, ArctanGapIsOne) {
  const Problem p = builtin("arctan-gap");
  const GapReport g = theta_star(p, hpr(p));
  // Brute-force Theta(0, 1e6) on a unit grid over [-1e6, 1e6].
  const double c = 1e6;
  const double brute = oracle::grid_min_1d(
      [c](double x) {
        const double gx = x * std::exp(std::min(-x, 600.0));
        return -2.0 / std::numbers::pi * std::atan(x) + oracle::hpr_ineq(gx, 0.0, c);
      },
      -1e6, 1e6, 2000000);
  EXPECT_NEAR(brute, -1.0, 1e-5);
  EXPECT_NEAR(g.theta_star.value(), brute, 1e-2);
  EXPECT_NEAR(g.gap.value(), 1.0, 1e-2);
}

TEST(PenaltyMap, Examples) {
  EXPECT_NEAR(penalty_map(sharp_demo(), sharp(sharp_demo()), v({3.0}), 0.0).value(), 2.0, 1e-2);
  EXPECT_LE(penalty_map(qp(), hpr(qp()), v({2.0}), 1.0).value(), 1e-2);
  EXPECT_TRUE(penalty_map(disjoint(), hpr(disjoint()), v({2.0, 0.0}), -1.0).is_pos_inf());
}

TEST(Saddle, ConvexQpMultiplier) {
  for (double c : {1.0, 4.0}) {
    const SaddleReport r = check_saddle(qp(), hpr(qp()), {1.0}, v({2.0}), c);
    EXPECT_TRUE(r.is_gsp_witness) << c << " worst " << r.worst_violation;
  }
}

TEST(Saddle, DisjointHasNone) {
  for (double c : {4.0, 16.0, 64.0}) {
    EXPECT_FALSE(check_saddle(disjoint(), hpr(disjoint()), {1.0}, v({2.0, 0.0}), c).is_gsp_witness) << c;
  }
}

TEST(Saddle, ZeroMultiplierAtInteriorMinimizer) {
  const Problem p = problem_from_json(R"({"n": 1,
      "objective": {"poly": [{"c": 1, "e": [2]}, {"c": -1, "e": [1]}, {"c": 0.25, "e": [0]}]},
      "constraints": [{"poly": [{"c": 1, "e": [1]}, {"c": -1, "e": [0]}]}],
      "cone": {"kind": "nonpos", "dim": 1}, "f_star": 0, "witness": [0.5]})");
  const SaddleReport r = check_saddle(p, hpr(p), {0.5}, v({0.0}), 2.0);
  EXPECT_TRUE(r.is_gsp_witness) << r.worst_violation;
}

TEST(Alm, ConvexQp) {
  EXPECT_TRUE(check_alm(qp(), hpr(qp()), v({2.0})));
  for (double l : {0.0, 1.0, 3.0}) EXPECT_FALSE(check_alm(qp(), hpr(qp()), v({l}))) << l;
}

TEST(Alm, DisjointHasNone) {
  for (auto [a, b] : {std::pair{0.0, 0.0}, std::pair{2.0, 0.0}, std::pair{0.0, 2.0}, std::pair{1.0, 1.0}}) {
    EXPECT_FALSE(check_alm(disjoint(), hpr(disjoint()), v({a, b}))) << a << "," << b;
  }
}

// Properties.

TEST(DualProperty, WeakDuality) {
  support::WeakDualityCfg cfg;
  cfg.lambdas_1d = 4;
  cfg.lambdas_nd = 2;
  cfg.rw_norm_1d = 2;
  cfg.cs = {0.5, 32.0};
  cfg.feasible = 10;
  cfg.seed = 77;
  const auto st = support::weak_duality_sweep(cfg);
  EXPECT_GT(st.tuples, 500);
  EXPECT_EQ(st.violations, 0) << st.worst_case << " excess " << st.worst;
}

TEST(DualProperty, ThetaMonotoneInPenalty) {
  std::mt19937_64 rng(78);
  for (const auto& name : {"disjoint-mult", "convex-qp", "sharp-demo"}) {
    const Problem p = builtin(name);
    for (const auto& [key, phi] : support::families_for(p)) {
      const BlockVec l = sample_multiplier(phi, rng, 1.0);
      double prev = -std::numeric_limits<double>::infinity();
      for (double c : {0.5, 1.0, 2.0, 8.0, 32.0}) {
        const double th = theta(p, phi, l, c).value.value();
        if (std::isfinite(prev)) EXPECT_LE(prev, th + 1e-8) << name << "/" << key << " c=" << c;
        prev = th;
      }
    }
  }
}

TEST(DualProperty, PenaltyMapQuasiconvexOnSharpDemo) {
  std::vector<double> grid;
  std::vector<double> cstar;
  for (double l = -3.0; l <= 3.0 + 1e-12; l += 0.5) {
    grid.push_back(l);
    cstar.push_back(penalty_map(sharp_demo(), sharp(sharp_demo()), v({l}), 0.0).value());
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = i + 1; j < grid.size(); ++j) {
      for (double a : {0.5}) {
        const double mid = a * grid[i] + (1.0 - a) * grid[j];
        const double cm = penalty_map(sharp_demo(), sharp(sharp_demo()), v({mid}), 0.0).value();
        EXPECT_LE(cm, std::max(cstar[i], cstar[j]) + 1e-2) << grid[i] << " " << grid[j] << " " << a;
      }
    }
  }
}

TEST(DualProperty, GapFormulaIdentity) {
  for (const auto& name : {"disjoint-mult", "convex-qp", "arctan-gap", "sharp-demo"}) {
    const Problem p = builtin(name);
    for (const auto& key : {"hpr", "sharp"}) {
      const GapReport g = theta_star(p, phi_from_name(key, p.K));
      if (!g.theta_star.is_finite()) continue;
      const double want = std::max(0.0, *p.f_star - g.liminf_beta.value());
      EXPECT_NEAR(g.gap.value(), want, 1e-3) << name << "/" << key;
    }
  }
}

TEST(DualProperty, OptimalDualSolutionsStayOptimalForLargerPenalty) {
  const PhiSpec phi = sharp(sharp_demo());
  for (double l : {-1.0, 0.0, 2.5, 3.0}) {
    const double c0 = std::fabs(l - 1.0) + 1e-3;
    ASSERT_GE(theta(sharp_demo(), phi, v({l}), c0).value.value(), -1e-8) << l;
    for (double c : {c0 * 1.5, c0 * 4.0, c0 * 100.0}) {
      EXPECT_GE(theta(sharp_demo(), phi, v({l}), c).value.value(), -1e-8) << l << " c=" << c;
    }
  }
}
