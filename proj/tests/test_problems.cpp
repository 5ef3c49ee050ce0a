#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "auglag/dual.hpp"
#include "auglag/errors.hpp"
#include "auglag/problems.hpp"
#include "oracles.hpp"

using namespace auglag;

namespace {

std::string read_fixture(const std::string& name) {
  std::ifstream is(std::string(AUGLAG_FIXTURE_DIR) + "/" + name);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// Smallest f over exactly feasible grid points of [-r, r]^n with the given step.
double grid_feasible_min(const Problem& p, double r, double step) {
  double best = std::numeric_limits<double>::infinity();
  const int cells = static_cast<int>(std::lround(2.0 * r / step));
  if (p.n == 1) {
    for (int i = 0; i <= cells; ++i) {
      const Point x{-r + i * step};
      if (feasibility(p, x) == 0.0) best = std::min(best, eval_f(p, x).value());
    }
  } else {
    for (int i = 0; i <= cells; ++i) {
      for (int j = 0; j <= cells; ++j) {
        const Point x{-r + i * step, -r + j * step};
        if (feasibility(p, x) == 0.0) best = std::min(best, eval_f(p, x).value());
      }
    }
  }
  return best;
}

}  // namespace

TEST(Builtin, RecordedOptimalValues) {
  EXPECT_EQ(*builtin("disjoint-mult").f_star, -1.0);
  EXPECT_EQ(*builtin("sharp-demo").f_star, 0.0);
  EXPECT_EQ(*builtin("convex-qp").f_star, 1.0);
  EXPECT_EQ(*builtin("arctan-gap").f_star, 0.0);
  EXPECT_THROW(builtin("nope"), DomainError);
}

TEST(Builtin, PointEvaluations) {
  const Problem dm = builtin("disjoint-mult");
  EXPECT_EQ(eval_f(dm, {1.0}).value(), -1.0);
  EXPECT_EQ(feasibility(dm, {1.0}), 0.0);
  EXPECT_EQ(feasibility(dm, {2.0}), 1.0);
  const Problem sd = builtin("sharp-demo");
  EXPECT_EQ(eval_f(sd, {-0.5}).value(), 0.5);
  EXPECT_EQ(feasibility(sd, {-0.5}), 0.0);
  EXPECT_THROW(eval_f(dm, {1.0, 2.0}), StructuralError);
}

TEST(Builtin, WitnessesAreFeasible) {
  for (const auto& name : builtin_names()) {
    const Problem p = builtin(name);
    EXPECT_LE(feasibility(p, p.witness), 1e-12) << name;
    if (p.f_star) EXPECT_NEAR(eval_f(p, p.witness).value(), *p.f_star, 1e-12) << name;
  }
}

TEST(Builtin, ArctanPerturbedValuesApproachMinusOne) {
  const Problem p = builtin("arctan-gap");
  for (double s : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
    // Feasible set {x e^{-x} <= s} on [-1e6, 1e6]: the inf sits at the right end.
    // The engine stops at a box of radius about 1e4, hence the 1e-4 slack.
    double best = std::numeric_limits<double>::infinity();
    for (double x = 0.0; x <= 1e6; x = x < 100.0 ? x + 1e-3 : x * 1.001) {
      if (x * std::exp(-x) <= s) best = std::min(best, -2.0 / std::numbers::pi * std::atan(x));
    }
    best = std::min(best, -2.0 / std::numbers::pi * std::atan(1e6));
    const ExtReal b = beta(p, BlockVec::vec({s}));
    EXPECT_LE(b.value(), best + 1e-4) << s;
    EXPECT_GE(b.value(), -1.0 - 1e-9) << s;
  }
}

TEST(Builtin, GridFindsNothingBelowRecordedOptimum) {
  for (const auto& name : builtin_names()) {
    const Problem p = builtin(name);
    if (!p.f_star) continue;
    if (p.n == 1) {
      EXPECT_GE(grid_feasible_min(p, 100.0, 1e-3), *p.f_star - 1e-6) << name;
    } else {
      EXPECT_GE(grid_feasible_min(p, 3.0, 1e-2), *p.f_star - 1e-6) << name;
      EXPECT_GE(grid_feasible_min(p, 100.0, 0.25), *p.f_star - 1e-6) << name;
    }
  }
}

TEST(Builtin, UnperturbedValueIsOptimalValue) {
  for (const auto& name : builtin_names()) {
    const Problem p = builtin(name);
    EXPECT_NEAR(beta(p, BlockVec::zeros(p.K)).value(), *p.f_star, 1e-6) << name;
  }
}

TEST(Perturbed, ShiftsConstraint) {
  const Problem p = perturbed(builtin("disjoint-mult"), BlockVec::vec({0.5, 0.5}));
  EXPECT_EQ(eval_G(p, {0.0}).to_flat(), (std::vector<double>{-1.5, -1.5}));
  EXPECT_FALSE(p.f_star.has_value());
  EXPECT_THROW(perturbed(builtin("disjoint-mult"), BlockVec::vec({1.0})), StructuralError);
}

TEST(Descriptor, MatchesBuiltinPointwise) {
  const Problem a = problem_from_json(read_fixture("disjoint_mult.json"));
  const Problem b = builtin("disjoint-mult");
  EXPECT_EQ(a.name, "disjoint-mult-json");
  EXPECT_EQ(a.K, b.K);
  EXPECT_EQ(*a.f_star, -1.0);
  for (double x = -5.0; x <= 5.0; x += 0.37) {
    EXPECT_EQ(eval_f(a, {x}).value(), eval_f(b, {x}).value());
    EXPECT_EQ(eval_G(a, {x}).to_flat(), eval_G(b, {x}).to_flat());
  }
}

TEST(Descriptor, RationalProductConeAndBox) {
  const Problem p = problem_from_json(read_fixture("boxed_rational.json"));
  EXPECT_EQ(p.n, 2);
  EXPECT_EQ(p.K.num_blocks(), 2u);
  EXPECT_EQ(p.Q.lo[0], -3.0);
  EXPECT_TRUE(std::isinf(p.Q.lo[1]));
  const BlockVec g = eval_G(p, {2.0, 1.0});
  EXPECT_NEAR(g.block(0).v[0], 0.5, 1e-15);
  EXPECT_NEAR(g.block(1).v[0], -1.0, 1e-15);
  EXPECT_EQ(feasibility(p, {1.0, 0.0}), 0.0);
  EXPECT_NEAR(feasibility(p, {5.0, 0.0}), 2.0 + 4.0, 1e-12);
}

TEST(Descriptor, BuiltinReferenceAndErrors) {
  EXPECT_EQ(problem_from_json(R"({"builtin": "convex-qp"})").name, "convex-qp");
  EXPECT_THROW(problem_from_json(R"({"n": 1, "objective": {"poly": []}, "constraints": [],
                                     "cone": {"kind": "nonpos", "dim": 1}})"),
               StructuralError);
  EXPECT_THROW(problem_from_json(R"({"n": 1, "objective": {"poly": []}, "constraints": [{"poly": []}],
                                     "cone": {"kind": "cube", "dim": 1}})"),
               StructuralError);
  EXPECT_ANY_THROW(problem_from_json("{not json"));
}

TEST(Descriptor, RoundTripsThroughJson) {
  const Problem p = problem_from_json(read_fixture("boxed_rational.json"));
  const Problem q = problem_from_json(problem_to_json(p));
  EXPECT_EQ(problem_to_json(q), problem_to_json(p));
  EXPECT_EQ(eval_G(q, {0.3, -0.7}).to_flat(), eval_G(p, {0.3, -0.7}).to_flat());
}
