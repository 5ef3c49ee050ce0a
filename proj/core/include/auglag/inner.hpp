#pragma once

#include <functional>
#include <optional>
#include <string>

#include "auglag/ext_real.hpp"
#include "auglag/problems.hpp"

namespace auglag {

struct InnerCfg {
  // Grid points per axis for n = 1; higher dimensions use a total budget.
  int grid_points = 4001;
  int grid_budget_2d = 201;
  int grid_budget_nd = 20000;
  double r0 = 10.0;
  int max_doublings = 10;
  // Keep doubling past max_doublings while the minimum still improves by at
  // least this much (0 disables). Used by the epsilon-optimal inner solve.
  double extend_while_improving = 0.0;
  int hard_max_doublings = 60;
  double minus_inf_threshold = -1e12;
  // Decrease ratio between consecutive radii that signals linear or faster
  // divergence.
  double divergence_ratio = 1.5;
  int top_k = 6;
  double x_tol = 1e-10;
  // Refinement also stops once bracket values agree to this tolerance.
  double value_tol = 0.0;
  double tie_tol = 1e-9;
  // Allow n > 5 with a local compass search only.
  bool local_only = false;
};

enum class InnerStatus { Finite, MinusInfinityDetected, MaxBoxReached };

std::string inner_status_name(InnerStatus s);

struct InnerResult {
  ExtReal value;
  // Present iff value is finite and the search converged.
  std::optional<Point> argmin;
  // Best point seen, even when the search did not converge.
  Point best;
  InnerStatus status = InnerStatus::Finite;
  double radius = 0.0;
};

using Objective = std::function<ExtReal(const Point&)>;

// Global minimization of F over Q intersected with growing boxes [-R, R]^n:
// dense grid, refinement of the best local minima, box doubling.
InnerResult global_minimize(const Objective& F, const Box& Q, int n, const InnerCfg& cfg = {});

}  // namespace auglag
