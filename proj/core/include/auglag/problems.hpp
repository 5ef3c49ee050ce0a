#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "auglag/cones.hpp"
#include "auglag/ext_real.hpp"

namespace auglag {

using Point = std::vector<double>;

// Box [lo, hi] per coordinate; infinite bounds allowed.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  static Box whole(int n);
  bool contains(const Point& x) const;
  // Sum of coordinatewise bound violations.
  double violation(const Point& x) const;
};

// min f(x) subject to G(x) in K, x in Q.
struct Problem {
  std::string name;
  int n = 1;
  std::function<ExtReal(const Point&)> f;
  std::function<BlockVec(const Point&)> G;
  ConeSpec K = ConeSpec::nonpos(1);
  Box Q;
  std::optional<double> f_star;
  // A feasible point with finite f.
  Point witness;
  // Known Lagrange multiplier, when recorded.
  std::optional<BlockVec> lambda_star;
  // JSON descriptor this problem was built from ({"builtin": name} for the
  // built-in instances).
  std::string descriptor;
};

std::vector<std::string> builtin_names();
Problem builtin(const std::string& name);

// Same problem with constraint G(x) - p in K.
Problem perturbed(const Problem& base, const BlockVec& p);

ExtReal eval_f(const Problem& prob, const Point& x);
BlockVec eval_G(const Problem& prob, const Point& x);
// dist(G(x), K) plus the box violation.
double feasibility(const Problem& prob, const Point& x);

// Builds a problem from a JSON descriptor, or from {"builtin": name}.
//   {"name": "...", "n": 1,
//    "objective": {"poly": [{"c": -1, "e": [2]}]},
//    "constraints": [{"poly": [...]}, {"num": [...], "den": [...]}],
//    "cone": {"kind": "nonpos", "dim": 2},
//    "box": {"lo": [...], "hi": [...]}, "f_star": -1}
// Constraint entries fill the free coordinates of K in block order.
Problem problem_from_json(const std::string& text);
std::string problem_to_json(const Problem& prob);

}  // namespace auglag
