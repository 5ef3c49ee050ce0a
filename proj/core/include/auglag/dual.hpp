#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "auglag/ext_real.hpp"
#include "auglag/inner.hpp"
#include "auglag/phi.hpp"
#include "auglag/problems.hpp"

namespace auglag {

// L(x, lambda, c) = f(x) + Phi(G(x), lambda, c); +inf outside Q.
ExtReal lagrangian(const Problem& prob, const PhiSpec& phi, const Point& x, const BlockVec& lambda, double c);

struct DualEval {
  ExtReal value;
  std::optional<Point> argmin;
  InnerStatus status = InnerStatus::Finite;
};

DualEval theta(const Problem& prob, const PhiSpec& phi, const BlockVec& lambda, double c, const InnerCfg& cfg = {});

// Optimal value of the problem with constraint G(x) - p in K.
ExtReal beta(const Problem& prob, const BlockVec& p, const InnerCfg& cfg = {});

struct GapReport {
  ExtReal theta_star;
  std::optional<double> f_star;
  ExtReal gap;
  ExtReal liminf_beta;
  BlockVec lambda0_used;
  std::vector<double> c_schedule;
  std::vector<ExtReal> theta_values;
  // Magnitudes of the perturbation grid and the minimum of beta at each.
  std::vector<double> p_scales;
  std::vector<ExtReal> beta_minima;
  // "ok", or "dom-empty" when no finite dual value was found.
  std::string status = "ok";
  // False for families without the growth assumption that makes the
  // c-limit equal the dual optimal value.
  bool formula_guaranteed = true;
};

std::vector<double> default_c_schedule();

// Dual optimal value as the c-limit of theta(lambda0, .); lambda0 defaults
// to 0 and falls back to sampled multipliers when theta(0, .) is -inf.
GapReport theta_star(const Problem& prob, const PhiSpec& phi, std::optional<BlockVec> lambda0 = std::nullopt,
                     std::vector<double> c_schedule = default_c_schedule(), const InnerCfg& cfg = {},
                     std::uint64_t seed = 42);

// Smallest c with theta(lambda, c) >= theta_star_val - tol; +inf when even
// c_max fails.
ExtReal penalty_map(const Problem& prob, const PhiSpec& phi, const BlockVec& lambda, double theta_star_val,
                    double tol = 1e-8, double c_max = 1e6, const InnerCfg& cfg = {});

struct SampleCfg {
  std::uint64_t seed = 42;
  int per_radius = 30;
  std::vector<double> radii{1.0, 10.0, 100.0};
  double tol = 1e-8;
};

struct SaddleReport {
  bool is_gsp_witness = false;
  double worst_violation = 0.0;
  // Smallest eps with sup_l L(x*, l) - 2 eps <= L(x*, l*) <= inf_x L(x, l*) + eps.
  double epsilon = 0.0;
};

SaddleReport check_saddle(const Problem& prob, const PhiSpec& phi, const Point& x_star, const BlockVec& lambda_star,
                          double c, const SampleCfg& sample = {}, const InnerCfg& cfg = {});

// True iff theta(lambda, c) >= f_star - tol for some scheduled c and the
// corresponding minimizer is feasible and optimal within tol.
bool check_alm(const Problem& prob, const PhiSpec& phi, const BlockVec& lambda,
               const std::vector<double>& c_schedule = default_c_schedule(), double tol = 1e-6,
               const InnerCfg& cfg = {});

}  // namespace auglag
