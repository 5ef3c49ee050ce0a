#pragma once

// Shared sampling loops for the unit and acceptance suites.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "auglag/axioms.hpp"
#include "auglag/dual.hpp"
#include "auglag/errors.hpp"
#include "auglag/phi.hpp"
#include "oracles.hpp"

namespace support {

inline oracle::Mat to_mat(const auglag::Block& b) {
  oracle::Mat m(static_cast<std::size_t>(b.order), std::vector<double>(static_cast<std::size_t>(b.order)));
  for (int i = 0; i < b.order; ++i)
    for (int j = 0; j < b.order; ++j) m[i][j] = b.at(i, j);
  return m;
}

inline auglag::Block random_sym(std::mt19937_64& rng, int n, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  auglag::Block b{std::vector<double>(static_cast<std::size_t>(n * n)), n};
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) b.at(i, j) = b.at(j, i) = g(rng);
  return b;
}

inline bool is_smooth_family(const std::string& key) { return key != "rw-norm" && key != "sharp-eq"; }

struct FdStats {
  int points = 0;
  int skipped = 0;
  int bad = 0;
  double worst = 0.0;
};

// Compares phi_grad_y with central differences along every flat coordinate
// at random interior points. Points whose stencil leaves dom Phi or hits a
// kink are redrawn.
inline FdStats fd_gradient_check(const auglag::PhiSpec& phi, int points, std::uint64_t seed, double rel_tol = 1e-5,
                                 double h = 1e-6) {
  using namespace auglag;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> cdist(0.5, 4.0);
  const ConeSpec& K = phi.cone();
  const int d = K.ambient_dim();
  FdStats st;
  int attempts = 0;
  while (st.points < points && attempts < 50 * points) {
    ++attempts;
    const BlockVec y = random_gaussian(K, rng, 0.5);
    const BlockVec l = sample_multiplier(phi, rng, 1.0);
    const double c = cdist(rng);
    BlockVec g;
    try {
      g = phi_grad_y(phi, y, l, c);
    } catch (const KinkError&) {
      ++st.skipped;
      continue;
    } catch (const DomainError&) {
      ++st.skipped;
      continue;
    }
    bool finite = true;
    std::vector<double> fd(static_cast<std::size_t>(d)), an(static_cast<std::size_t>(d));
    for (int k = 0; k < d && finite; ++k) {
      std::vector<double> e(static_cast<std::size_t>(d), 0.0);
      e[static_cast<std::size_t>(k)] = 1.0;
      const BlockVec dir = BlockVec::from_flat(K, e);
      const double fp = phi_eval(phi, y + h * dir, l, c).value();
      const double fm = phi_eval(phi, y - h * dir, l, c).value();
      finite = std::isfinite(fp) && std::isfinite(fm);
      fd[static_cast<std::size_t>(k)] = (fp - fm) / (2.0 * h);
      an[static_cast<std::size_t>(k)] = inner(g, dir);
    }
    if (!finite) {
      ++st.skipped;
      continue;
    }
    ++st.points;
    double scale = 1.0;
    for (double v : an) scale = std::max(scale, std::fabs(v));
    double err = 0.0;
    for (int k = 0; k < d; ++k) {
      err = std::max(err, std::fabs(fd[static_cast<std::size_t>(k)] - an[static_cast<std::size_t>(k)]) / scale);
    }
    st.worst = std::max(st.worst, err);
    if (err > rel_tol) ++st.bad;
  }
  return st;
}

// Fixture families that can be bound to the cone of prob.
inline std::vector<std::pair<std::string, auglag::PhiSpec>> families_for(const auglag::Problem& prob) {
  using namespace auglag;
  std::vector<std::pair<std::string, PhiSpec>> out;
  for (const auto& fc : claims_fixture()) {
    try {
      out.emplace_back(fc.key, fc.phi.rebind(prob.K));
    } catch (const StructuralError&) {
    }
  }
  return out;
}

// Feasible points scattered around the witness (feasibility exactly 0).
inline std::vector<auglag::Point> feasible_samples(const auglag::Problem& prob, int count, std::mt19937_64& rng) {
  using namespace auglag;
  std::vector<Point> out{prob.witness};
  std::normal_distribution<double> g(0.0, 1.0);
  for (int tries = 0; static_cast<int>(out.size()) < count && tries < 200 * count; ++tries) {
    Point x = prob.witness;
    const double scale = std::pow(10.0, std::uniform_real_distribution<double>(-2.0, 1.0)(rng));
    for (double& xi : x) xi += scale * g(rng);
    if (feasibility(prob, x) == 0.0 && eval_f(prob, x).is_finite()) out.push_back(std::move(x));
  }
  return out;
}

struct WeakDualityStats {
  long tuples = 0;
  long violations = 0;
  double worst = -std::numeric_limits<double>::infinity();
  std::string worst_case;
};

struct WeakDualityCfg {
  // Multipliers per (problem, family). rw-norm evaluates a root-find per call,
  // which makes the two-variable grids slow, so it gets its own counts.
  int lambdas_1d = 50;
  int lambdas_nd = 5;
  int rw_norm_1d = 10;
  int rw_norm_nd = 1;
  std::vector<double> cs{0.5, 1.0, 2.0, 8.0, 32.0};
  int feasible = 20;
  std::uint64_t seed = 42;
  double tol = 1e-8;
};

// Theta(lambda, c) <= f(x) + tol for sampled multipliers, penalties and
// feasible x, over every builtin and every family bindable to its cone.
inline WeakDualityStats weak_duality_sweep(const WeakDualityCfg& cfg) {
  using namespace auglag;
  WeakDualityStats st;
  std::mt19937_64 rng(cfg.seed);
  for (const auto& name : builtin_names()) {
    const Problem prob = builtin(name);
    const auto xs = feasible_samples(prob, cfg.feasible, rng);
    double fmin = std::numeric_limits<double>::infinity();
    for (const auto& x : xs) fmin = std::min(fmin, eval_f(prob, x).value());
    for (const auto& [key, phi] : families_for(prob)) {
      const bool heavy = key == "rw-norm";
      const int nl = prob.n == 1 ? (heavy ? cfg.rw_norm_1d : cfg.lambdas_1d) : (heavy ? cfg.rw_norm_nd : cfg.lambdas_nd);
      for (int k = 0; k < nl; ++k) {
        const double scale = std::pow(10.0, std::uniform_real_distribution<double>(-1.0, 1.0)(rng));
        const BlockVec l = sample_multiplier(phi, rng, scale);
        for (double c : cfg.cs) {
          const double th = theta(prob, phi, l, c).value.value();
          st.tuples += static_cast<long>(xs.size());
          const double excess = th - fmin;
          if (excess > st.worst) {
            st.worst = excess;
            st.worst_case = name + "/" + key + " c=" + std::to_string(c);
          }
          if (excess > cfg.tol) {
            for (const auto& x : xs) st.violations += th > eval_f(prob, x).value() + cfg.tol ? 1 : 0;
          }
        }
      }
    }
  }
  return st;
}

}  // namespace support
