#include "auglag/axioms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "auglag/errors.hpp"

namespace auglag {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
using Rng = std::mt19937_64;

struct Ctx {
  const PhiSpec& phi;
  const ConeSpec& K;
  const SamplerCfg& cfg;
  Rng rng;
  int used = 0;

  double eval(const BlockVec& y, const BlockVec& l, double c) {
    ++used;
    return phi_eval(phi, y, l, c).value();
  }
  double radius(const std::vector<double>& set, int i) const { return set[static_cast<std::size_t>(i) % set.size()]; }
  double y_radius(int i) const { return radius(cfg.y_radii, i); }
  double l_radius(int i) const { return radius(cfg.lambda_radii, i / static_cast<int>(cfg.y_radii.size())); }
  double c_at(int i) const {
    const int stride = static_cast<int>(cfg.y_radii.size() * cfg.lambda_radii.size());
    return radius(cfg.c_grid, i / stride);
  }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(rng() % n); }
};

double scale_of(std::initializer_list<double> xs) {
  double s = 1.0;
  for (double x : xs) {
    if (std::isfinite(x)) s = std::max(s, std::fabs(x));
  }
  return s;
}

AxiomReport base_report(AxiomId id, const Ctx& ctx) {
  AxiomReport r;
  r.id = id;
  r.tolerance = ctx.cfg.tol;
  return r;
}

AxiomReport finish(AxiomReport r, const Ctx& ctx, Verdict v, std::string note = {}) {
  r.verdict = v;
  r.samples_used = ctx.used;
  if (!note.empty()) r.note = std::move(note);
  return r;
}

AxiomReport fail(AxiomReport r, const Ctx& ctx, const BlockVec& y, const BlockVec& l, double c, double violation,
                 std::string note, std::vector<double> seq = {}) {
  r.witness = Witness{y, l, c, std::move(seq), violation, note};
  return finish(std::move(r), ctx, Verdict::Fail, std::move(note));
}

// Point of K: interior samples, projections (faces) and the origin.
BlockVec y_in_cone(Ctx& ctx, int i, double r) {
  switch (i % 4) {
    case 0: return random_in_cone(ctx.K, ctx.rng, r);
    case 1: return project(random_gaussian(ctx.K, ctx.rng, r), ctx.K);
    case 2: return random_in_cone(ctx.K, ctx.rng, r * ctx.uniform(0.0, 1.0));
    default: return i % 8 == 3 ? BlockVec::zeros(ctx.K) : project(random_gaussian(ctx.K, ctx.rng, r), ctx.K);
  }
}

BlockVec unit(BlockVec v) {
  const double n = euclid_norm(v);
  return n > 0.0 ? (1.0 / n) * v : v;
}

// Pair (p, n) with p in K, n a unit vector of K* orthogonal to p, so that
// dist(p + s n, K) = s.
bool normal_pair(Ctx& ctx, double r, BlockVec& p, BlockVec& n) {
  for (int attempt = 0; attempt < 50; ++attempt) {
    random_complementary(ctx.K, ctx.rng, r, p, n);
    if (euclid_norm(n) > 1e-8) {
      n = unit(n);
      return true;
    }
  }
  return false;
}

// -------------------------------------------------------------- pointwise

AxiomReport check_a1(Ctx& ctx) {
  AxiomReport rep = base_report(AxiomId::A1, ctx);
  for (int i = 0; i < ctx.cfg.n_samples; ++i) {
    const BlockVec y = y_in_cone(ctx, i, ctx.y_radius(i));
    const BlockVec l = sample_multiplier(ctx.phi, ctx.rng, ctx.l_radius(i));
    const double c = ctx.c_at(i);
    const double v = ctx.eval(y, l, c);
    const double tol = 10.0 * ctx.cfg.tol * scale_of({norm(l) * norm(y), norm(l) * norm(l) / c, c * norm(y) * norm(y)});
    if (std::isnan(v) || v > tol) return fail(rep, ctx, y, l, c, v, "Phi > 0 on K");
  }
  return finish(rep, ctx, Verdict::Pass);
}

AxiomReport check_a2(Ctx& ctx) {
  AxiomReport rep = base_report(AxiomId::A2, ctx);
  const BlockVec zero = BlockVec::zeros(ctx.K);
  for (int i = 0; i < ctx.cfg.n_samples; ++i) {
    const BlockVec y = y_in_cone(ctx, i, ctx.y_radius(i));
    const double c = ctx.c_at(i);
    const double v = ctx.eval(y, zero, c);
    if (std::isnan(v) || v < -10.0 * ctx.cfg.tol) {
      return finish(rep, ctx, Verdict::Inconclusive, "registered witness lambda = 0 gives Phi < 0");
    }
  }
  return finish(rep, ctx, Verdict::Pass, "witness lambda = 0");
}

AxiomReport check_a3(Ctx& ctx) {
  AxiomReport rep = base_report(AxiomId::A3, ctx);
  int checked = 0;
  for (int i = 0; i < ctx.cfg.n_samples; ++i) {
    const double r = ctx.y_radius(i);
    const BlockVec y = random_gaussian(ctx.K, ctx.rng, r);
    if (dist_to_cone(y, ctx.K) < 1e-6 * r) continue;
    const BlockVec n = unit(project_polar(y, ctx.K));
    const double c = ctx.c_at(i);
    std::vector<double> vals;
    for (double t : {1.0, 10.0, 100.0, 1000.0}) {
      // Re-projecting removes rounding residue in blocks where n vanishes.
      const BlockVec l = project_multiplier(ctx.phi, (t * std::max(1.0, c)) * n);
      vals.push_back(admissible(ctx.phi, l) ? ctx.eval(y, l, c) : std::numeric_limits<double>::quiet_NaN());
    }
    ++checked;
    if (vals.back() == kInf) continue;
    // Increments over decades of t that do not decay mean at least
    // logarithmic growth.
    const double d1 = vals[2] - vals[1];
    const double d2 = vals[3] - vals[2];
    if (!(d2 > 0.0 && d1 > 0.0 && d2 >= 0.9 * d1)) {
      rep.witness = Witness{y, n, c, vals, 0.0, "no growth along the normal direction"};
      return finish(rep, ctx, Verdict::Inconclusive, "registered witness (normal direction) does not diverge");
    }
  }
  if (checked == 0) return finish(rep, ctx, Verdict::Pass, "vacuous: Y = K");
  return finish(rep, ctx, Verdict::Pass, "witness: unit normal direction scaled by t max(1, c)");
}

AxiomReport check_a4(Ctx& ctx) {
  AxiomReport rep = base_report(AxiomId::A4, ctx);
  for (int i = 0; i < ctx.cfg.n_samples; ++i) {
    BlockVec y;
    BlockVec l;
    random_complementary(ctx.K, ctx.rng, ctx.y_radius(i), y, l);
    const double c = ctx.c_at(i);
    const double v = ctx.eval(y, l, c);
    const double tol = 10.0 * ctx.cfg.tol * scale_of({norm(l) * norm(y), norm(l) * norm(l) / c, c * norm(y) * norm(y)});
    if (!(std::fabs(v) <= tol)) return fail(rep, ctx, y, l, c, std::fabs(v), "Phi != 0 at a complementary pair");
  }
  return finish(rep, ctx, Verdict::Pass);
}

AxiomReport check_a5(Ctx& ctx) {
  AxiomReport rep = base_report(AxiomId::A5, ctx);
  int checked = 0;
  for (int i = 0; i < ctx.cfg.n_samples; ++i) {
    const double r = ctx.y_radius(i);
    const double lr = ctx.l_radius(i);
    BlockVec y;
    BlockVec l;
    switch (i % 3) {
      case 0:
        y = random_in_cone(ctx.K, ctx.rng, r);
        l = random_in_polar(ctx.K, ctx.rng, lr);
        break;
      case 1:
        y = project(random_gaussian(ctx.K, ctx.rng, r), ctx.K);
        l = project_polar(random_gaussian(ctx.K, ctx.rng, lr), ctx.K);
        break;
      default:
        y = project(random_gaussian(ctx.K, ctx.rng, r), ctx.K);
        l = random_in_polar(ctx.K, ctx.rng, lr);
        break;
    }
    if (euclid_norm(y) <= 1e-6 * r || euclid_norm(l) <= 1e-6 * lr) continue;
    if (std::fabs(inner(l, y)) <= 1e-6 * euclid_norm(l) * euclid_norm(y)) continue;
    ++checked;
    const double c = ctx.c_at(i);
    const double v = ctx.eval(y, l, c);
    if (!(v < 0.0)) return fail(rep, ctx, y, l, c, v, "Phi >= 0 although <lambda, y> != 0");
  }
  if (checked == 0) return finish(rep, ctx, Verdict::Pass, "vacuous: <lambda, y> = 0 on K x K*");
  return finish(rep, ctx, Verdict::Pass);
}

AxiomReport check_a6(Ctx& ctx) {
  AxiomReport rep = base_report(AxiomId::A6, ctx);
  if (!lambda_exceeds_polar(ctx.phi)) return finish(rep, ctx, Verdict::Pass, "vacuous: admissible set equals K*");
  for (int i = 0; i < ctx.cfg.n_samples; ++i) {
    BlockVec y;
    switch (i % 3) {
      case 0: y = BlockVec::zeros(ctx.K); break;
      case 1: y = project(random_gaussian(ctx.K, ctx.rng, ctx.y_radius(i)), ctx.K); break;
      default: y = random_in_cone(ctx.K, ctx.rng, ctx.y_radius(i)); break;
    }
    const BlockVec l = sample_multiplier_outside_polar(ctx.phi, ctx.rng, ctx.l_radius(i));
    const double c = ctx.c_at(i);
    const double v = ctx.eval(y, l, c);
    if (!(v < 0.0)) return fail(rep, ctx, y, l, c, v, "Phi >= 0 for a multiplier outside K*");
  }
  return finish(rep, ctx, Verdict::Pass);
}

// -------------------------------------------------------------- shape

// a <= b up to a relative tolerance, with extended-real semantics.
bool leq(double a, double b, double tol) {
  if (std::isnan(a) || std::isnan(b)) return false;
  if (a == -kInf || b == kInf) return true;
  if (a == kInf || b == -kInf) return false;
  return a <= b + tol * scale_of({a, b});
}

AxiomReport check_a7(Ctx& ctx) {
  AxiomReport rep = base_report(AxiomId::A7, ctx);
  std::vector<double> grid = ctx.cfg.c_grid;
  std::sort(grid.begin(), grid.end());
  const double tol = 10.0 * ctx.cfg.tol;
  const int n = std::max(1, ctx.cfg.n_samples / 4);
  for (int i = 0; i < n; ++i) {
    const BlockVec y = random_gaussian(ctx.K, ctx.rng, ctx.y_radius(i));
    const BlockVec l = sample_multiplier(ctx.phi, ctx.rng, ctx.l_radius(i));
    std::vector<double> vals;
    for (double c : grid) vals.push_back(ctx.eval(y, l, c));
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
      if (!leq(vals[k], vals[k + 1], tol)) {
        return fail(rep, ctx, y, l, grid[k + 1], vals[k] - vals[k + 1], "Phi decreases in c", vals);
      }
    }
    double c1 = ctx.log_uniform(0.1, 1e4);
    double c2 = ctx.log_uniform(0.1, 1e4);
    if (c1 > c2) std::swap(c1, c2);
    const double v1 = ctx.eval(y, l, c1);
    const double v2 = ctx.eval(y, l, c2);
    if (!leq(v1, v2, tol)) return fail(rep, ctx, y, l, c2, v1 - v2, "Phi decreases in c", {c1, v1, c2, v2});
  }
  return finish(rep, ctx, Verdict::Pass);
}

// Midpoint test: value at the midpoint against the chord, with
// extended-real semantics. Returns the violation (<= 0 when fine).
double convex_violation(double v1, double v2, double vm) {
  if (v1 == kInf || v2 == kInf) return 0.0;
  if (std::isnan(v1) || std::isnan(v2) || std::isnan(vm)) return kInf;
  if (vm == kInf) return kInf;
  if (vm == -kInf || v1 == -kInf || v2 == -kInf) return 0.0;
  return vm - 0.5 * (v1 + v2);
}

double concave_violation(double v1, double v2, double vm) {
  if (v1 == -kInf || v2 == -kInf) return 0.0;
  if (std::isnan(v1) || std::isnan(v2) || std::isnan(vm)) return kInf;
  if (v1 == kInf || v2 == kInf) return vm == kInf ? 0.0 : kInf;
  if (vm == kInf) return 0.0;
  if (vm == -kInf) return kInf;
  return 0.5 * (v1 + v2) - vm;
}

AxiomReport check_a8(Ctx& ctx) {
  AxiomReport rep = base_report(AxiomId::A8, ctx);
  const double tol = 10.0 * ctx.cfg.tol;
  for (int i = 0; i < ctx.cfg.n_samples; ++i) {
    const double r = ctx.y_radius(i);
    const BlockVec l = sample_multiplier(ctx.phi, ctx.rng, ctx.l_radius(i));
    const double c = ctx.radius(ctx.cfg.c_grid, static_cast<int>(ctx.index(ctx.cfg.c_grid.size())));
    const BlockVec y1 = random_gaussian(ctx.K, ctx.rng, r);
    const BlockVec y2 = i % 2 == 0 ? random_gaussian(ctx.K, ctx.rng, r) : y1 + random_gaussian(ctx.K, ctx.rng, 0.1 * r);
    const BlockVec ym = 0.5 * (y1 + y2);
    const double v1 = ctx.eval(y1, l, c);
    const double v2 = ctx.eval(y2, l, c);
    const double vm = ctx.eval(ym, l, c);
    const double viol = convex_violation(v1, v2, vm);
    if (viol > tol * scale_of({v1, v2, vm})) {
      return fail(rep, ctx, ym, l, c, viol, "midpoint convexity in y fails", {v1, v2, vm});
    }
    // Monotonicity: y1 <= y1 + d for d in -K.
    const BlockVec d = -1.0 * random_in_cone(ctx.K, ctx.rng, r * ctx.uniform(0.0, 1.0));
    const BlockVec y3 = y1 + d;
    const double v3 = ctx.eval(y3, l, c);
    if (!leq(v1, v3, tol)) return fail(rep, ctx, y1, l, c, v1 - v3, "Phi decreases along the cone order", {v1, v3});
  }
  return finish(rep, ctx, Verdict::Pass);
}

AxiomReport check_a9(Ctx& ctx, bool strong) {
  AxiomReport rep = base_report(strong ? AxiomId::A9s : AxiomId::A9, ctx);
  const double tol = 10.0 * ctx.cfg.tol;
  for (int i = 0; i < ctx.cfg.n_samples; ++i) {
    const BlockVec y = random_gaussian(ctx.K, ctx.rng, ctx.y_radius(i));
    const BlockVec l1 = sample_multiplier(ctx.phi, ctx.rng, ctx.l_radius(i));
    const BlockVec l2 = sample_multiplier(ctx.phi, ctx.rng, ctx.radius(ctx.cfg.lambda_radii, static_cast<int>(ctx.index(ctx.cfg.lambda_radii.size()))));
    const BlockVec lm = 0.5 * (l1 + l2);
    double c1 = ctx.c_at(i);
    double c2 = c1;
    if (strong) {
      c1 = ctx.log_uniform(0.1, 100.0);
      c2 = i % 2 == 0 ? ctx.log_uniform(0.1, 100.0) : c1 * ctx.uniform(1.5, 4.0);
    }
    const double cm = 0.5 * (c1 + c2);
    const double v1 = ctx.eval(y, l1, c1);
    const double v2 = ctx.eval(y, l2, c2);
    const double vm = ctx.eval(y, lm, cm);
    const double viol = concave_violation(v1, v2, vm);
    if (viol > tol * scale_of({v1, v2, vm})) {
      return fail(rep, ctx, y, lm, cm, viol, strong ? "midpoint concavity in (lambda, c) fails" : "midpoint concavity in lambda fails",
                  {c1, v1, c2, v2, vm});
    }
  }
  return finish(rep, ctx, Verdict::Pass);
}

AxiomReport check_a10(Ctx& ctx) {
  AxiomReport rep = base_report(AxiomId::A10, ctx);
  const std::vector<double> deltas{1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
  const int n = std::max(1, ctx.cfg.n_samples / 4);
  for (int i = 0; i < n; ++i) {
    const BlockVec y = random_gaussian(ctx.K, ctx.rng, ctx.y_radius(i));
    const BlockVec l = sample_multiplier(ctx.phi, ctx.rng, ctx.l_radius(i));
    const double c = ctx.radius(ctx.cfg.c_grid, static_cast<int>(ctx.index(ctx.cfg.c_grid.size())));
    const double v0 = ctx.eval(y, l, c);
    if (v0 == kInf) continue;
    const BlockVec u = unit(random_gaussian(ctx.K, ctx.rng));
    const double sgn = i % 2 == 0 ? 1.0 : -1.0;
    std::vector<double> jumps;
    bool overflow = false;
    for (double d : deltas) {
      const BlockVec lp = project_multiplier(ctx.phi, l + (d * std::max(1.0, norm(l))) * u);
      const double vp = ctx.eval(y, lp, c * (1.0 + sgn * d));
      // +inf next to a finite value is overflow or the barrier edge; the
      // test is about finite upward jumps.
      if (vp == kInf) overflow = true;
      jumps.push_back(v0 == -kInf ? (vp == -kInf ? 0.0 : kInf) : vp - v0);
    }
    if (overflow) continue;
    const double last = jumps.back();
    const double prev = jumps[jumps.size() - 2];
    if (last > 10.0 * ctx.cfg.tol * scale_of({v0}) && last >= 0.5 * prev) {
      return fail(rep, ctx, y, l, c, last, "upward jump persists as the perturbation vanishes", jumps);
    }
  }
  return finish(rep, ctx, Verdict::Pass);
}

AxiomReport check_a11(Ctx& ctx) {
  AxiomReport rep = base_report(AxiomId::A11, ctx);
  const int d = ctx.K.ambient_dim();
  const int n = std::max(1, ctx.cfg.n_samples / 5);
  for (int i = 0; i < n; ++i) {
    BlockVec y;
    BlockVec l;
    random_complementary(ctx.K, ctx.rng, ctx.y_radius(i), y, l);
    const auto phi0 = phi_zero_map(ctx.phi, l);
    // Large c makes the difference quotients unreliable in double precision.
    const double c = std::min(ctx.c_at(i), 1e4);
    const double h = 1e-6 * std::min(1.0, 1.0 / c);
    const double f0 = ctx.eval(y, l, c);
    for (int j = 0; j < d; ++j) {
      std::vector<double> flat(static_cast<std::size_t>(d), 0.0);
      flat[static_cast<std::size_t>(j)] = 1.0;
      const BlockVec e = BlockVec::from_flat(ctx.K, flat);
      const double fp = ctx.eval(y + h * e, l, c);
      const double fm = ctx.eval(y - h * e, l, c);
      const double fwd = (fp - f0) / h;
      const double bwd = (f0 - fm) / h;
      const double expected = phi0 ? inner(*phi0, e) : 0.0;
      const double sc = std::max({1.0, std::fabs(expected), std::fabs(fwd), std::fabs(bwd)});
      if (!(std::fabs(fwd - bwd) <= 1e-3 * sc)) {
        return fail(rep, ctx, y, l, c, std::fabs(fwd - bwd), "not differentiable at a complementary pair", {bwd, fwd});
      }
      if (!phi0) continue;
      const double central = 0.5 * (fwd + bwd);
      if (!(std::fabs(central - expected) <= 1e-4 * sc)) {
        return fail(rep, ctx, y, l, c, std::fabs(central - expected), "derivative differs from the registered map",
                    {central, expected});
      }
    }
    if (!phi0) continue;
    if (std::fabs(inner(*phi0, y)) > 1e-8 * std::max(1.0, norm(*phi0) * norm(y))) {
      return fail(rep, ctx, y, l, c, std::fabs(inner(*phi0, y)), "<Phi0(lambda), y> != 0 at a complementary pair");
    }
  }
  if (!phi_zero_map(ctx.phi, BlockVec::zeros(ctx.K))) {
    return finish(rep, ctx, Verdict::Inconclusive, "no kink found; family registers no derivative map");
  }
  return finish(rep, ctx, Verdict::Pass);
}

// -------------------------------------------------------------- limits

AxiomReport check_a12(Ctx& ctx, bool strong) {
  AxiomReport rep = base_report(strong ? AxiomId::A12s : AxiomId::A12, ctx);
  std::vector<BlockVec> lambdas{BlockVec::zeros(ctx.K)};
  for (double r : ctx.cfg.lambda_radii) {
    for (int k = 0; k < 3; ++k) lambdas.push_back(sample_multiplier(ctx.phi, ctx.rng, r));
  }
  std::vector<BlockVec> ys;
  for (double r : ctx.cfg.y_radii) {
    for (double s : {r, 2.0 * r, 10.0 * r}) {
      for (int k = 0; k < 6; ++k) {
        BlockVec p;
        BlockVec nrm;
        if (!normal_pair(ctx, ctx.radius(ctx.cfg.y_radii, k), p, nrm)) continue;
        ys.push_back(p + s * nrm);
      }
    }
  }
  if (ys.empty()) return finish(rep, ctx, Verdict::Pass, "vacuous: Y = K");
  std::vector<double> grid = ctx.cfg.c_grid;
  std::sort(grid.begin(), grid.end());
  const double growth = 1e3;
  double worst_all = kInf;
  std::optional<Witness> worst_w;
  for (double c0 : {0.1, 1.0}) {
    for (const auto& l : lambdas) {
      std::vector<double> m;
      double best_here = kInf;
      BlockVec y_best;
      bool any = false;
      for (double c : grid) {
        if (c <= c0) continue;
        double inf_c = kInf;
        for (const auto& y : ys) {
          const double v0 = ctx.eval(y, l, c0);
          if (!std::isfinite(v0)) continue;
          any = true;
          const double v = ctx.eval(y, l, c);
          const double diff = v == kInf ? kInf : std::isnan(v) ? -kInf : v - v0;
          if (diff < inf_c) {
            inf_c = diff;
            if (c == grid.back()) y_best = y;
          }
        }
        m.push_back(inf_c);
        if (c == grid.back()) best_here = inf_c;
      }
      if (!any) continue;
      if (best_here < worst_all) {
        worst_all = best_here;
        worst_w = Witness{y_best, l, grid.back(), m, best_here, "c0 = " + std::to_string(c0)};
      }
      if (!strong && best_here < growth) {
        return fail(rep, ctx, y_best, l, grid.back(), growth - best_here, "penalty term does not grow with c", m);
      }
    }
  }
  if (strong && worst_all < growth && worst_w) {
    rep.witness = worst_w;
    return finish(rep, ctx, Verdict::Fail, "penalty term does not grow with c uniformly in lambda");
  }
  return finish(rep, ctx, Verdict::PassOnHorizon, "growth >= 1e3 at the end of the c-grid");
}

// Values of Phi along R u, R = 10^k; true when the per-step decrease does not
// decay (unbounded below along the ray).
bool ray_diverges(const std::vector<double>& vals) {
  const std::size_t n = vals.size();
  if (n < 6) return false;
  if (vals.back() == -kInf) return true;
  std::vector<double> d;
  for (std::size_t k = n - 5; k < n; ++k) d.push_back(vals[k - 1] - vals[k]);
  const bool all_pos = std::all_of(d.begin(), d.end(), [](double x) { return x > 0.0; });
  return all_pos && d.back() >= 0.5 * d.front();
}

struct RayScan {
  bool diverges_everywhere = false;
  Witness witness;
};

// Unboundedness below along deep interior rays, at every c of the grid.
RayScan scan_rays(Ctx& ctx, const std::vector<BlockVec>& lambdas, const std::vector<BlockVec>& dirs) {
  RayScan out;
  for (const auto& l : lambdas) {
    for (const auto& u : dirs) {
      bool everywhere = true;
      std::vector<double> last_vals;
      for (double c : ctx.cfg.c_grid) {
        std::vector<double> vals;
        for (int k = 0; k <= 100; k += 5) vals.push_back(ctx.eval(std::pow(10.0, k) * u, l, c));
        if (!ray_diverges(vals)) {
          everywhere = false;
          break;
        }
        last_vals = vals;
      }
      if (everywhere) {
        out.diverges_everywhere = true;
        out.witness = Witness{1e100 * u, l, ctx.cfg.c_grid.back(), last_vals, -last_vals.back(),
                              "Phi unbounded below on K along a ray, at every c"};
        return out;
      }
    }
  }
  return out;
}

// Sample points of K for the limit axioms: bounded samples plus, when
// unrestricted, points far out on interior rays.
std::vector<BlockVec> cone_samples(Ctx& ctx, bool restricted, std::vector<BlockVec>& dirs) {
  std::vector<BlockVec> ys;
  for (int i = 0; i < 60; ++i) ys.push_back(y_in_cone(ctx, i, ctx.y_radius(i)));
  for (int k = 0; k < 4; ++k) dirs.push_back(interior_direction(ctx.K, ctx.rng));
  // Far rays are covered by scan_rays; beyond 1e8 rounding of spectral
  // projections dominates the values.
  const int kmax = restricted ? 3 : 8;
  for (const auto& u : dirs) {
    for (int k = 0; k <= kmax; ++k) ys.push_back(std::pow(10.0, k) * u);
  }
  return ys;
}

std::vector<BlockVec> limit_lambdas(Ctx& ctx) {
  std::vector<BlockVec> lambdas{BlockVec::zeros(ctx.K)};
  for (double r : ctx.cfg.lambda_radii) {
    for (int k = 0; k < 3; ++k) lambdas.push_back(sample_multiplier(ctx.phi, ctx.rng, r));
  }
  return lambdas;
}

AxiomReport check_a13(Ctx& ctx, AxiomId id, bool strong, bool restricted) {
  AxiomReport rep = base_report(id, ctx);
  const auto lambdas = limit_lambdas(ctx);
  std::vector<BlockVec> dirs;
  const auto ys = cone_samples(ctx, restricted, dirs);
  if (!restricted) {
    const RayScan rs = scan_rays(ctx, lambdas, dirs);
    if (rs.diverges_everywhere) {
      rep.witness = rs.witness;
      return finish(rep, ctx, Verdict::Fail, rs.witness.note);
    }
  }
  std::vector<double> grid = ctx.cfg.c_grid;
  std::sort(grid.begin(), grid.end());
  const double c_end = grid.back();
  double lmax = 0.0;
  for (const auto& l : lambdas) lmax = std::max(lmax, norm(l));
  for (const auto& l : lambdas) {
    std::vector<double> worst;
    BlockVec y_w;
    for (double c : grid) {
      double w = kInf;
      for (const auto& y : ys) {
        const double v = ctx.eval(y, l, c);
        if (v < w) {
          w = v;
          if (c == c_end) y_w = y;
        }
      }
      // Points just outside K at distance 1/c.
      for (int k = 0; k < 8; ++k) {
        BlockVec p;
        BlockVec n;
        if (!normal_pair(ctx, ctx.y_radius(k), p, n)) break;
        const BlockVec y = p + (1.0 / c) * n;
        const double v = ctx.eval(y, l, c);
        if (v < w) {
          w = v;
          if (c == c_end) y_w = y;
        }
      }
      worst.push_back(w);
    }
    const double level = ctx.cfg.horizon_tol * std::max(1.0, strong ? lmax : norm(l));
    if (worst.back() < -level) {
      return fail(rep, ctx, y_w, l, c_end, -worst.back(), "inf of Phi stays below zero at the end of the c-grid", worst);
    }
  }
  return finish(rep, ctx, Verdict::PassOnHorizon, "inf of Phi near K tends to 0 along the c-grid");
}

AxiomReport check_a14(Ctx& ctx, AxiomId id, bool strong, bool restricted) {
  AxiomReport rep = base_report(id, ctx);
  const auto lambdas = limit_lambdas(ctx);
  std::vector<BlockVec> dirs;
  const auto ys = cone_samples(ctx, restricted, dirs);
  if (!restricted) {
    const RayScan rs = scan_rays(ctx, lambdas, dirs);
    if (rs.diverges_everywhere) {
      rep.witness = rs.witness;
      return finish(rep, ctx, Verdict::Fail, rs.witness.note);
    }
  }
  std::vector<double> grid;
  for (double c : ctx.cfg.c_grid) {
    if (c >= 1.0) grid.push_back(c);
  }
  std::sort(grid.begin(), grid.end());
  if (grid.empty()) return finish(rep, ctx, Verdict::Inconclusive, "c-grid has no value >= 1");
  const double c_end = grid.back();
  double lmax = 0.0;
  for (const auto& l : lambdas) lmax = std::max(lmax, norm(l));
  for (const auto& l : lambdas) {
    std::vector<double> worst;
    BlockVec y_w;
    for (double c : grid) {
      const double t = std::min(1.0, 1.0 / (c * c));
      double w = 0.0;
      auto consider = [&](const BlockVec& y) {
        const double v = std::fabs(ctx.eval(y, l, c));
        if (!(v <= w)) {
          w = std::isnan(v) ? kInf : v;
          if (c == c_end) y_w = y;
        }
      };
      for (const auto& y : ys) consider(y);
      for (int k = 0; k < 8; ++k) {
        BlockVec p;
        BlockVec n;
        if (!normal_pair(ctx, ctx.y_radius(k), p, n)) break;
        consider(p + (t * (k % 2 == 0 ? 1.0 : 0.5)) * n);
      }
      worst.push_back(w);
    }
    const double level = ctx.cfg.horizon_tol * std::max(1.0, strong ? lmax : norm(l));
    if (worst.back() > level) {
      return fail(rep, ctx, y_w, l, c_end, worst.back(), "|Phi| does not vanish within dist <= min(1, 1/c^2)", worst);
    }
  }
  return finish(rep, ctx, Verdict::PassOnHorizon, "candidate t_n = min(1, 1/c_n^2)");
}

AxiomReport check_a15(Ctx& ctx, AxiomId id, bool restricted) {
  AxiomReport rep = base_report(id, ctx);
  const std::vector<double> deltas{1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
  std::vector<double> sup(deltas.size(), -kInf);
  Witness w;
  const int n = std::max(1, ctx.cfg.n_samples / 5);
  std::vector<BlockVec> dirs;
  for (int k = 0; k < 4; ++k) dirs.push_back(interior_direction(ctx.K, ctx.rng));
  for (int i = 0; i < n; ++i) {
    const BlockVec l = sample_multiplier(ctx.phi, ctx.rng, ctx.l_radius(i));
    const double c = ctx.radius({0.1, 1.0, 10.0}, i);
    BlockVec p;
    BlockVec nrm;
    if (!normal_pair(ctx, ctx.y_radius(i), p, nrm)) break;
    if (i % 3 == 1) p = p + (restricted ? 1e2 : 1e4) * dirs[static_cast<std::size_t>(i) % dirs.size()];
    if (i % 3 == 2) p = p + (restricted ? 1e3 : 1e8) * dirs[static_cast<std::size_t>(i) % dirs.size()];
    for (std::size_t k = 0; k < deltas.size(); ++k) {
      const BlockVec y = p + deltas[k] * nrm;
      const double v = ctx.eval(y, l, c);
      if (v > sup[k]) {
        sup[k] = v;
        if (k + 1 == deltas.size()) w = Witness{y, l, c, {}, v, "Phi stays positive as dist(y, K) -> 0"};
      }
    }
  }
  const double last = sup.back();
  const double prev = sup[sup.size() - 2];
  if (last > 10.0 * ctx.cfg.tol && last >= 0.5 * prev) {
    w.sequence = sup;
    rep.witness = w;
    return finish(rep, ctx, Verdict::Fail, w.note);
  }
  return finish(rep, ctx, Verdict::PassOnHorizon, "sup of Phi near K vanishes with the distance");
}

std::uint64_t seed_for(const SamplerCfg& cfg, AxiomId id) {
  return cfg.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(id) + 1;
}

}  // namespace

std::string axiom_name(AxiomId id) {
  switch (id) {
    case AxiomId::A1: return "A1";
    case AxiomId::A2: return "A2";
    case AxiomId::A3: return "A3";
    case AxiomId::A4: return "A4";
    case AxiomId::A5: return "A5";
    case AxiomId::A6: return "A6";
    case AxiomId::A7: return "A7";
    case AxiomId::A8: return "A8";
    case AxiomId::A9: return "A9";
    case AxiomId::A9s: return "A9s";
    case AxiomId::A10: return "A10";
    case AxiomId::A11: return "A11";
    case AxiomId::A12: return "A12";
    case AxiomId::A12s: return "A12s";
    case AxiomId::A13: return "A13";
    case AxiomId::A13s: return "A13s";
    case AxiomId::A14: return "A14";
    case AxiomId::A14s: return "A14s";
    case AxiomId::A15: return "A15";
    case AxiomId::A13r: return "A13r";
    case AxiomId::A13sr: return "A13sr";
    case AxiomId::A14r: return "A14r";
    case AxiomId::A14sr: return "A14sr";
    case AxiomId::A15r: return "A15r";
    case AxiomId::A16: return "A16";
  }
  return "?";
}

AxiomId parse_axiom(const std::string& name) {
  for (AxiomId id : all_axioms()) {
    if (axiom_name(id) == name) return id;
  }
  if (name == "A16") return AxiomId::A16;
  throw DomainError("unknown axiom: " + name);
}

std::vector<AxiomId> all_axioms() {
  return {AxiomId::A1,  AxiomId::A2,   AxiomId::A3,   AxiomId::A4,   AxiomId::A5,   AxiomId::A6,
          AxiomId::A7,  AxiomId::A8,   AxiomId::A9,   AxiomId::A9s,  AxiomId::A10,  AxiomId::A11,
          AxiomId::A12, AxiomId::A12s, AxiomId::A13,  AxiomId::A13s, AxiomId::A14,  AxiomId::A14s,
          AxiomId::A15, AxiomId::A13r, AxiomId::A13sr, AxiomId::A14r, AxiomId::A14sr, AxiomId::A15r};
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::PassOnHorizon: return "pass-on-horizon";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

AxiomReport check_axiom(AxiomId id, const PhiSpec& phi_in, const ConeSpec& K, const SamplerCfg& cfg) {
  const PhiSpec phi = phi_in.cone() == K ? phi_in : phi_in.rebind(K);
  Ctx ctx{phi, phi.cone(), cfg, Rng(seed_for(cfg, id))};
  switch (id) {
    case AxiomId::A1: return check_a1(ctx);
    case AxiomId::A2: return check_a2(ctx);
    case AxiomId::A3: return check_a3(ctx);
    case AxiomId::A4: return check_a4(ctx);
    case AxiomId::A5: return check_a5(ctx);
    case AxiomId::A6: return check_a6(ctx);
    case AxiomId::A7: return check_a7(ctx);
    case AxiomId::A8: return check_a8(ctx);
    case AxiomId::A9: return check_a9(ctx, false);
    case AxiomId::A9s: return check_a9(ctx, true);
    case AxiomId::A10: return check_a10(ctx);
    case AxiomId::A11: return check_a11(ctx);
    case AxiomId::A12: return check_a12(ctx, false);
    case AxiomId::A12s: return check_a12(ctx, true);
    case AxiomId::A13: return check_a13(ctx, id, false, false);
    case AxiomId::A13s: return check_a13(ctx, id, true, false);
    case AxiomId::A13r: return check_a13(ctx, id, false, true);
    case AxiomId::A13sr: return check_a13(ctx, id, true, true);
    case AxiomId::A14: return check_a14(ctx, id, false, false);
    case AxiomId::A14s: return check_a14(ctx, id, true, false);
    case AxiomId::A14r: return check_a14(ctx, id, false, true);
    case AxiomId::A14sr: return check_a14(ctx, id, true, true);
    case AxiomId::A15: return check_a15(ctx, id, false);
    case AxiomId::A15r: return check_a15(ctx, id, true);
    case AxiomId::A16: return check_lemma_a16(phi, K, cfg);
  }
  throw DomainError("unknown axiom");
}

AxiomReport check_lemma_a16(const PhiSpec& phi_in, const ConeSpec& K, const SamplerCfg& cfg,
                            std::optional<BlockVec> lambda) {
  const PhiSpec phi = phi_in.cone() == K ? phi_in : phi_in.rebind(K);
  Ctx ctx{phi, phi.cone(), cfg, Rng(seed_for(cfg, AxiomId::A16))};
  AxiomReport rep = base_report(AxiomId::A16, ctx);
  std::vector<BlockVec> lambdas;
  if (lambda) {
    lambdas.push_back(*lambda);
  } else {
    lambdas = limit_lambdas(ctx);
  }
  std::vector<BlockVec> ys;
  for (int i = 0; i < 100; ++i) ys.push_back(y_in_cone(ctx, i, ctx.y_radius(i)));
  for (int k = 0; k < 4; ++k) {
    const BlockVec u = interior_direction(ctx.K, ctx.rng);
    for (double R : {1e2, 1e3}) ys.push_back(R * u);
  }
  std::vector<double> grid = cfg.c_grid;
  std::sort(grid.begin(), grid.end());
  for (const auto& l : lambdas) {
    std::vector<double> infs;
    BlockVec y_w;
    for (double c : grid) {
      double m = kInf;
      for (const auto& y : ys) {
        const double v = ctx.eval(y, l, c);
        if (v < m) {
          m = v;
          y_w = y;
        }
      }
      infs.push_back(m);
    }
    // Running inf over the tail of the grid.
    const double tail = infs.back();
    if (tail < -cfg.horizon_tol) {
      return fail(rep, ctx, y_w, l, grid.back(), -tail, "inf over K of Phi stays negative as c grows", infs);
    }
  }
  return finish(rep, ctx, Verdict::PassOnHorizon, "inf over sampled y in K at the end of the c-grid");
}

CompositionReport check_composition(const std::vector<PhiSpec>& parts, const SamplerCfg& cfg) {
  if (parts.size() < 2) throw DomainError("composition needs at least two parts");
  CompositionReport out;
  const PhiSpec comp = compose_separable(parts);
  const auto ids = all_axioms();
  for (const auto& p : parts) {
    std::vector<AxiomReport> reps;
    for (AxiomId id : ids) reps.push_back(check_axiom(id, p, p.cone(), cfg));
    out.parts.push_back(std::move(reps));
  }
  for (AxiomId id : ids) out.composite.push_back(check_axiom(id, comp, comp.cone(), cfg));

  auto index_of = [&](AxiomId id) {
    return static_cast<std::size_t>(std::find(ids.begin(), ids.end(), id) - ids.begin());
  };
  auto all_parts_pass = [&](std::initializer_list<AxiomId> req) {
    for (const auto& reps : out.parts) {
      for (AxiomId id : req) {
        if (!passes(reps[index_of(id)].verdict)) return false;
      }
    }
    return true;
  };
  auto require = [&](AxiomId target, std::initializer_list<AxiomId> premises, const char* group) {
    if (!all_parts_pass(premises)) return;
    const Verdict v = out.composite[index_of(target)].verdict;
    if (!passes(v)) {
      std::ostringstream os;
      os << group << ": parts pass";
      for (AxiomId p : premises) os << " " << axiom_name(p);
      os << " but the composite gives " << verdict_name(v) << " on " << axiom_name(target);
      out.violations.push_back(os.str());
    }
  };
  for (AxiomId id : ids) {
    if (id == AxiomId::A5 || id == AxiomId::A6 || id == AxiomId::A12 || id == AxiomId::A12s) continue;
    require(id, {id}, "group 1");
  }
  require(AxiomId::A5, {AxiomId::A1, AxiomId::A5}, "group 2");
  require(AxiomId::A6, {AxiomId::A1, AxiomId::A6}, "group 2");
  require(AxiomId::A12, {AxiomId::A7, AxiomId::A12}, "group 3");
  require(AxiomId::A12s, {AxiomId::A7, AxiomId::A12s}, "group 3");
  return out;
}

std::vector<FamilyClaims> claims_fixture() {
  using A = AxiomId;
  const ConeSpec ineq = ConeSpec::nonpos(2);
  const ConeSpec soc = ConeSpec::soc(3);
  const std::vector<A> barrier_limits{A::A13, A::A13s, A::A14, A::A14s};
  auto with = [](std::vector<A> a, const std::vector<A>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  return {
      {"rw-halfsq", PhiSpec::rockafellar_wets(ineq, RwSigma::HalfSqNorm), {}, {}},
      {"rw-norm", PhiSpec::rockafellar_wets(ineq, RwSigma::Norm), {A::A5, A::A6, A::A11}, {}},
      {"hp-eq", PhiSpec::hestenes_powell_eq(2), {}, {}},
      {"sharp-eq", PhiSpec::sharp_eq(2), {A::A11}, {A::A5, A::A6}},
      {"mangasarian-eq-quartic", PhiSpec::mangasarian_eq(2, ScalarFn::even_power(2)), {A::A9, A::A9s}, {}},
      {"mangasarian-eq-quadratic", PhiSpec::mangasarian_eq(2, ScalarFn::quadratic(0.5)), {}, {}},
      {"essentially-quadratic", PhiSpec::essentially_quadratic(2, ScalarFn::quadratic(0.5)), {}, {}},
      {"essentially-quadratic-quartic", PhiSpec::essentially_quadratic(2, ScalarFn::even_power(2)), {A::A9s}, {}},
      {"cubic", PhiSpec::cubic(2), {A::A9, A::A9s}, {}},
      {"mangasarian-ineq-quartic", PhiSpec::mangasarian_ineq(2, ScalarFn::even_power(2)), {A::A9, A::A9s}, {}},
      {"exponential", PhiSpec::exponential(2, ScalarFn::expm1()), {A::A9s, A::A12, A::A12s}, {}},
      {"exponential-log-sigmoid", PhiSpec::exponential(2, ScalarFn::log_sigmoid()), {A::A9s, A::A12, A::A12s}, {}},
      {"penalized-exponential", PhiSpec::penalized_exponential(2), {A::A9s}, {}},
      {"pth-power", PhiSpec::pth_power(2, ScalarFn::exp(), 0.0), {A::A9s, A::A12, A::A12s}, {}},
      {"hyperbolic", PhiSpec::hyperbolic(2), {A::A9, A::A9s, A::A12, A::A12s}, {}},
      {"carrol", PhiSpec::modified_barrier(2, ScalarFn::inv_m1()), {A::A9s}, {}},
      {"frisch", PhiSpec::modified_barrier(2, ScalarFn::neg_log1m()), with({A::A9s}, barrier_limits), {}},
      {"he-wu-meng", PhiSpec::he_wu_meng(2), with({A::A6, A::A9, A::A9s}, barrier_limits), {}},
      {"soc-hpr", PhiSpec::soc_hpr(soc), {}, {}},
      {"soc-exp", PhiSpec::soc_exp(soc, ScalarFn::expm1()), {A::A8, A::A9s, A::A12, A::A12s}, {}},
      // -ln(1 - t) is SOC-monotone and SOC-convex, so A8 holds here.
      {"soc-frisch", PhiSpec::soc_exp(soc, ScalarFn::neg_log1m()), with({A::A9s}, barrier_limits), {}},
      {"sdp-hpr", PhiSpec::sdp_hpr(2), {}, {}},
      {"sdp-exp", PhiSpec::sdp_exp(2, ScalarFn::expm1()), {A::A9s, A::A12, A::A12s}, {A::A8}},
      {"sdp-frisch", PhiSpec::sdp_exp(2, ScalarFn::neg_log1m()), with({A::A9s}, barrier_limits), {}},
      {"sdp-penalized-exp", PhiSpec::sdp_penalized_exp(2), {A::A9s}, {A::A8}},
  };
}

}  // namespace auglag
