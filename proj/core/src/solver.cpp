#include "auglag/solver.hpp"

#include <algorithm>
#include <cmath>

#include "auglag/errors.hpp"

namespace auglag {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double point_norm(const Point& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double point_dist(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// Limit-detection horizon: the last quarter of the trace, at least 2 rows.
std::size_t tail_start(std::size_t n) {
  const std::size_t len = std::max<std::size_t>(2, (n + 3) / 4);
  return n > len ? n - len : 0;
}

constexpr double kCauchyTol = 1e-4;

// Smallest period p <= 4 such that each residue class of the tail is Cauchy
// under dist; returns the period and the index of the last element of each
// class.
template <class Dist>
std::optional<std::pair<int, std::vector<std::size_t>>> cauchy_period(std::size_t n, Dist dist) {
  const std::size_t t0 = tail_start(n);
  for (int p = 1; p <= 4; ++p) {
    const auto up = static_cast<std::size_t>(p);
    if (n - t0 < 2 * up) break;
    bool ok = true;
    for (std::size_t k = t0; k + up < n && ok; ++k) ok = dist(k, k + up) <= kCauchyTol;
    if (!ok) continue;
    std::vector<std::size_t> last;
    for (std::size_t k = n - up; k < n; ++k) last.push_back(k);
    return std::make_pair(p, last);
  }
  return std::nullopt;
}

// Sup over the tail is within a factor 2 of the sup over the head.
template <class Norm>
bool bounded_on_horizon(std::size_t n, Norm nrm) {
  const std::size_t t0 = tail_start(n);
  double head = 0.0;
  double tail = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double v = nrm(k);
    if (!std::isfinite(v)) return false;
    (k < t0 ? head : tail) = std::max(k < t0 ? head : tail, v);
  }
  return tail <= 2.0 * std::max(1.0, head);
}

BlockVec apply_safeguard(const PhiSpec& phi, const BlockVec& l, double bound) {
  std::vector<Block> blocks = l.blocks();
  for (auto& b : blocks) {
    for (double& x : b.v) x = std::clamp(x, -bound, bound);
  }
  return project_multiplier(phi, BlockVec(std::move(blocks)));
}

}  // namespace

std::string multiplier_rule_name(MultiplierRule r) {
  switch (r) {
    case MultiplierRule::ClassicHpr: return "classic-hpr";
    case MultiplierRule::Frozen: return "frozen";
    case MultiplierRule::Custom: return "custom";
  }
  return "?";
}

MultiplierRule parse_multiplier_rule(const std::string& s) {
  if (s == "classic-hpr") return MultiplierRule::ClassicHpr;
  if (s == "frozen") return MultiplierRule::Frozen;
  if (s == "custom") return MultiplierRule::Custom;
  throw DomainError("unknown multiplier rule: " + s);
}

std::string termination_name(Termination t) {
  switch (t) {
    case Termination::MaxIter: return "max_iter";
    case Termination::FeasEpsOptimal: return "feas+eps-optimal";
    case Termination::CDiverged: return "c-diverged";
    case Termination::LUnboundedBelow: return "L-unbounded-below";
  }
  return "?";
}

Termination parse_termination(const std::string& s) {
  for (Termination t : {Termination::MaxIter, Termination::FeasEpsOptimal, Termination::CDiverged,
                        Termination::LUnboundedBelow}) {
    if (termination_name(t) == s) return t;
  }
  throw DomainError("unknown termination: " + s);
}

void SolverCfg::validate() const {
  if (!(c_min > 0.0)) throw DomainError("c_min must be positive");
  if (!(c0 >= c_min)) throw DomainError("c0 must be >= c_min");
  if (!(tau > 0.0 && tau < 1.0)) throw DomainError("tau must lie in (0, 1)");
  if (!(gamma > 1.0)) throw DomainError("gamma must be > 1");
  if (!(eps >= 0.0)) throw DomainError("eps must be >= 0");
  if (eps_mode == EpsMode::Geometric && !(eps_ratio > 0.0 && eps_ratio < 1.0)) {
    throw DomainError("geometric eps ratio must lie in (0, 1)");
  }
  if (max_iter < 1) throw DomainError("max_iter must be >= 1");
  if (!(c_max >= c0)) throw DomainError("c_max must be >= c0");
  if (rule == MultiplierRule::Custom && !custom_update) throw DomainError("custom multiplier rule without an update");
  if (safeguard_box && !(*safeguard_box > 0.0)) throw DomainError("safeguard box must be positive");
}

double epsilon_at(const SolverCfg& cfg, int n) {
  return cfg.eps_mode == EpsMode::Constant ? cfg.eps : cfg.eps * std::pow(cfg.eps_ratio, n);
}

InnerSolve inner_solve(const Problem& prob, const PhiSpec& phi, const BlockVec& lambda, double c, double eps,
                       const InnerCfg& cfg) {
  InnerCfg icfg = cfg;
  if (eps > 0.0) {
    // Keep enlarging the box while it still buys more than eps/2, and stop
    // refining once the bracket is eps/2-flat.
    if (icfg.extend_while_improving <= 0.0) icfg.extend_while_improving = 0.5 * eps;
    if (icfg.value_tol <= 0.0) icfg.value_tol = 0.5 * eps;
  }
  const InnerResult r =
      global_minimize([&](const Point& x) { return lagrangian(prob, phi, x, lambda, c); }, prob.Q, prob.n, icfg);
  InnerSolve out;
  out.status = r.status;
  out.certified = r.argmin.has_value();
  out.x = r.argmin ? *r.argmin : r.best;
  out.value = r.status == InnerStatus::MinusInfinityDetected ? ExtReal::neg_inf() : lagrangian(prob, phi, out.x, lambda, c);
  return out;
}

bool update_is_experimental(const ConeSpec& K) {
  for (const auto& k : K.primitives()) {
    if (k.kind() == ConeKind::SecondOrder || k.kind() == ConeKind::NegSemidef) return true;
  }
  return false;
}

BlockVec update_multiplier_classic(const ConeSpec& K, const BlockVec& lambda, double c, const BlockVec& g) {
  if (!lambda.matches(K) || !g.matches(K)) throw StructuralError("multiplier update: blocks do not match " + K.describe());
  return project_polar(lambda + c * g, K);
}

BlockVec shifted_feasibility(const ConeSpec& K, const BlockVec& g, const BlockVec& mu, double c) {
  return project(g + (1.0 / c) * mu, K) - g;
}

double update_penalty_classic(double c, double v_norm, double v_prev_norm, double tau, double gamma, int n) {
  if (n == 0 || v_norm <= tau * v_prev_norm) return c;
  return gamma * c;
}

RunReport run(const Problem& prob, const PhiSpec& phi, const SolverCfg& cfg) {
  cfg.validate();
  if (!(phi.cone() == prob.K)) throw StructuralError("penalty family bound to " + phi.cone().describe());
  if (!cfg.lambda0.matches(prob.K)) throw StructuralError("lambda0 does not match " + prob.K.describe());
  if (!admissible(phi, cfg.lambda0)) throw AdmissibilityError("lambda0 outside the admissible set of " + phi.label());

  RunReport rep;
  rep.problem = prob.name;
  rep.phi = phi.label();
  rep.experimental_update = cfg.rule == MultiplierRule::ClassicHpr && update_is_experimental(prob.K);

  BlockVec lambda = cfg.lambda0;
  double c = cfg.c0;
  double v_prev = 0.0;
  for (int n = 0; n < cfg.max_iter; ++n) {
    const double eps = epsilon_at(cfg, n);
    const InnerSolve in = inner_solve(prob, phi, lambda, c, eps, cfg.inner);
    if (in.status == InnerStatus::MinusInfinityDetected || in.value.is_neg_inf()) {
      rep.termination = Termination::LUnboundedBelow;
      break;
    }
    IterateRecord rec;
    rec.n = n;
    rec.x = in.x;
    rec.lambda = lambda;
    rec.c = c;
    rec.eps = eps;
    rec.L = in.value.value();
    rec.theta_lb = rec.L - eps;
    rec.f = eval_f(prob, in.x).value();
    rec.feas = feasibility(prob, in.x);
    rec.certified = in.certified;

    const BlockVec g = eval_G(prob, in.x);
    BlockVec next;
    switch (cfg.rule) {
      case MultiplierRule::ClassicHpr: next = update_multiplier_classic(prob.K, lambda, c, g); break;
      case MultiplierRule::Frozen: next = lambda; break;
      case MultiplierRule::Custom: next = cfg.custom_update(lambda, c, g); break;
    }
    if (cfg.safeguard_box) next = apply_safeguard(phi, next, *cfg.safeguard_box);

    rec.V = shifted_feasibility(prob.K, g, cfg.v_uses_updated ? next : lambda, c);
    rec.v_norm = euclid_norm(rec.V);
    rep.trace.push_back(rec);

    if (cfg.stop_tol && rec.feas <= *cfg.stop_tol && rec.v_norm <= *cfg.stop_tol) {
      rep.termination = Termination::FeasEpsOptimal;
      break;
    }
    const double c_next = std::max(cfg.c_min, update_penalty_classic(c, rec.v_norm, v_prev, cfg.tau, cfg.gamma, n));
    if (c_next > cfg.c_max) {
      rep.termination = Termination::CDiverged;
      break;
    }
    v_prev = rec.v_norm;
    lambda = next;
    c = c_next;
  }
  rep.monitors = compute_monitors(rep.trace);
  return rep;
}

Monitors compute_monitors(const std::vector<IterateRecord>& trace) {
  Monitors m;
  const std::size_t n = trace.size();
  if (n == 0) return m;
  const std::size_t t0 = tail_start(n);

  m.b2_bounded = bounded_on_horizon(n, [&](std::size_t k) { return euclid_norm(trace[k].lambda); });
  m.primal_bounded = bounded_on_horizon(n, [&](std::size_t k) { return point_norm(trace[k].x); });

  bool c_flat_tail = true;
  for (std::size_t k = t0 + 1; k < n; ++k) c_flat_tail = c_flat_tail && trace[k].c == trace[t0].c;
  double tail_feas = 0.0;
  for (std::size_t k = t0; k < n; ++k) tail_feas = std::max(tail_feas, trace[k].feas);
  m.b3_feas_to_zero = !c_flat_tail || tail_feas <= 1e-3;

  bool c_monotone = true;
  for (std::size_t k = 1; k < n; ++k) c_monotone = c_monotone && trace[k].c >= trace[k - 1].c;
  m.b4_monotone_divergence = c_flat_tail || c_monotone;

  if (const auto p = cauchy_period(n, [&](std::size_t a, std::size_t b) {
        return point_dist(trace[a].x, trace[b].x) / std::max(1.0, point_norm(trace[b].x));
      })) {
    LimitPoint lp;
    lp.period = p->first;
    for (std::size_t k : p->second) lp.points.push_back(trace[k].x);
    m.primal_limit = lp;
  }
  if (const auto p = cauchy_period(n, [&](std::size_t a, std::size_t b) {
        const double dl = euclid_norm(trace[a].lambda - trace[b].lambda) / std::max(1.0, euclid_norm(trace[b].lambda));
        const double dc = std::fabs(trace[a].c - trace[b].c) / std::max(1.0, trace[b].c);
        return std::max(dl, dc);
      })) {
    DualLimit dl;
    dl.period = p->first;
    for (std::size_t k : p->second) dl.points.emplace_back(trace[k].lambda, trace[k].c);
    m.dual_limit = dl;
  }
  return m;
}

bool verify_lemma51(const Problem& prob, const PhiSpec& phi, const std::vector<IterateRecord>& trace,
                    const Lemma51Cfg& cfg) {
  if (phi.family() == Family::SocExpBarrier) {
    throw UnsupportedError(phi.label() + " is not monotone in the cone order");
  }
  if (trace.empty()) return true;
  const std::size_t n = trace.size();
  const std::size_t checks = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, cfg.max_checks)));
  for (std::size_t j = 0; j < checks; ++j) {
    const std::size_t k = checks == 1 ? 0 : j * (n - 1) / (checks - 1);
    const IterateRecord& rec = trace[k];
    const BlockVec gn = eval_G(prob, rec.x);
    // inf f over {x in Q : G(x) - G(x_n) in K}.
    const InnerResult r = global_minimize(
        [&](const Point& x) -> ExtReal {
          if (!prob.Q.contains(x)) return ExtReal::pos_inf();
          if (!(dist_to_cone(eval_G(prob, x) - gn, prob.K) <= 1e-10)) return ExtReal::pos_inf();
          return eval_f(prob, x);
        },
        prob.Q, prob.n, cfg.inner);
    if (r.value.value() < rec.f - rec.eps - cfg.tol) return false;
  }
  return true;
}

Diagnosis classify_limit(const Problem& prob, const PhiSpec& phi, const RunReport& run,
                         std::optional<double> theta_star_val, const InnerCfg& cfg) {
  Diagnosis d;
  if (run.trace.empty()) {
    d.notes.push_back("empty trace");
    return d;
  }
  d.eps_star = run.trace.back().eps;
  d.theta_star = theta_star_val ? ExtReal(*theta_star_val) : theta_star(prob, phi, std::nullopt, default_c_schedule(), cfg).theta_star;
  const double tol = 1e-3;
  const Monitors& m = run.monitors;

  if (m.dual_limit) {
    bool ok = true;
    for (const auto& [l, c] : m.dual_limit->points) {
      const ExtReal th = theta(prob, phi, l, c, cfg).value;
      ok = ok && th.value() >= d.theta_star.value() - d.eps_star - tol;
    }
    d.dual_limit_optimal = ok;
    d.notes.push_back(ok ? "dual limit point is eps*-optimal for the dual problem"
                         : "dual limit point is not eps*-optimal for the dual problem");
  } else if (run.termination == Termination::CDiverged || !m.b2_bounded) {
    d.notes.push_back("no dual limit point: the penalty or the multipliers diverge, consistent with the dual problem having no optimal solution");
  } else {
    d.notes.push_back("no dual limit point detected on the horizon");
  }

  if (m.primal_limit) {
    if (prob.f_star) {
      const double gap = std::max(0.0, *prob.f_star - d.theta_star.value());
      bool ok = true;
      for (const auto& x : m.primal_limit->points) {
        ok = ok && feasibility(prob, x) <= tol && eval_f(prob, x).value() <= *prob.f_star + (d.eps_star - gap) + tol;
      }
      d.primal_limit_optimal = ok;
      d.notes.push_back(ok ? "primal limit points are feasible and eps*-optimal"
                           : "primal limit points are not eps*-optimal");
    } else {
      d.notes.push_back("primal limit detected; optimal value unknown");
    }
  } else if (!m.primal_bounded) {
    d.notes.push_back("primal iterates are unbounded: no primal limit point");
  } else {
    d.notes.push_back("no primal limit point detected on the horizon");
  }

  if (m.primal_limit && m.dual_limit && m.primal_limit->period == 1 && m.dual_limit->period == 1) {
    const auto& [l, c] = m.dual_limit->points.front();
    d.saddle = check_saddle(prob, phi, m.primal_limit->points.front(), l, c, SampleCfg{}, cfg);
    d.notes.push_back(d.saddle->is_gsp_witness ? "limit triple is a global saddle point"
                                               : "limit triple is an eps-saddle point");
  }
  return d;
}

}  // namespace auglag
