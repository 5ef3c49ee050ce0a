#include "auglag/dual.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "auglag/errors.hpp"

namespace auglag {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool family_has_growth(const PhiSpec& phi) {
  switch (phi.family()) {
    case Family::ExponentialType:
    case Family::PthPower:
    case Family::HyperbolicType:
      return false;
    case Family::SocExpBarrier:
    case Family::SdpExpBarrier:
      return std::isfinite(phi.gen().eps0());
    case Family::Separable:
      return std::all_of(phi.parts().begin(), phi.parts().end(), family_has_growth);
    default:
      return true;
  }
}

}  // namespace

ExtReal lagrangian(const Problem& prob, const PhiSpec& phi, const Point& x, const BlockVec& lambda, double c) {
  if (!prob.Q.contains(x)) return ExtReal::pos_inf();
  const ExtReal fx = eval_f(prob, x);
  if (fx.is_nan()) return ExtReal::pos_inf();
  const ExtReal ph = phi_eval(phi, eval_G(prob, x), lambda, c);
  if (ph.is_nan()) return ExtReal::pos_inf();
  return ext_add(fx, ph);
}

DualEval theta(const Problem& prob, const PhiSpec& phi, const BlockVec& lambda, double c, const InnerCfg& cfg) {
  if (!(c > 0.0)) throw DomainError("penalty parameter must be positive");
  if (!lambda.matches(phi.cone())) throw StructuralError("lambda does not match " + phi.cone().describe());
  if (!admissible(phi, lambda)) throw AdmissibilityError("multiplier outside the admissible set of " + phi.label());
  if (!(phi.cone() == prob.K)) throw StructuralError("penalty family bound to " + phi.cone().describe() + ", problem uses " + prob.K.describe());
  const InnerResult r = global_minimize([&](const Point& x) { return lagrangian(prob, phi, x, lambda, c); }, prob.Q,
                                        prob.n, cfg);
  return DualEval{r.value, r.argmin, r.status};
}

ExtReal beta(const Problem& prob, const BlockVec& p, const InnerCfg& cfg) {
  if (!p.matches(prob.K)) throw StructuralError("perturbation does not match " + prob.K.describe());
  const InnerResult r = global_minimize(
      [&](const Point& x) -> ExtReal {
        if (!prob.Q.contains(x)) return ExtReal::pos_inf();
        const BlockVec g = eval_G(prob, x) - p;
        if (!(dist_to_cone(g, prob.K) <= 1e-10)) return ExtReal::pos_inf();
        return eval_f(prob, x);
      },
      prob.Q, prob.n, cfg);
  return r.value;
}

std::vector<double> default_c_schedule() {
  std::vector<double> out;
  for (double c = 4.0; c <= 16384.0; c *= 2.0) out.push_back(c);
  return out;
}

GapReport theta_star(const Problem& prob, const PhiSpec& phi, std::optional<BlockVec> lambda0,
                     std::vector<double> c_schedule, const InnerCfg& cfg, std::uint64_t seed) {
  if (c_schedule.empty()) throw DomainError("empty penalty schedule");
  std::sort(c_schedule.begin(), c_schedule.end());
  GapReport rep;
  rep.f_star = prob.f_star;
  rep.c_schedule = c_schedule;
  rep.formula_guaranteed = family_has_growth(phi);

  auto scan = [&](const BlockVec& l) {
    std::vector<ExtReal> vals;
    for (double c : c_schedule) vals.push_back(theta(prob, phi, l, c, cfg).value);
    return vals;
  };
  auto any_finite = [](const std::vector<ExtReal>& v) {
    return std::any_of(v.begin(), v.end(), [](ExtReal x) { return x.is_finite(); });
  };
  BlockVec l0 = lambda0.value_or(BlockVec::zeros(prob.K));
  std::vector<ExtReal> vals = scan(l0);
  if (!any_finite(vals) && !lambda0) {
    std::mt19937_64 rng(seed);
    for (int k = 0; k < 20 && !any_finite(vals); ++k) {
      l0 = sample_multiplier(phi, rng, 1.0);
      vals = scan(l0);
    }
  }
  rep.lambda0_used = l0;
  rep.theta_values = vals;
  ExtReal ts = ExtReal::neg_inf();
  for (ExtReal v : vals) ts = std::max(ts, v);
  rep.theta_star = ts;
  if (!ts.is_finite()) rep.status = "dom-empty";

  // liminf of beta near 0 over a shrinking grid of coordinate perturbations.
  const int d = prob.K.ambient_dim();
  const ExtReal beta0 = beta(prob, BlockVec::zeros(prob.K), cfg);
  for (int k = 1; k <= 6; ++k) {
    const double s = std::pow(10.0, -k);
    ExtReal m = ExtReal::pos_inf();
    for (int j = 0; j < d; ++j) {
      for (double sgn : {1.0, -1.0}) {
        std::vector<double> flat(static_cast<std::size_t>(d), 0.0);
        flat[static_cast<std::size_t>(j)] = sgn * s;
        m = std::min(m, beta(prob, BlockVec::from_flat(prob.K, flat), cfg));
      }
    }
    rep.p_scales.push_back(s);
    rep.beta_minima.push_back(m);
  }
  rep.liminf_beta = std::min(beta0, rep.beta_minima.back());
  const double fs = prob.f_star.value_or(beta0.value());
  if (ts.is_finite()) {
    rep.gap = ExtReal(std::max(0.0, fs - ts.value()));
  } else {
    rep.gap = ExtReal::pos_inf();
  }
  return rep;
}

ExtReal penalty_map(const Problem& prob, const PhiSpec& phi, const BlockVec& lambda, double theta_star_val,
                    double tol, double c_max, const InnerCfg& cfg) {
  if (!std::isfinite(theta_star_val)) throw DomainError("penalty map needs a finite dual optimal value");
  auto ok = [&](double c) { return theta(prob, phi, lambda, c, cfg).value >= ExtReal(theta_star_val - tol); };
  if (!ok(c_max)) return ExtReal::pos_inf();
  double hi = c_max;
  double lo = 0.0;
  // Geometric descent until the threshold is bracketed, then bisection.
  while (hi > 1e-4) {
    const double mid = hi / 2.0;
    if (ok(mid)) {
      hi = mid;
    } else {
      lo = mid;
      break;
    }
  }
  if (lo == 0.0) return ExtReal(0.0);
  while (hi - lo > 1e-4 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (ok(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return ExtReal(hi);
}

SaddleReport check_saddle(const Problem& prob, const PhiSpec& phi, const Point& x_star, const BlockVec& lambda_star,
                          double c, const SampleCfg& sample, const InnerCfg& cfg) {
  if (!(c > 0.0)) throw DomainError("penalty parameter must be positive");
  const ExtReal l_star = lagrangian(prob, phi, x_star, lambda_star, c);
  std::mt19937_64 rng(sample.seed);
  ExtReal sup = l_star;
  auto consider = [&](const BlockVec& l) {
    if (admissible(phi, l)) sup = std::max(sup, lagrangian(prob, phi, x_star, l, c));
  };
  for (double r : sample.radii) {
    for (int k = 0; k < sample.per_radius; ++k) consider(sample_multiplier(phi, rng, r));
  }
  const int d = prob.K.ambient_dim();
  for (int j = 0; j < d; ++j) {
    for (double t : {1.0, 10.0, 100.0, 1000.0}) {
      for (double sgn : {1.0, -1.0}) {
        std::vector<double> flat(static_cast<std::size_t>(d), 0.0);
        flat[static_cast<std::size_t>(j)] = sgn * t;
        consider(lambda_star + BlockVec::from_flat(prob.K, flat));
      }
    }
  }
  const ExtReal th = theta(prob, phi, lambda_star, c, cfg).value;
  auto excess = [](ExtReal a, ExtReal b) {
    if (a.is_pos_inf() || b.is_neg_inf()) return kInf;
    if (a.is_neg_inf() || b.is_pos_inf()) return 0.0;
    return std::max(0.0, a.value() - b.value());
  };
  const double left = excess(sup, l_star);
  const double right = excess(l_star, th);
  SaddleReport rep;
  rep.worst_violation = std::max(left, right);
  rep.is_gsp_witness = rep.worst_violation <= sample.tol;
  rep.epsilon = std::max(left / 2.0, right);
  return rep;
}

bool check_alm(const Problem& prob, const PhiSpec& phi, const BlockVec& lambda, const std::vector<double>& c_schedule,
               double tol, const InnerCfg& cfg) {
  if (!prob.f_star) throw DomainError("check_alm needs a known optimal value");
  const double fs = *prob.f_star;
  for (double c : c_schedule) {
    const DualEval d = theta(prob, phi, lambda, c, cfg);
    if (!(d.value >= ExtReal(fs - tol)) || !d.argmin) continue;
    const Point& x = *d.argmin;
    if (feasibility(prob, x) <= std::sqrt(tol) && eval_f(prob, x) <= ExtReal(fs + tol)) return true;
  }
  return false;
}

}  // namespace auglag
