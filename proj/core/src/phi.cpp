#include "auglag/phi.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <sstream>

#include "auglag/errors.hpp"

namespace auglag {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_generator(const ScalarFn& f, std::initializer_list<ScalarKind> allowed, const char* family) {
  if (std::find(allowed.begin(), allowed.end(), f.kind()) == allowed.end()) {
    throw DomainError(std::string(family) + ": generator " + f.name() + " violates the family hypotheses");
  }
}

void require_kind(const ConeSpec& K, ConeKind kind, const char* family) {
  for (const auto& p : K.primitives()) {
    if (p.kind() != kind) throw StructuralError(std::string(family) + ": unsupported cone " + K.describe());
  }
}

// ---------------------------------------------------------------- scalar kernels

double hpr_component(double y, double l, double c) {
  const double m = std::max(y, -l / c);
  return l * m + 0.5 * c * m * m;
}

double mangasarian_eq_component(const ScalarFn& phi, double y, double l, double c) {
  return (phi.value(c * y + l) - phi.value(l)) / c;
}

double ess_quad_component(const ScalarFn& phi, double y, double l, double c) {
  const double s = c * y;
  if (l + phi.d1(s) >= 0.0) return (l * s + phi.value(s)) / c;
  const double t = phi.d1_inverse(-l);
  return (l * t + phi.value(t)) / c;
}

double cubic_component(double y, double l, double c) {
  const double r = std::sqrt(std::fabs(l));
  const double s = l > 0 ? r : (l < 0 ? -r : 0.0);
  const double m = std::max(s + c * y, 0.0);
  return (m * m * m - r * r * r) / (3.0 * c);
}

double mangasarian_ineq_component(const ScalarFn& phi, double y, double l, double c) {
  return (phi.value(std::max(c * y + l, 0.0)) - phi.value(l)) / c;
}

double exp_component(const ScalarFn& phi, double y, double l, double c) {
  if (l == 0.0) return 0.0;
  return l / c * phi.value(c * y);
}

double pth_component(const ScalarFn& phi, double b, double y, double l, double c) {
  const double v = phi.value(y + b);
  if (v < 0.0) return kInf;
  if (l == 0.0) return 0.0;
  const double r = v / phi.value(b);
  return l / (c + 1.0) * (std::pow(r, c + 1.0) - 1.0);
}

double barrier_component(const ScalarFn& phi, double y, double l, double c) {
  if (c * y >= phi.eps0()) return kInf;
  if (l == 0.0) return 0.0;
  return l / c * phi.value(c * y);
}

double hwm_component(double y, double l, double c) {
  if (l == 0.0) return 0.5 * c * y * (y + std::fabs(y));
  const double s = c * y;
  const double h = std::hypot(s, l);
  const double l2 = l * l;
  if (y >= 0.0) {
    return 0.5 * y * h + 0.5 * c * y * y + l2 / (2.0 * c) * (std::log(h + s) - std::log(std::fabs(l)));
  }
  // h + s cancels for s < 0; use (h + s)(h - s) = l^2.
  const double hm = h - s;
  return 0.5 * y * l2 / hm + l2 / (2.0 * c) * (std::log(std::fabs(l)) - std::log(hm));
}

// ---------------------------------------------------------------- block helpers

double sqnorm(const Block& b) {
  double s = 0.0;
  for (double x : b.v) s += x * x;
  return s;
}

// Projection of one block onto the polar of the primitive cone k.
Block polar_block(const Block& b, const ConeSpec& k) {
  return project_polar(BlockVec({b}), k).block(0);
}

// (1/2c)(|Pi_{K*}(cy + l)|^2 - |l|^2) on a single block.
double hpr_block(const Block& y, const Block& l, const ConeSpec& k, double c) {
  switch (k.kind()) {
    case ConeKind::NonposOrthant: {
      double s = 0.0;
      for (std::size_t i = 0; i < y.v.size(); ++i) s += hpr_component(y.v[i], l.v[i], c);
      return s;
    }
    case ConeKind::Zero: {
      double s = 0.0;
      for (std::size_t i = 0; i < y.v.size(); ++i) s += l.v[i] * y.v[i] + 0.5 * c * y.v[i] * y.v[i];
      return s;
    }
    default: {
      Block z = y;
      for (std::size_t i = 0; i < z.v.size(); ++i) z.v[i] = c * y.v[i] + l.v[i];
      const Block p = polar_block(z, k);
      return (sqnorm(p) - sqnorm(l)) / (2.0 * c);
    }
  }
}

Block hpr_grad_block(const Block& y, const Block& l, const ConeSpec& k, double c) {
  Block z = y;
  for (std::size_t i = 0; i < z.v.size(); ++i) z.v[i] = c * y.v[i] + l.v[i];
  return polar_block(z, k);
}

std::vector<double> soc_jacobian_apply(const ScalarFn& psi, const std::vector<double>& z,
                                       const std::vector<double>& v) {
  const std::size_t d = z.size();
  double nz = 0.0;
  for (std::size_t i = 1; i < d; ++i) nz += z[i] * z[i];
  nz = std::sqrt(nz);
  std::vector<double> out(d, 0.0);
  if (nz == 0.0) {
    const double g = psi.d1(z[0]);
    for (std::size_t i = 0; i < d; ++i) out[i] = g * v[i];
    return out;
  }
  const double m1 = z[0] - nz;
  const double m2 = z[0] + nz;
  const double a = (psi.value(m2) - psi.value(m1)) / (m2 - m1);
  const double b = 0.5 * (psi.d1(m2) + psi.d1(m1));
  const double cc = 0.5 * (psi.d1(m2) - psi.d1(m1));
  double wv = 0.0;
  for (std::size_t i = 1; i < d; ++i) wv += z[i] / nz * v[i];
  out[0] = b * v[0] + cc * wv;
  for (std::size_t i = 1; i < d; ++i) {
    const double w = z[i] / nz;
    out[i] = cc * w * v[0] + a * v[i] + (b - a) * w * wv;
  }
  return out;
}

// Divided differences of psi at the spectrum (Daleckii-Krein kernel).
double divided_difference(const ScalarFn& psi, double a, double b) {
  if (std::fabs(a - b) <= 1e-10 * std::max(1.0, std::max(std::fabs(a), std::fabs(b)))) {
    return psi.d1(0.5 * (a + b));
  }
  return (psi.value(a) - psi.value(b)) / (a - b);
}

std::vector<BlockVec> split_parts(const PhiSpec& spec, const BlockVec& v) {
  std::vector<BlockVec> out;
  std::size_t k = 0;
  for (const auto& p : spec.parts()) {
    const std::size_t nb = p.cone().num_blocks();
    std::vector<Block> blocks(v.blocks().begin() + static_cast<std::ptrdiff_t>(k),
                              v.blocks().begin() + static_cast<std::ptrdiff_t>(k + nb));
    out.emplace_back(std::move(blocks));
    k += nb;
  }
  return out;
}

BlockVec join_parts(const std::vector<BlockVec>& parts) {
  std::vector<Block> blocks;
  for (const auto& p : parts) blocks.insert(blocks.end(), p.blocks().begin(), p.blocks().end());
  return BlockVec(std::move(blocks));
}

// ---------------------------------------------------------------- RW pieces

ExtReal rw_norm_eval(const ConeSpec& K, const BlockVec& y, const BlockVec& lambda, double c) {
  const auto prims = K.primitives();
  if (prims.size() == 1 && prims[0].kind() == ConeKind::NonposOrthant && prims[0].dim() == 1) {
    const double yy = y.block(0).v[0];
    const double l = lambda.block(0).v[0];
    if (l < -c) return ExtReal::neg_inf();
    if (l > c) return ExtReal(l * yy + c * std::fabs(yy));
    return ExtReal((l + c) * std::max(0.0, yy));
  }
  // sup{<mu, y> : mu in K*, |mu - lambda| <= c}
  const BlockVec pl = project_polar(lambda, K);
  if (euclid_norm(lambda - pl) > c * (1.0 + 1e-12)) return ExtReal::neg_inf();
  const double ny = euclid_norm(y);
  if (ny == 0.0) return ExtReal(0.0);
  // mu(t) = P_{K*}(lambda + t y) traces the maximizers as the ball grows;
  // |mu(t) - lambda| is nondecreasing. By Moreau, <mu(t), y> equals
  // <mu, mu - lambda> / t, which stays accurate for large t and is bounded
  // by (|lambda| + c) c / t.
  auto mu_at = [&](double t) { return project_polar(lambda + t * y, K); };
  auto gap_at = [&](double t) { return euclid_norm(mu_at(t) - lambda); };
  auto val_at = [&](double t) {
    const BlockVec mu = mu_at(t);
    return t * ny > 1.0 ? inner(mu, mu - lambda) / t : inner(mu, y);
  };
  const double bound = (euclid_norm(lambda) + c) * c;
  double best = inner(pl, y);
  double hi = c / ny;
  while (gap_at(hi) < c) {
    best = std::max(best, val_at(hi));
    // Ball never binds: the sup is lim <mu(t), y> = 0.
    if (bound / hi <= 1e-14 * std::max(1.0, bound)) return ExtReal(0.0);
    hi *= 2.0;
  }
  // Illinois iteration on gap(t) = c; lo stays strictly inside the ball.
  double lo = 0.0, hlo = gap_at(lo) - c, hhi = gap_at(hi) - c;
  int side = 0;
  double root = lo;
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    double t = hhi > hlo ? lo - hlo * (hi - lo) / (hhi - hlo) : 0.5 * (lo + hi);
    if (!(t > lo && t < hi)) t = 0.5 * (lo + hi);
    const double h = gap_at(t) - c;
    if (h < 0.0) {
      lo = t;
      hlo = h;
      if (side == -1) hhi *= 0.5;
      side = -1;
    } else {
      hi = t;
      hhi = h;
      if (side == 1) hlo *= 0.5;
      side = 1;
    }
    root = lo;
    if (std::fabs(h) <= 1e-13 * c) {
      root = t;
      break;
    }
  }
  return ExtReal(root > 0.0 ? std::max(best, val_at(root)) : best);
}

// Points z of K on a grid; returns the best objective value found.
ExtReal rw_grid_eval(const ConeSpec& K, const BlockVec& y, const BlockVec& lambda, double c,
                     const RwGridCfg& cfg, const ScalarFn& profile) {
  const int d = K.ambient_dim();
  if (d > 3) throw UnsupportedError("custom-grid Rockafellar-Wets evaluation needs ambient dimension <= 3");
  auto objective = [&](const std::vector<double>& zf) -> double {
    const BlockVec z = BlockVec::from_flat(K, zf);
    if (dist_to_cone(z, K) > 1e-12 * std::max(1.0, norm(z))) return kInf;
    const BlockVec p = z - y;
    return -inner(lambda, p) + c * profile.value(euclid_norm(p));
  };
  const int per_axis = d == 1 ? 2001 : (d == 2 ? 201 : 41);
  double prev = kInf;
  double radius = std::max(cfg.r0, 2.0 * (norm(y) + norm(lambda) / c));
  std::vector<double> center = project(y, K).to_flat();
  for (int level = 0; level <= cfg.max_doublings; ++level, radius *= 2.0) {
    std::vector<double> best_z(static_cast<std::size_t>(d), 0.0);
    double best = kInf;
    bool on_boundary = false;
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    std::vector<double> z(static_cast<std::size_t>(d));
    while (true) {
      for (int a = 0; a < d; ++a) {
        z[static_cast<std::size_t>(a)] =
            center[static_cast<std::size_t>(a)] - radius + 2.0 * radius * idx[static_cast<std::size_t>(a)] / (per_axis - 1);
      }
      const double v = objective(z);
      if (v < best) {
        best = v;
        best_z = z;
        on_boundary = std::any_of(idx.begin(), idx.end(), [&](int i) { return i == 0 || i == per_axis - 1; });
      }
      int a = 0;
      while (a < d && ++idx[static_cast<std::size_t>(a)] == per_axis) idx[static_cast<std::size_t>(a++)] = 0;
      if (a == d) break;
    }
    // Compass refinement.
    double step = 2.0 * radius / (per_axis - 1);
    while (step > 1e-12 * std::max(1.0, radius)) {
      bool improved = false;
      for (int a = 0; a < d && !improved; ++a) {
        for (double sgn : {1.0, -1.0}) {
          auto trial = best_z;
          trial[static_cast<std::size_t>(a)] += sgn * step;
          const double v = objective(trial);
          if (v < best) {
            best = v;
            best_z = trial;
            improved = true;
            break;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    if (best < cfg.minus_inf_threshold) return ExtReal::neg_inf();
    if (!on_boundary && prev - best <= 1e-12 * std::max(1.0, std::fabs(best))) return ExtReal(best);
    if (!on_boundary && level > 0) return ExtReal(std::min(best, prev));
    prev = std::min(prev, best);
  }
  return ExtReal(prev);
}

// ---------------------------------------------------------------- evaluation core

double eval_vector_family(const PhiSpec& s, const Block& y, const Block& l, double c) {
  double total = 0.0;
  for (std::size_t i = 0; i < y.v.size(); ++i) {
    const double yi = y.v[i];
    const double li = l.v[i];
    double v = 0.0;
    switch (s.family()) {
      case Family::HestenesPowellEq: v = li * yi + 0.5 * c * yi * yi; break;
      case Family::MangasarianEq: v = mangasarian_eq_component(s.gen(), yi, li, c); break;
      case Family::EssentiallyQuadratic: v = ess_quad_component(s.gen(), yi, li, c); break;
      case Family::Cubic: v = cubic_component(yi, li, c); break;
      case Family::MangasarianIneq: v = mangasarian_ineq_component(s.gen(), yi, li, c); break;
      case Family::ExponentialType: v = exp_component(s.gen(), yi, li, c); break;
      case Family::PenalizedExponential:
        v = exp_component(s.gen(), yi, li, c) + s.aux().value(c * yi) / c;
        break;
      case Family::PthPower: v = pth_component(s.gen(), s.shift(), yi, li, c); break;
      case Family::HyperbolicType: v = s.gen().value(c * li * yi) / c; break;
      case Family::ModifiedBarrier: v = barrier_component(s.gen(), yi, li, c); break;
      case Family::HeWuMeng: v = hwm_component(yi, li, c); break;
      default: throw StructuralError("not a componentwise family");
    }
    total += v;
  }
  return total;
}

ExtReal eval_unchecked(const PhiSpec& s, const BlockVec& y, const BlockVec& l, double c) {
  const auto prims = s.cone().primitives();
  switch (s.family()) {
    case Family::Separable: {
      const auto ys = split_parts(s, y);
      const auto ls = split_parts(s, l);
      ExtReal total(0.0);
      for (std::size_t i = 0; i < ys.size(); ++i) total = ext_add(total, eval_unchecked(s.parts()[i], ys[i], ls[i], c));
      return total;
    }
    case Family::RockafellarWets:
      return rw_phi_eval(s.sigma(), s.cone(), y, l, c, s.grid(), s.gen());
    case Family::SharpEq: {
      return ExtReal(inner(l, y) + c * euclid_norm(y));
    }
    case Family::SocHPR:
    case Family::SdpHPR: {
      double total = 0.0;
      for (std::size_t i = 0; i < prims.size(); ++i) total += hpr_block(y.block(i), l.block(i), prims[i], c);
      return ExtReal(total);
    }
    case Family::SocExpBarrier: {
      double total = 0.0;
      for (std::size_t i = 0; i < prims.size(); ++i) {
        // Spectral form: sum_k <-lambda, u_k> psi(s_k) / c with s_k the
        // eigenvalues of -c y; the weights are >= 0 for admissible lambda,
        // so overflow reads as +inf.
        const std::vector<double>& yb = y.block(i).v;
        const std::vector<double>& lb = l.block(i).v;
        double nb = 0.0;
        double lbar = 0.0;
        for (std::size_t k = 1; k < yb.size(); ++k) nb += yb[k] * yb[k];
        nb = std::sqrt(nb);
        for (std::size_t k = 1; k < yb.size(); ++k) lbar += lb[k] * (nb > 0.0 ? yb[k] / nb : 0.0);
        const double s_hi = -c * (yb[0] - nb);
        const double s_lo = -c * (yb[0] + nb);
        if (s_hi >= s.gen().eps0()) return ExtReal::pos_inf();
        const double w_hi = std::max(0.0, 0.5 * (-lb[0] + lbar));
        const double w_lo = std::max(0.0, 0.5 * (-lb[0] - lbar));
        for (const auto& [w, sk] : {std::pair{w_hi, s_hi}, std::pair{w_lo, s_lo}}) {
          if (w == 0.0) continue;
          total += w * s.gen().value(sk) / c;
        }
      }
      return ExtReal(total);
    }
    case Family::SdpExpBarrier:
    case Family::SdpPenalizedExp: {
      double total = 0.0;
      for (std::size_t i = 0; i < prims.size(); ++i) {
        Block cy = y.block(i);
        for (double& x : cy.v) x *= c;
        const SymEig e = sym_eig(cy);
        if (e.values.back() >= s.gen().eps0()) return ExtReal::pos_inf();
        const int n = e.order;
        const Block& lb = l.block(i);
        for (int k = 0; k < n; ++k) {
          const double* q = e.vectors.data() + static_cast<std::ptrdiff_t>(k) * n;
          double qlq = 0.0;
          for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) qlq += q[a] * lb.at(a, b) * q[b];
          }
          const double sk = e.values[static_cast<std::size_t>(k)];
          const double pv = s.gen().value(sk);
          if (qlq > 0.0) total += qlq * pv / c;
          if (s.family() == Family::SdpPenalizedExp) total += s.aux().value(sk) / c;
        }
      }
      return ExtReal(total);
    }
    default: {
      double total = 0.0;
      for (std::size_t i = 0; i < prims.size(); ++i) total += eval_vector_family(s, y.block(i), l.block(i), c);
      return ExtReal(total);
    }
  }
}

void check_args(const PhiSpec& spec, const BlockVec& y, const BlockVec& lambda, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("penalty parameter must be positive and finite");
  if (!y.matches(spec.cone())) throw StructuralError("y does not match " + spec.cone().describe());
  if (!lambda.matches(spec.cone())) throw StructuralError("lambda does not match " + spec.cone().describe());
  if (!admissible(spec, lambda)) throw AdmissibilityError("multiplier outside the admissible set of " + spec.label());
}

BlockVec grad_unchecked(const PhiSpec& s, const BlockVec& y, const BlockVec& l, double c);

std::vector<double> vector_grad(const PhiSpec& s, const Block& y, const Block& l, double c) {
  std::vector<double> g(y.v.size());
  for (std::size_t i = 0; i < y.v.size(); ++i) {
    const double yi = y.v[i];
    const double li = l.v[i];
    const ScalarFn& phi = s.gen();
    switch (s.family()) {
      case Family::HestenesPowellEq: g[i] = li + c * yi; break;
      case Family::MangasarianEq: g[i] = phi.d1(c * yi + li); break;
      case Family::EssentiallyQuadratic: g[i] = std::max(li + phi.d1(c * yi), 0.0); break;
      case Family::Cubic: {
        const double r = std::sqrt(std::fabs(li));
        const double m = std::max((li > 0 ? r : (li < 0 ? -r : 0.0)) + c * yi, 0.0);
        g[i] = m * m;
        break;
      }
      case Family::MangasarianIneq: g[i] = phi.d1(std::max(c * yi + li, 0.0)); break;
      case Family::ExponentialType: g[i] = li == 0.0 ? 0.0 : li * phi.d1(c * yi); break;
      case Family::PenalizedExponential:
        g[i] = (li == 0.0 ? 0.0 : li * phi.d1(c * yi)) + s.aux().d1(c * yi);
        break;
      case Family::PthPower: {
        const double fb = phi.value(s.shift());
        const double r = phi.value(yi + s.shift()) / fb;
        g[i] = li == 0.0 ? 0.0 : li * std::pow(r, c) * phi.d1(yi + s.shift()) / fb;
        break;
      }
      case Family::HyperbolicType: g[i] = li * phi.d1(c * li * yi); break;
      case Family::ModifiedBarrier:
        if (c * yi >= phi.eps0()) throw DomainError("gradient outside the barrier domain");
        g[i] = li == 0.0 ? 0.0 : li * phi.d1(c * yi);
        break;
      case Family::HeWuMeng: {
        const double sv = c * yi;
        const double h = std::hypot(sv, li);
        g[i] = sv >= 0 ? h + sv : (li == 0.0 ? 0.0 : li * li / (h - sv));
        break;
      }
      default: throw StructuralError("not a componentwise family");
    }
  }
  return g;
}

BlockVec grad_unchecked(const PhiSpec& s, const BlockVec& y, const BlockVec& l, double c) {
  const auto prims = s.cone().primitives();
  std::vector<Block> out;
  switch (s.family()) {
    case Family::Separable: {
      const auto ys = split_parts(s, y);
      const auto ls = split_parts(s, l);
      std::vector<BlockVec> gs;
      for (std::size_t i = 0; i < ys.size(); ++i) gs.push_back(grad_unchecked(s.parts()[i], ys[i], ls[i], c));
      return join_parts(gs);
    }
    case Family::RockafellarWets: {
      if (s.sigma() == RwSigma::HalfSqNorm) {
        for (std::size_t i = 0; i < prims.size(); ++i) out.push_back(hpr_grad_block(y.block(i), l.block(i), prims[i], c));
        return BlockVec(std::move(out));
      }
      if (s.sigma() == RwSigma::Norm) {
        if (euclid_norm(y) == 0.0) {
          BlockVec e = BlockVec::zeros(s.cone());
          e.block(0).v[0] = 1.0;
          const double right = rw_norm_eval(s.cone(), e, l, c).value();
          const double left = -rw_norm_eval(s.cone(), -1.0 * e, l, c).value();
          throw KinkError("sharp penalty is not differentiable at y = 0", left, right);
        }
        // Danskin: the maximizing multiplier.
        const double ny = euclid_norm(y);
        double lo = 0.0;
        double hi = c / ny;
        auto gap_at = [&](double t) { return euclid_norm(project_polar(l + t * y, s.cone()) - l); };
        int k = 0;
        for (; k < 200 && gap_at(hi) < c; ++k) hi *= 2.0;
        for (int it = 0; it < 200 && k < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (gap_at(mid) < c) {
            lo = mid;
          } else {
            hi = mid;
          }
        }
        return project_polar(l + lo * y, s.cone());
      }
      throw UnsupportedError("gradient of the custom-grid Rockafellar-Wets family");
    }
    case Family::SharpEq: {
      const double ny = euclid_norm(y);
      if (ny == 0.0) {
        const double l0 = l.block(0).v[0];
        throw KinkError("sharp penalty is not differentiable at y = 0", l0 - c, l0 + c);
      }
      return l + (c / ny) * y;
    }
    case Family::SocHPR:
    case Family::SdpHPR:
      for (std::size_t i = 0; i < prims.size(); ++i) out.push_back(hpr_grad_block(y.block(i), l.block(i), prims[i], c));
      return BlockVec(std::move(out));
    case Family::SocExpBarrier:
      for (std::size_t i = 0; i < prims.size(); ++i) {
        std::vector<double> z = y.block(i).v;
        for (double& x : z) x *= -c;
        if (!loewner_soc(s.gen(), z)) throw DomainError("gradient outside the barrier domain");
        out.push_back(Block{soc_jacobian_apply(s.gen(), z, l.block(i).v), 0});
      }
      return BlockVec(std::move(out));
    case Family::SdpExpBarrier:
    case Family::SdpPenalizedExp:
      for (std::size_t i = 0; i < prims.size(); ++i) {
        Block cy = y.block(i);
        for (double& x : cy.v) x *= c;
        const SymEig e = sym_eig(cy);
        if (e.values.back() >= s.gen().eps0()) throw DomainError("gradient outside the barrier domain");
        const int n = e.order;
        const Block& lb = l.block(i);
        // M = E^T lambda E, then Gamma o M, then back.
        std::vector<double> m(static_cast<std::size_t>(n * n), 0.0);
        for (int a = 0; a < n; ++a) {
          for (int b = 0; b < n; ++b) {
            const double* qa = e.vectors.data() + static_cast<std::ptrdiff_t>(a) * n;
            const double* qb = e.vectors.data() + static_cast<std::ptrdiff_t>(b) * n;
            double v = 0.0;
            for (int r = 0; r < n; ++r) {
              for (int t = 0; t < n; ++t) v += qa[r] * lb.at(r, t) * qb[t];
            }
            v *= divided_difference(s.gen(), e.values[static_cast<std::size_t>(a)], e.values[static_cast<std::size_t>(b)]);
            if (s.family() == Family::SdpPenalizedExp && a == b) v += s.aux().d1(e.values[static_cast<std::size_t>(a)]);
            m[static_cast<std::size_t>(a * n + b)] = v;
          }
        }
        Block g{std::vector<double>(static_cast<std::size_t>(n * n), 0.0), n};
        for (int r = 0; r < n; ++r) {
          for (int t = 0; t < n; ++t) {
            double v = 0.0;
            for (int a = 0; a < n; ++a) {
              for (int b = 0; b < n; ++b) {
                v += e.vectors[static_cast<std::size_t>(a * n + r)] * m[static_cast<std::size_t>(a * n + b)] *
                     e.vectors[static_cast<std::size_t>(b * n + t)];
              }
            }
            g.at(r, t) = v;
          }
        }
        out.push_back(std::move(g));
      }
      return BlockVec(std::move(out));
    default:
      for (std::size_t i = 0; i < prims.size(); ++i) out.push_back(Block{vector_grad(s, y.block(i), l.block(i), c), 0});
      return BlockVec(std::move(out));
  }
}

std::string cone_tag(const ConeSpec& K) { return K.describe(); }

}  // namespace

// ---------------------------------------------------------------- factories

PhiSpec PhiSpec::rockafellar_wets(const ConeSpec& K, RwSigma sigma, ScalarFn profile) {
  PhiSpec p(Family::RockafellarWets, K, LambdaSet::Full);
  p.sigma_ = sigma;
  if (sigma == RwSigma::CustomGrid) {
    if (K.ambient_dim() > 3) throw UnsupportedError("custom-grid Rockafellar-Wets needs ambient dimension <= 3");
    if (profile.value(0.0) != 0.0) throw DomainError("sigma profile must vanish at zero");
    p.gen_ = profile;
  } else {
    p.gen_ = sigma == RwSigma::HalfSqNorm ? ScalarFn::quadratic(0.5) : ScalarFn::identity();
  }
  return p;
}

PhiSpec PhiSpec::hestenes_powell_eq(int m) { return PhiSpec(Family::HestenesPowellEq, ConeSpec::zero(m), LambdaSet::Full); }

PhiSpec PhiSpec::sharp_eq(int m) { return PhiSpec(Family::SharpEq, ConeSpec::zero(m), LambdaSet::Full); }

PhiSpec PhiSpec::mangasarian_eq(int m, ScalarFn phi) {
  require_generator(phi, {ScalarKind::Quadratic, ScalarKind::OddPower, ScalarKind::EvenPower}, "mangasarian-eq");
  PhiSpec p(Family::MangasarianEq, ConeSpec::zero(m), LambdaSet::Full);
  p.gen_ = phi;
  return p;
}

PhiSpec PhiSpec::essentially_quadratic(int m, ScalarFn phi) {
  require_generator(phi, {ScalarKind::Quadratic, ScalarKind::OddPower, ScalarKind::EvenPower},
                    "essentially-quadratic");
  PhiSpec p(Family::EssentiallyQuadratic, ConeSpec::nonpos(m), LambdaSet::Full);
  p.gen_ = phi;
  return p;
}

PhiSpec PhiSpec::cubic(int m) { return PhiSpec(Family::Cubic, ConeSpec::nonpos(m), LambdaSet::Full); }

PhiSpec PhiSpec::mangasarian_ineq(int m, ScalarFn phi) {
  require_generator(phi, {ScalarKind::Quadratic, ScalarKind::OddPower, ScalarKind::EvenPower}, "mangasarian-ineq");
  PhiSpec p(Family::MangasarianIneq, ConeSpec::nonpos(m), LambdaSet::Full);
  p.gen_ = phi;
  return p;
}

PhiSpec PhiSpec::exponential(int m, ScalarFn phi) {
  require_generator(phi, {ScalarKind::ExpM1, ScalarKind::LogSigmoid, ScalarKind::Hyperbolic, ScalarKind::Identity,
                          ScalarKind::Tabulated},
                    "exponential");
  if (phi.value(0.0) != 0.0) throw DomainError("exponential: generator must vanish at zero");
  PhiSpec p(Family::ExponentialType, ConeSpec::nonpos(m), LambdaSet::Polar);
  p.gen_ = phi;
  return p;
}

PhiSpec PhiSpec::penalized_exponential(int m, ScalarFn phi, ScalarFn xi) {
  require_generator(phi, {ScalarKind::ExpM1, ScalarKind::LogSigmoid, ScalarKind::Hyperbolic, ScalarKind::Identity},
                    "penalized-exponential");
  require_generator(xi, {ScalarKind::PosCube}, "penalized-exponential");
  PhiSpec p(Family::PenalizedExponential, ConeSpec::nonpos(m), LambdaSet::Polar);
  p.gen_ = phi;
  p.aux_ = xi;
  return p;
}

PhiSpec PhiSpec::pth_power(int m, ScalarFn phi, double b) {
  require_generator(phi, {ScalarKind::Exp, ScalarKind::PosPart}, "pth-power");
  if (b < 0.0 || !(phi.value(b) > 0.0)) throw DomainError("pth-power: need b >= 0 and phi(b) > 0");
  PhiSpec p(Family::PthPower, ConeSpec::nonpos(m), LambdaSet::Polar);
  p.gen_ = phi;
  p.b_ = b;
  return p;
}

PhiSpec PhiSpec::hyperbolic(int m, ScalarFn phi) {
  require_generator(phi, {ScalarKind::Hyperbolic, ScalarKind::ExpM1, ScalarKind::Identity}, "hyperbolic");
  PhiSpec p(Family::HyperbolicType, ConeSpec::nonpos(m), LambdaSet::Polar);
  p.gen_ = phi;
  return p;
}

PhiSpec PhiSpec::modified_barrier(int m, ScalarFn phi) {
  require_generator(phi, {ScalarKind::NegLog1m, ScalarKind::InvM1}, "modified-barrier");
  PhiSpec p(Family::ModifiedBarrier, ConeSpec::nonpos(m), LambdaSet::Polar);
  p.gen_ = phi;
  return p;
}

PhiSpec PhiSpec::he_wu_meng(int m) { return PhiSpec(Family::HeWuMeng, ConeSpec::nonpos(m), LambdaSet::Full); }

PhiSpec PhiSpec::soc_hpr(const ConeSpec& K) {
  require_kind(K, ConeKind::SecondOrder, "soc-hpr");
  return PhiSpec(Family::SocHPR, K, LambdaSet::Full);
}

PhiSpec PhiSpec::soc_exp(const ConeSpec& K, ScalarFn psi) {
  require_kind(K, ConeKind::SecondOrder, "soc-exp");
  require_generator(psi, {ScalarKind::ExpM1, ScalarKind::NegLog1m, ScalarKind::InvM1}, "soc-exp");
  PhiSpec p(Family::SocExpBarrier, K, LambdaSet::Polar);
  p.gen_ = psi;
  return p;
}

PhiSpec PhiSpec::sdp_hpr(int order) { return PhiSpec(Family::SdpHPR, ConeSpec::nsd(order), LambdaSet::Full); }

PhiSpec PhiSpec::sdp_exp(int order, ScalarFn psi) {
  require_generator(psi, {ScalarKind::ExpM1, ScalarKind::NegLog1m, ScalarKind::InvM1}, "sdp-exp");
  PhiSpec p(Family::SdpExpBarrier, ConeSpec::nsd(order), LambdaSet::Polar);
  p.gen_ = psi;
  return p;
}

PhiSpec PhiSpec::sdp_penalized_exp(int order, ScalarFn psi, ScalarFn xi) {
  require_generator(psi, {ScalarKind::ExpM1}, "sdp-penalized-exp");
  require_generator(xi, {ScalarKind::PosCube}, "sdp-penalized-exp");
  PhiSpec p(Family::SdpPenalizedExp, ConeSpec::nsd(order), LambdaSet::Polar);
  p.gen_ = psi;
  p.aux_ = xi;
  return p;
}

PhiSpec PhiSpec::separable(std::vector<PhiSpec> parts) {
  if (parts.empty()) throw StructuralError("separable composition needs at least one part");
  std::vector<ConeSpec> cones;
  for (const auto& p : parts) cones.push_back(p.cone());
  PhiSpec out(Family::Separable, ConeSpec::product(std::move(cones)), LambdaSet::Full);
  out.parts_ = std::move(parts);
  return out;
}

PhiSpec compose_separable(std::vector<PhiSpec> parts) { return PhiSpec::separable(std::move(parts)); }

PhiSpec PhiSpec::rebind(const ConeSpec& K) const {
  PhiSpec p = *this;
  switch (family_) {
    case Family::Separable:
      throw StructuralError("cannot rebind a separable composition");
    case Family::HestenesPowellEq:
    case Family::SharpEq:
    case Family::MangasarianEq:
      if (K.kind() != ConeKind::Zero) throw StructuralError(label() + " needs a zero cone");
      break;
    case Family::RockafellarWets:
      break;
    case Family::SocHPR:
    case Family::SocExpBarrier:
      require_kind(K, ConeKind::SecondOrder, "soc family");
      break;
    case Family::SdpHPR:
    case Family::SdpExpBarrier:
    case Family::SdpPenalizedExp:
      if (K.kind() != ConeKind::NegSemidef) throw StructuralError(label() + " needs a semidefinite cone");
      break;
    default:
      if (K.kind() != ConeKind::NonposOrthant) throw StructuralError(label() + " needs a nonpositive orthant");
      break;
  }
  p.cone_ = K;
  return p;
}

std::string family_name(Family f) {
  switch (f) {
    case Family::RockafellarWets: return "rockafellar-wets";
    case Family::HestenesPowellEq: return "hestenes-powell-eq";
    case Family::SharpEq: return "sharp-eq";
    case Family::MangasarianEq: return "mangasarian-eq";
    case Family::EssentiallyQuadratic: return "essentially-quadratic";
    case Family::Cubic: return "cubic";
    case Family::MangasarianIneq: return "mangasarian-ineq";
    case Family::ExponentialType: return "exponential";
    case Family::PenalizedExponential: return "penalized-exponential";
    case Family::PthPower: return "pth-power";
    case Family::HyperbolicType: return "hyperbolic";
    case Family::ModifiedBarrier: return "modified-barrier";
    case Family::HeWuMeng: return "he-wu-meng";
    case Family::SocHPR: return "soc-hpr";
    case Family::SocExpBarrier: return "soc-exp";
    case Family::SdpHPR: return "sdp-hpr";
    case Family::SdpExpBarrier: return "sdp-exp";
    case Family::SdpPenalizedExp: return "sdp-penalized-exp";
    case Family::Separable: return "separable";
  }
  return "?";
}

std::string PhiSpec::label() const {
  std::ostringstream os;
  os << family_name(family_);
  switch (family_) {
    case Family::RockafellarWets:
      os << (sigma_ == RwSigma::HalfSqNorm ? "[half-sq]" : sigma_ == RwSigma::Norm ? "[norm]" : "[grid:" + gen_.name() + "]");
      break;
    case Family::MangasarianEq:
    case Family::EssentiallyQuadratic:
    case Family::MangasarianIneq:
    case Family::ExponentialType:
    case Family::HyperbolicType:
    case Family::ModifiedBarrier:
    case Family::SocExpBarrier:
    case Family::SdpExpBarrier:
      os << "[" << gen_.name() << "]";
      break;
    case Family::PenalizedExponential:
    case Family::SdpPenalizedExp:
      os << "[" << gen_.name() << "," << aux_.name() << "]";
      break;
    case Family::PthPower:
      os << "[" << gen_.name() << ",b=" << b_ << "]";
      break;
    case Family::Separable:
      os << "(";
      for (std::size_t i = 0; i < parts_.size(); ++i) os << (i ? " x " : "") << parts_[i].label();
      os << ")";
      return os.str();
    default:
      break;
  }
  os << " on " << cone_tag(cone_);
  return os.str();
}

bool operator==(const PhiSpec& a, const PhiSpec& b) {
  return a.family_ == b.family_ && a.cone_ == b.cone_ && a.lambda_ == b.lambda_ && a.sigma_ == b.sigma_ &&
         a.gen_ == b.gen_ && a.aux_ == b.aux_ && a.b_ == b.b_ && a.parts_ == b.parts_;
}

// ---------------------------------------------------------------- public evaluation

bool admissible(const PhiSpec& spec, const BlockVec& lambda) {
  if (spec.family() == Family::Separable) {
    const auto ls = split_parts(spec, lambda);
    for (std::size_t i = 0; i < ls.size(); ++i) {
      if (!admissible(spec.parts()[i], ls[i])) return false;
    }
    return true;
  }
  if (spec.lambda_set() == LambdaSet::Full) return true;
  return in_polar(lambda, spec.cone(), 1e-9 * std::max(1.0, norm(lambda)));
}

ExtReal phi_eval(const PhiSpec& spec, const BlockVec& y, const BlockVec& lambda, double c) {
  check_args(spec, y, lambda, c);
  return eval_unchecked(spec, y, lambda, c);
}

ExtReal rw_phi_eval(RwSigma sigma, const ConeSpec& K, const BlockVec& y, const BlockVec& lambda, double c,
                    const RwGridCfg& cfg, const ScalarFn& profile) {
  if (!(c > 0.0)) throw DomainError("penalty parameter must be positive");
  if (!y.matches(K) || !lambda.matches(K)) throw StructuralError("argument does not match " + K.describe());
  switch (sigma) {
    case RwSigma::HalfSqNorm: {
      const auto prims = K.primitives();
      double total = 0.0;
      for (std::size_t i = 0; i < prims.size(); ++i) total += hpr_block(y.block(i), lambda.block(i), prims[i], c);
      return ExtReal(total);
    }
    case RwSigma::Norm:
      return rw_norm_eval(K, y, lambda, c);
    case RwSigma::CustomGrid:
      return rw_grid_eval(K, y, lambda, c, cfg, profile);
  }
  return ExtReal::pos_inf();
}

std::optional<std::vector<double>> loewner_soc(const ScalarFn& psi, const std::vector<double>& y) {
  if (y.empty()) throw StructuralError("empty second-order cone vector");
  double nb = 0.0;
  for (std::size_t i = 1; i < y.size(); ++i) nb += y[i] * y[i];
  nb = std::sqrt(nb);
  std::vector<double> out(y.size(), 0.0);
  if (nb == 0.0) {
    const double v = psi.value(y[0]);
    if (!std::isfinite(v) && y[0] >= psi.eps0()) return std::nullopt;
    out[0] = v;
    return out;
  }
  const double hi = y[0] + nb;
  const double lo = y[0] - nb;
  if (hi >= psi.eps0()) return std::nullopt;
  const double a = psi.value(hi);
  const double b = psi.value(lo);
  out[0] = 0.5 * (a + b);
  for (std::size_t i = 1; i < y.size(); ++i) out[i] = 0.5 * (a - b) * y[i] / nb;
  return out;
}

std::optional<Block> loewner_sdp(const ScalarFn& psi, const Block& y) {
  const SymEig e = sym_eig(y);
  if (e.values.back() >= psi.eps0()) return std::nullopt;
  std::vector<double> d(e.values.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = psi.value(e.values[i]);
  return sym_from_eig(e, d);
}

BlockVec phi_grad_y(const PhiSpec& spec, const BlockVec& y, const BlockVec& lambda, double c) {
  check_args(spec, y, lambda, c);
  return grad_unchecked(spec, y, lambda, c);
}

std::optional<BlockVec> phi_zero_map(const PhiSpec& spec, const BlockVec& lambda) {
  if (!lambda.matches(spec.cone())) throw StructuralError("lambda does not match " + spec.cone().describe());
  switch (spec.family()) {
    case Family::Separable: {
      std::vector<BlockVec> out;
      const auto ls = split_parts(spec, lambda);
      for (std::size_t i = 0; i < ls.size(); ++i) {
        auto p = phi_zero_map(spec.parts()[i], ls[i]);
        if (!p) return std::nullopt;
        out.push_back(*p);
      }
      return join_parts(out);
    }
    case Family::RockafellarWets:
      if (spec.sigma() != RwSigma::HalfSqNorm) return std::nullopt;
      return lambda;
    case Family::SharpEq:
      return std::nullopt;
    case Family::HestenesPowellEq:
    case Family::SocHPR:
    case Family::SdpHPR:
    case Family::Cubic:
    case Family::HeWuMeng:
      return lambda;
    case Family::EssentiallyQuadratic: {
      BlockVec out = lambda;
      for (std::size_t i = 0; i < out.size(); ++i) {
        for (double& x : out.block(i).v) x = std::max(x + spec.gen().d1(0.0), 0.0);
      }
      return out;
    }
    case Family::MangasarianEq: {
      BlockVec out = lambda;
      for (std::size_t i = 0; i < out.size(); ++i) {
        for (double& x : out.block(i).v) x = spec.gen().d1(x);
      }
      return out;
    }
    case Family::MangasarianIneq: {
      BlockVec out = lambda;
      for (std::size_t i = 0; i < out.size(); ++i) {
        for (double& x : out.block(i).v) x = spec.gen().d1(std::max(x, 0.0));
      }
      return out;
    }
    case Family::ExponentialType:
    case Family::HyperbolicType:
    case Family::ModifiedBarrier:
    case Family::SocExpBarrier:
    case Family::SdpExpBarrier:
      return spec.gen().d1(0.0) * lambda;
    case Family::PenalizedExponential:
    case Family::SdpPenalizedExp: {
      BlockVec out = spec.gen().d1(0.0) * lambda;
      const double x0 = spec.aux().d1(0.0);
      if (x0 != 0.0) {
        for (std::size_t i = 0; i < out.size(); ++i) {
          Block& b = out.block(i);
          if (b.is_matrix()) {
            for (int k = 0; k < b.order; ++k) b.at(k, k) += x0;
          } else {
            for (double& x : b.v) x += x0;
          }
        }
      }
      return out;
    }
    case Family::PthPower:
      return (spec.gen().d1(spec.shift()) / spec.gen().value(spec.shift())) * lambda;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- multipliers

BlockVec sample_multiplier(const PhiSpec& spec, std::mt19937_64& rng, double radius) {
  if (spec.family() == Family::Separable) {
    std::vector<BlockVec> out;
    for (const auto& p : spec.parts()) out.push_back(sample_multiplier(p, rng, radius));
    return join_parts(out);
  }
  if (spec.lambda_set() == LambdaSet::Polar) return random_in_polar(spec.cone(), rng, radius);
  BlockVec g = random_gaussian(spec.cone(), rng);
  const double nrm = norm(g);
  return nrm > 0.0 ? (radius / nrm) * g : g;
}

BlockVec project_multiplier(const PhiSpec& spec, const BlockVec& lambda) {
  if (spec.family() == Family::Separable) {
    const auto ls = split_parts(spec, lambda);
    std::vector<BlockVec> out;
    for (std::size_t i = 0; i < ls.size(); ++i) out.push_back(project_multiplier(spec.parts()[i], ls[i]));
    return join_parts(out);
  }
  return spec.lambda_set() == LambdaSet::Polar ? project_polar(lambda, spec.cone()) : lambda;
}

bool lambda_exceeds_polar(const PhiSpec& spec) {
  if (spec.family() == Family::Separable) {
    return std::any_of(spec.parts().begin(), spec.parts().end(), lambda_exceeds_polar);
  }
  if (spec.lambda_set() == LambdaSet::Polar) return false;
  const auto prims = spec.cone().primitives();
  return std::any_of(prims.begin(), prims.end(), [](const ConeSpec& k) { return k.kind() != ConeKind::Zero; });
}

BlockVec sample_multiplier_outside_polar(const PhiSpec& spec, std::mt19937_64& rng, double radius) {
  if (!lambda_exceeds_polar(spec)) throw DomainError(spec.label() + ": admissible set equals K*");
  for (int attempt = 0; attempt < 1000; ++attempt) {
    BlockVec l = sample_multiplier(spec, rng, radius);
    if (dist_to_polar(l, spec.cone()) >= 1e-3 * norm(l)) return l;
  }
  throw DomainError(spec.label() + ": could not sample a multiplier outside K*");
}

// ---------------------------------------------------------------- names

std::vector<std::string> phi_names() {
  return {"hpr",          "rw-norm",       "rw-grid",       "hp-eq",     "sharp-eq",
          "mangasarian-eq", "essentially-quadratic", "cubic", "mangasarian-ineq", "exponential",
          "log-sigmoid",  "penalized-exponential", "pth-power", "hyperbolic", "frisch",
          "carrol",       "he-wu-meng",    "soc-hpr",       "soc-exp",   "soc-frisch",
          "sdp-hpr",      "sdp-exp",       "sdp-frisch",    "sdp-penalized-exp"};
}

PhiSpec phi_from_name(const std::string& text, const ConeSpec& K) {
  const auto at = text.find('@');
  const std::string name = text.substr(0, at);
  const std::optional<ScalarFn> gen =
      at == std::string::npos ? std::nullopt : std::optional<ScalarFn>(ScalarFn::parse(text.substr(at + 1)));
  auto orthant_dim = [&]() {
    if (K.kind() != ConeKind::NonposOrthant) throw StructuralError(name + " needs a nonpositive orthant, got " + K.describe());
    return K.dim();
  };
  auto zero_dim = [&]() {
    if (K.kind() != ConeKind::Zero) throw StructuralError(name + " needs a zero cone, got " + K.describe());
    return K.dim();
  };
  auto sdp_order = [&]() {
    if (K.kind() != ConeKind::NegSemidef) throw StructuralError(name + " needs a semidefinite cone, got " + K.describe());
    return K.dim();
  };
  if (name == "hpr" || name == "rw-halfsq") return PhiSpec::rockafellar_wets(K, RwSigma::HalfSqNorm);
  if (name == "rw-norm" || name == "sharp") return PhiSpec::rockafellar_wets(K, RwSigma::Norm);
  if (name == "rw-grid") return PhiSpec::rockafellar_wets(K, RwSigma::CustomGrid, gen.value_or(ScalarFn::quadratic(0.5)));
  if (name == "hp-eq") return PhiSpec::hestenes_powell_eq(zero_dim());
  if (name == "sharp-eq") return PhiSpec::sharp_eq(zero_dim());
  if (name == "mangasarian-eq") return PhiSpec::mangasarian_eq(zero_dim(), gen.value_or(ScalarFn::even_power(2)));
  if (name == "essentially-quadratic") {
    return PhiSpec::essentially_quadratic(orthant_dim(), gen.value_or(ScalarFn::quadratic(0.5)));
  }
  if (name == "cubic") return PhiSpec::cubic(orthant_dim());
  if (name == "mangasarian-ineq") return PhiSpec::mangasarian_ineq(orthant_dim(), gen.value_or(ScalarFn::even_power(2)));
  if (name == "exponential") return PhiSpec::exponential(orthant_dim(), gen.value_or(ScalarFn::expm1()));
  if (name == "log-sigmoid") return PhiSpec::exponential(orthant_dim(), ScalarFn::log_sigmoid());
  if (name == "penalized-exponential") {
    return PhiSpec::penalized_exponential(orthant_dim(), gen.value_or(ScalarFn::expm1()));
  }
  if (name == "pth-power") return PhiSpec::pth_power(orthant_dim(), gen.value_or(ScalarFn::exp()));
  if (name == "hyperbolic") return PhiSpec::hyperbolic(orthant_dim(), gen.value_or(ScalarFn::hyperbolic()));
  if (name == "frisch") return PhiSpec::modified_barrier(orthant_dim(), ScalarFn::neg_log1m());
  if (name == "carrol") return PhiSpec::modified_barrier(orthant_dim(), ScalarFn::inv_m1());
  if (name == "he-wu-meng") return PhiSpec::he_wu_meng(orthant_dim());
  if (name == "soc-hpr") return PhiSpec::soc_hpr(K);
  if (name == "soc-exp") return PhiSpec::soc_exp(K, gen.value_or(ScalarFn::expm1()));
  if (name == "soc-frisch") return PhiSpec::soc_exp(K, ScalarFn::neg_log1m());
  if (name == "sdp-hpr") return PhiSpec::sdp_hpr(sdp_order());
  if (name == "sdp-exp") return PhiSpec::sdp_exp(sdp_order(), gen.value_or(ScalarFn::expm1()));
  if (name == "sdp-frisch") return PhiSpec::sdp_exp(sdp_order(), ScalarFn::neg_log1m());
  if (name == "sdp-penalized-exp") return PhiSpec::sdp_penalized_exp(sdp_order());
  throw DomainError("unknown family: " + text);
}

}  // namespace auglag
