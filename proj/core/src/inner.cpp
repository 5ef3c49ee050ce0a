#include "auglag/inner.hpp"

#include <algorithm>
#include <cmath>

#include "auglag/errors.hpp"

namespace auglag {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct BoxResult {
  double value = kInf;
  Point x;
  bool on_edge = false;
};

double eval(const Objective& F, const Point& x) {
  const double v = F(x).value();
  return std::isnan(v) ? kInf : v;
}

int points_per_axis(int n, const InnerCfg& cfg) {
  if (n == 1) return cfg.grid_points;
  if (n == 2) return cfg.grid_budget_2d;
  return std::max(5, static_cast<int>(std::floor(std::pow(static_cast<double>(cfg.grid_budget_nd), 1.0 / n))));
}

struct Candidate {
  double value;
  Point x;
};

Candidate golden(const Objective& F, double a, double b, const Candidate& start, const InnerCfg& cfg) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double fa = eval(F, {a});
  double fb = eval(F, {b});
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = eval(F, {c});
  double fd = eval(F, {d});
  for (int it = 0; it < 300; ++it) {
    if (b - a <= cfg.x_tol) break;
    if (cfg.value_tol > 0.0) {
      const double hi = std::max({fa, fb, fc, fd});
      const double lo = std::min({fa, fb, fc, fd});
      if (hi - lo <= cfg.value_tol) break;
    }
    if (fc <= fd) {
      b = d;
      fb = fd;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      if (c == d) break;
      fc = eval(F, {c});
    } else {
      a = c;
      fa = fc;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      if (c == d) break;
      fd = eval(F, {d});
    }
  }
  Candidate best = start;
  for (auto [v, x] : {std::pair{fa, a}, std::pair{fc, c}, std::pair{fd, d}, std::pair{fb, b}}) {
    if (v < best.value) best = {v, {x}};
  }
  return best;
}

Candidate compass(const Objective& F, const Point& lo, const Point& hi, Candidate cur, Point step,
                  const InnerCfg& cfg) {
  const std::size_t n = cur.x.size();
  for (int it = 0; it < 20000; ++it) {
    bool improved = false;
    for (std::size_t i = 0; i < n && !improved; ++i) {
      for (double sgn : {1.0, -1.0}) {
        Point t = cur.x;
        t[i] = std::clamp(t[i] + sgn * step[i], lo[i], hi[i]);
        if (t[i] == cur.x[i]) continue;
        const double v = eval(F, t);
        if (v < cur.value - (cfg.value_tol > 0 ? cfg.value_tol * 1e-3 : 0.0)) {
          cur = {v, t};
          improved = true;
          break;
        }
      }
    }
    if (!improved) {
      double mx = 0.0;
      for (auto& s : step) {
        s *= 0.5;
        mx = std::max(mx, s);
      }
      if (mx < cfg.x_tol) break;
    }
  }
  return cur;
}

// Shrinking local grids around cur. Coordinate moves stall on curved edges of
// the finite region (constraints encoded as +inf); a full grid does not.
Candidate zoom(const Objective& F, const Point& lo, const Point& hi, Candidate cur, Point half,
               const InnerCfg& cfg) {
  const std::size_t n = cur.x.size();
  const int q = n == 2 ? 21 : (n == 3 ? 9 : 5);
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= static_cast<std::size_t>(q);
  for (int level = 0; level < 80; ++level) {
    double mx = 0.0;
    for (double w : half) mx = std::max(mx, w);
    if (mx < cfg.x_tol) break;
    Candidate best = cur;
    Point x(n);
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::size_t r = flat;
      for (std::size_t i = 0; i < n; ++i) {
        const int k = static_cast<int>(r % static_cast<std::size_t>(q));
        r /= static_cast<std::size_t>(q);
        x[i] = std::clamp(cur.x[i] - half[i] + 2.0 * half[i] * k / (q - 1), lo[i], hi[i]);
      }
      const double v = eval(F, x);
      if (v < best.value) best = {v, x};
    }
    cur = best;
    for (double& w : half) w *= 0.25;
  }
  return cur;
}

BoxResult minimize_in_box(const Objective& F, const Point& lo, const Point& hi, const std::vector<bool>& cut_lo,
                          const std::vector<bool>& cut_hi, const InnerCfg& cfg) {
  const int n = static_cast<int>(lo.size());
  const int m = points_per_axis(n, cfg);
  std::vector<int> per(static_cast<std::size_t>(n));
  Point h(static_cast<std::size_t>(n));
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    per[ui] = hi[ui] > lo[ui] ? m : 1;
    h[ui] = per[ui] > 1 ? (hi[ui] - lo[ui]) / (per[ui] - 1) : 0.0;
    total *= static_cast<std::size_t>(per[ui]);
  }
  auto coord = [&](int i, int k) {
    const auto ui = static_cast<std::size_t>(i);
    return k == per[ui] - 1 ? hi[ui] : lo[ui] + h[ui] * k;
  };
  std::vector<double> vals(total);
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  Point x(static_cast<std::size_t>(n));
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t r = flat;
    for (int i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      idx[ui] = static_cast<int>(r % static_cast<std::size_t>(per[ui]));
      r /= static_cast<std::size_t>(per[ui]);
      x[ui] = coord(i, idx[ui]);
    }
    vals[flat] = eval(F, x);
    if (vals[flat] == -kInf) return BoxResult{-kInf, x, false};
  }
  // Local minima of the grid.
  std::vector<std::size_t> stride(static_cast<std::size_t>(n), 1);
  for (int i = 1; i < n; ++i) stride[static_cast<std::size_t>(i)] = stride[static_cast<std::size_t>(i - 1)] * static_cast<std::size_t>(per[static_cast<std::size_t>(i - 1)]);
  std::vector<std::size_t> minima;
  for (std::size_t flat = 0; flat < total; ++flat) {
    if (!std::isfinite(vals[flat])) continue;
    bool is_min = true;
    for (int i = 0; i < n && is_min; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      const int k = static_cast<int>((flat / stride[ui]) % static_cast<std::size_t>(per[ui]));
      if (k > 0 && vals[flat - stride[ui]] < vals[flat]) is_min = false;
      if (k < per[ui] - 1 && vals[flat + stride[ui]] < vals[flat]) is_min = false;
    }
    if (is_min) minima.push_back(flat);
  }
  BoxResult out;
  if (minima.empty()) return out;
  std::stable_sort(minima.begin(), minima.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
  // Keep the best few, but never drop a minimum tied with the best.
  std::size_t keep = std::min(minima.size(), static_cast<std::size_t>(cfg.top_k));
  const double tie = cfg.tie_tol * std::max(1.0, std::fabs(vals[minima[0]]));
  while (keep < minima.size() && vals[minima[keep]] <= vals[minima[0]] + tie) ++keep;
  minima.resize(keep);

  std::vector<Candidate> refined;
  for (std::size_t flat : minima) {
    Point p(static_cast<std::size_t>(n));
    std::size_t r = flat;
    for (int i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      p[ui] = coord(i, static_cast<int>(r % static_cast<std::size_t>(per[ui])));
      r /= static_cast<std::size_t>(per[ui]);
    }
    Candidate start{vals[flat], p};
    if (n == 1) {
      refined.push_back(golden(F, std::max(lo[0], p[0] - h[0]), std::min(hi[0], p[0] + h[0]), start, cfg));
    } else {
      refined.push_back(zoom(F, lo, hi, compass(F, lo, hi, start, h, cfg), h, cfg));
    }
  }
  double best = kInf;
  for (const auto& c : refined) best = std::min(best, c.value);
  const double ttol = cfg.tie_tol * std::max(1.0, std::fabs(best));
  const Candidate* pick = nullptr;
  for (const auto& c : refined) {
    if (c.value <= best + ttol && (pick == nullptr || c.x > pick->x)) pick = &c;
  }
  out.value = pick->value;
  out.x = pick->x;
  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const double margin = 1.5 * h[ui];
    if ((cut_lo[ui] && out.x[ui] <= lo[ui] + margin) || (cut_hi[ui] && out.x[ui] >= hi[ui] - margin)) out.on_edge = true;
  }
  return out;
}

}  // namespace

std::string inner_status_name(InnerStatus s) {
  switch (s) {
    case InnerStatus::Finite: return "finite";
    case InnerStatus::MinusInfinityDetected: return "minus-infinity-detected";
    case InnerStatus::MaxBoxReached: return "max-box-reached";
  }
  return "?";
}

InnerResult global_minimize(const Objective& F, const Box& Q, int n, const InnerCfg& cfg) {
  if (n < 1) throw StructuralError("dimension must be positive");
  if (n > 5 && !cfg.local_only) throw UnsupportedError("global minimization is limited to n <= 5");
  const auto un = static_cast<std::size_t>(n);
  InnerResult res;
  if (cfg.local_only) {
    Point x0(un, 0.0);
    for (std::size_t i = 0; i < un; ++i) x0[i] = std::clamp(0.0, Q.lo[i], Q.hi[i]);
    Candidate c = compass(F, Q.lo, Q.hi, {eval(F, x0), x0}, Point(un, 1.0), cfg);
    res.value = ExtReal(c.value);
    res.best = c.x;
    if (res.value.is_finite()) res.argmin = c.x;
    res.status = res.value.is_neg_inf() ? InnerStatus::MinusInfinityDetected : InnerStatus::Finite;
    return res;
  }
  std::vector<double> history;
  Point best_x(un, 0.0);
  double R = cfg.r0;
  for (int k = 0;; ++k, R *= 2.0) {
    Point lo(un);
    Point hi(un);
    std::vector<bool> cut_lo(un);
    std::vector<bool> cut_hi(un);
    bool box_is_q = true;
    for (std::size_t i = 0; i < un; ++i) {
      lo[i] = std::max(Q.lo[i], -R);
      hi[i] = std::min(Q.hi[i], R);
      if (lo[i] > hi[i]) {
        // Q lies outside [-R, R] in this coordinate: take a window of width 2R
        // anchored at its nearest face.
        if (Q.lo[i] > R) {
          lo[i] = Q.lo[i];
          hi[i] = std::min(Q.hi[i], Q.lo[i] + 2.0 * R);
        } else {
          hi[i] = Q.hi[i];
          lo[i] = std::max(Q.lo[i], Q.hi[i] - 2.0 * R);
        }
      }
      cut_lo[i] = lo[i] > Q.lo[i];
      cut_hi[i] = hi[i] < Q.hi[i];
      if (cut_lo[i] || cut_hi[i]) box_is_q = false;
    }
    const BoxResult br = minimize_in_box(F, lo, hi, cut_lo, cut_hi, cfg);
    res.radius = R;
    if (br.value == -kInf || br.value < cfg.minus_inf_threshold) {
      res.value = ExtReal::neg_inf();
      res.best = br.x;
      res.status = InnerStatus::MinusInfinityDetected;
      return res;
    }
    if (!br.x.empty()) best_x = br.x;
    history.push_back(br.value);
    const double prev = history.size() > 1 ? history[history.size() - 2] : kInf;
    const bool stalled = std::isfinite(br.value) && prev - br.value <= 1e-12 * std::max(1.0, std::fabs(br.value));
    if (box_is_q || (!br.on_edge && std::isfinite(br.value) && (k >= 1 ? stalled : false))) {
      res.value = ExtReal(br.value);
      res.best = best_x;
      if (res.value.is_finite()) res.argmin = best_x;
      res.status = res.value.is_finite() || res.value.is_pos_inf() ? InnerStatus::Finite : InnerStatus::MinusInfinityDetected;
      return res;
    }
    if (k >= cfg.max_doublings) {
      const bool extend = cfg.extend_while_improving > 0.0 && k < cfg.hard_max_doublings && std::isfinite(prev) &&
                          prev - br.value >= cfg.extend_while_improving;
      if (extend) continue;
      break;
    }
  }
  res.best = best_x;
  const std::size_t h = history.size();
  if (h >= 3) {
    const double d1 = history[h - 3] - history[h - 2];
    const double d2 = history[h - 2] - history[h - 1];
    if (d1 > 0.0 && d2 > 0.0 && d2 >= cfg.divergence_ratio * d1) {
      res.value = ExtReal::neg_inf();
      res.status = InnerStatus::MinusInfinityDetected;
      return res;
    }
  }
  res.value = ExtReal(history.back());
  res.status = InnerStatus::MaxBoxReached;
  return res;
}

}  // namespace auglag
