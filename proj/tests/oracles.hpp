#pragma once

// Test-side reference computations. Nothing here calls into the library's
// numerical routines, so agreement with them is evidence rather than echo.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

using Mat = std::vector<std::vector<double>>;

// Dense scan of [lo, hi] followed by golden-section refinement around the best
// cell. Good enough for the unimodal-per-cell objectives the tests feed it.
inline double grid_min_1d(const std::function<double(double)>& f, double lo, double hi, int cells,
                          double* argmin = nullptr) {
  double best = std::numeric_limits<double>::infinity();
  double bx = lo;
  const double h = (hi - lo) / cells;
  for (int k = 0; k <= cells; ++k) {
    const double x = lo + k * h;
    const double v = f(x);
    if (v < best) {
      best = v;
      bx = x;
    }
  }
  double a = std::max(lo, bx - h), b = std::min(hi, bx + h);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200 && b - a > 1e-13 * (1.0 + std::fabs(a)); ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
    }
  }
  const double xm = 0.5 * (a + b);
  const double vm = f(xm);
  if (vm < best) {
    best = vm;
    bx = xm;
  }
  if (argmin) *argmin = bx;
  return best;
}

// Componentwise closed form of the Hestenes-Powell-Rockafellar term for one
// inequality y <= 0: (max{0, lambda + c y}^2 - lambda^2) / (2c).
inline double hpr_ineq(double y, double l, double c) {
  const double t = std::max(0.0, l + c * y);
  return (t * t - l * l) / (2.0 * c);
}

inline Mat matmul(const Mat& a, const Mat& b) {
  const std::size_t n = a.size();
  Mat r(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) r[i][j] += a[i][k] * b[k][j];
  return r;
}

// exp(A) by scaling and squaring with a 30-term Taylor series.
inline Mat expm(const Mat& a) {
  const std::size_t n = a.size();
  double nrm = 0.0;
  for (const auto& row : a)
    for (double v : row) nrm = std::max(nrm, std::fabs(v));
  int s = 0;
  while (nrm * n > 0.5) {
    nrm /= 2.0;
    ++s;
  }
  Mat as = a;
  for (auto& row : as)
    for (double& v : row) v = std::ldexp(v, -s);
  Mat sum(n, std::vector<double>(n, 0.0)), term(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) sum[i][i] = term[i][i] = 1.0;
  for (int k = 1; k <= 30; ++k) {
    term = matmul(term, as);
    for (auto& row : term)
      for (double& v : row) v /= k;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) sum[i][j] += term[i][j];
  }
  for (int k = 0; k < s; ++k) sum = matmul(sum, sum);
  return sum;
}

// Cyclic Jacobi eigenvalues of a symmetric matrix, ascending.
inline std::vector<double> jacobi_eigenvalues(Mat a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

// Nearest point of {z0 >= |z1|}: the point itself, the apex, or the best point
// on either boundary ray found by a 1-d sweep.
inline std::array<double, 2> soc2_nearest(double y0, double y1) {
  if (y0 >= std::fabs(y1)) return {y0, y1};
  std::array<double, 2> best{0.0, 0.0};
  double bd = y0 * y0 + y1 * y1;
  for (double s : {1.0, -1.0}) {
    double t = 0.0;
    const double val = grid_min_1d(
        [&](double r) { return (y0 - r) * (y0 - r) + (y1 - s * r) * (y1 - s * r); }, 0.0,
        2.0 * (std::fabs(y0) + std::fabs(y1)) + 1.0, 20000, &t);
    if (val < bd) {
      bd = val;
      best = {t, s * t};
    }
  }
  return best;
}

// Central differences of a scalar function of a vector.
inline std::vector<double> fd_gradient(const std::function<double(const std::vector<double>&)>& f,
                                       std::vector<double> x, double h) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    x[i] = xi + h;
    const double fp = f(x);
    x[i] = xi - h;
    const double fm = f(x);
    x[i] = xi;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

// max <mu, y> over mu >= 0 with |mu - l| <= c, by enumerating the zero set S
// of the maximizer: off S only the ball binds, so mu_F = l_F + rho y_F / |y_F|.
inline double max_linear_ball_orthant(const std::vector<double>& y, const std::vector<double>& l, double c) {
  const std::size_t m = y.size();
  double best = -std::numeric_limits<double>::infinity();
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    double ls = 0.0, yf = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask & (1u << i)) {
        ls += l[i] * l[i];
      } else {
        yf += y[i] * y[i];
      }
    }
    if (ls > c * c) continue;
    const double rho = std::sqrt(c * c - ls);
    if (yf == 0.0) {
      if (ls <= c * c) best = std::max(best, 0.0);
      continue;
    }
    double v = 0.0;
    bool ok = true;
    for (std::size_t i = 0; i < m && ok; ++i) {
      if (mask & (1u << i)) continue;
      const double mu = l[i] + rho * y[i] / std::sqrt(yf);
      ok = mu >= 0.0;
      v += mu * y[i];
    }
    if (ok) best = std::max(best, v);
  }
  return best;
}

// max <mu, y> over mu in -soc(3) = {|(mu1, mu2)| <= -mu0} with |mu - l| <= c.
// Candidates: the apex, the ball-only optimum, and the curve where the sphere
// meets the cone surface (scanned in angle, then golden-refined).
inline double max_linear_ball_neg_soc3(const std::array<double, 3>& y, const std::array<double, 3>& l, double c) {
  double best = -std::numeric_limits<double>::infinity();
  const double nl2 = l[0] * l[0] + l[1] * l[1] + l[2] * l[2];
  if (nl2 <= c * c) best = 0.0;
  const double ny = std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]);
  if (ny > 0.0) {
    const std::array<double, 3> m{l[0] + c * y[0] / ny, l[1] + c * y[1] / ny, l[2] + c * y[2] / ny};
    if (std::hypot(m[1], m[2]) <= -m[0]) best = std::max(best, m[0] * y[0] + m[1] * y[1] + m[2] * y[2]);
  }
  // mu = r a(phi), a = (-1, cos, sin), |a|^2 = 2: 2 r^2 - 2 r <a, l> + |l|^2 - c^2 = 0.
  auto curve = [&](double phi) {
    const double al = -l[0] + std::cos(phi) * l[1] + std::sin(phi) * l[2];
    const double ay = -y[0] + std::cos(phi) * y[1] + std::sin(phi) * y[2];
    const double disc = al * al - 2.0 * (nl2 - c * c);
    double v = -std::numeric_limits<double>::infinity();
    if (disc < 0.0) return v;
    for (double r : {(al - std::sqrt(disc)) / 2.0, (al + std::sqrt(disc)) / 2.0}) {
      if (r >= 0.0) v = std::max(v, r * ay);
    }
    return v;
  };
  const double two_pi = 6.28318530717958647692;
  const int N = 20000;
  int bk = -1;
  double cb = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < N; ++k) {
    const double v = curve(two_pi * k / N);
    if (v > cb) {
      cb = v;
      bk = k;
    }
  }
  if (bk >= 0) {
    const double phi = two_pi * bk / N, h = two_pi / N;
    double dummy = 0.0;
    const double refined = -grid_min_1d([&](double p) { const double v = curve(p); return std::isfinite(v) ? -v : 1e300; },
                                        phi - h, phi + h, 200, &dummy);
    best = std::max({best, cb, refined});
  }
  return best;
}

}  // namespace oracle
