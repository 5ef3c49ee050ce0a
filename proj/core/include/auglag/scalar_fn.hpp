#pragma once

#include <limits>
#include <string>
#include <vector>

namespace auglag {

// Named scalar generators used as phi, xi, psi or sigma profiles.
enum class ScalarKind {
  Identity,     // t
  Quadratic,    // a t^2
  OddPower,     // |t| t^{2n} / (2n+1)
  EvenPower,    // t^{2n} / (2n)
  ExpM1,        // e^t - 1
  LogSigmoid,   // 2 (ln(e^t + 1) - ln 2)
  NegLog1m,     // -ln(1 - t), t < 1
  InvM1,        // 1/(1 - t) - 1, t < 1
  Hyperbolic,   // t + sqrt(t^2 + 1) - 1
  PosCube,      // max{0, t}^3
  Exp,          // e^t
  PosPart,      // max{0, t}
  Tabulated,    // piecewise linear through (x_k, y_k), linear extrapolation
};

class ScalarFn {
 public:
  ScalarFn() = default;

  static ScalarFn identity() { return ScalarFn(ScalarKind::Identity); }
  static ScalarFn quadratic(double a);
  static ScalarFn odd_power(int n);
  static ScalarFn even_power(int n);
  static ScalarFn expm1() { return ScalarFn(ScalarKind::ExpM1); }
  static ScalarFn log_sigmoid() { return ScalarFn(ScalarKind::LogSigmoid); }
  static ScalarFn neg_log1m() { return ScalarFn(ScalarKind::NegLog1m); }
  static ScalarFn inv_m1() { return ScalarFn(ScalarKind::InvM1); }
  static ScalarFn hyperbolic() { return ScalarFn(ScalarKind::Hyperbolic); }
  static ScalarFn pos_cube() { return ScalarFn(ScalarKind::PosCube); }
  static ScalarFn exp() { return ScalarFn(ScalarKind::Exp); }
  static ScalarFn pos_part() { return ScalarFn(ScalarKind::PosPart); }
  static ScalarFn tabulated(std::vector<double> xs, std::vector<double> ys);

  // Parses names such as "expm1", "quadratic:0.5", "even-power:2".
  static ScalarFn parse(const std::string& text);
  std::string name() const;

  ScalarKind kind() const { return kind_; }
  double param() const { return a_; }
  int power() const { return n_; }

  // Value; +inf at or beyond the domain bound eps0().
  double value(double t) const;
  double d1(double t) const;
  double d2(double t) const;
  // Domain is (-inf, eps0).
  double eps0() const;
  bool bounded_below() const;
  // Solves d1(t) = s for strictly convex generators with surjective d1.
  double d1_inverse(double s) const;

  friend bool operator==(const ScalarFn& a, const ScalarFn& b) {
    return a.kind_ == b.kind_ && a.a_ == b.a_ && a.n_ == b.n_ && a.xs_ == b.xs_ && a.ys_ == b.ys_;
  }

 private:
  explicit ScalarFn(ScalarKind k) : kind_(k) {}
  ScalarKind kind_ = ScalarKind::Identity;
  double a_ = 0.0;
  int n_ = 1;
  std::vector<double> xs_;
  std::vector<double> ys_;
};

}  // namespace auglag
