#include "auglag/scalar_fn.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "auglag/errors.hpp"

namespace auglag {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

// ln(1 + e^t) without overflow.
double softplus(double t) { return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

double sigmoid(double t) {
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace

ScalarFn ScalarFn::quadratic(double a) {
  if (!(a > 0)) throw DomainError("quadratic generator needs a > 0");
  ScalarFn f(ScalarKind::Quadratic);
  f.a_ = a;
  return f;
}

ScalarFn ScalarFn::odd_power(int n) {
  if (n < 1) throw DomainError("odd-power generator needs n >= 1");
  ScalarFn f(ScalarKind::OddPower);
  f.n_ = n;
  return f;
}

ScalarFn ScalarFn::even_power(int n) {
  if (n < 1) throw DomainError("even-power generator needs n >= 1");
  ScalarFn f(ScalarKind::EvenPower);
  f.n_ = n;
  return f;
}

ScalarFn ScalarFn::tabulated(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() < 2 || xs.size() != ys.size()) throw DomainError("tabulated generator needs >= 2 points");
  if (!std::is_sorted(xs.begin(), xs.end()) || std::adjacent_find(xs.begin(), xs.end()) != xs.end()) {
    throw DomainError("tabulated abscissae must be strictly increasing");
  }
  ScalarFn f(ScalarKind::Tabulated);
  f.xs_ = std::move(xs);
  f.ys_ = std::move(ys);
  return f;
}

ScalarFn ScalarFn::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "identity") return identity();
  if (head == "quadratic") return quadratic(arg.empty() ? 0.5 : std::stod(arg));
  if (head == "odd-power") return odd_power(arg.empty() ? 1 : std::stoi(arg));
  if (head == "even-power") return even_power(arg.empty() ? 2 : std::stoi(arg));
  if (head == "expm1") return expm1();
  if (head == "log-sigmoid") return log_sigmoid();
  if (head == "neg-log1m") return neg_log1m();
  if (head == "inv-m1") return inv_m1();
  if (head == "hyperbolic") return hyperbolic();
  if (head == "pos-cube") return pos_cube();
  if (head == "exp") return exp();
  if (head == "pos-part") return pos_part();
  throw DomainError("unknown scalar generator: " + text);
}

std::string ScalarFn::name() const {
  std::ostringstream os;
  switch (kind_) {
    case ScalarKind::Identity: return "identity";
    case ScalarKind::Quadratic: os << "quadratic:" << a_; return os.str();
    case ScalarKind::OddPower: os << "odd-power:" << n_; return os.str();
    case ScalarKind::EvenPower: os << "even-power:" << n_; return os.str();
    case ScalarKind::ExpM1: return "expm1";
    case ScalarKind::LogSigmoid: return "log-sigmoid";
    case ScalarKind::NegLog1m: return "neg-log1m";
    case ScalarKind::InvM1: return "inv-m1";
    case ScalarKind::Hyperbolic: return "hyperbolic";
    case ScalarKind::PosCube: return "pos-cube";
    case ScalarKind::Exp: return "exp";
    case ScalarKind::PosPart: return "pos-part";
    case ScalarKind::Tabulated: os << "tabulated:" << xs_.size(); return os.str();
  }
  return "?";
}

double ScalarFn::eps0() const {
  return (kind_ == ScalarKind::NegLog1m || kind_ == ScalarKind::InvM1) ? 1.0 : kInf;
}

bool ScalarFn::bounded_below() const {
  switch (kind_) {
    case ScalarKind::Identity:
    case ScalarKind::NegLog1m:
      return false;
    case ScalarKind::Tabulated:
      return ys_[1] - ys_[0] <= 0.0;
    default:
      return true;
  }
}

double ScalarFn::value(double t) const {
  switch (kind_) {
    case ScalarKind::Identity:
      return t;
    case ScalarKind::Quadratic:
      return a_ * t * t;
    case ScalarKind::OddPower:
      return ipow(std::fabs(t), 2 * n_ + 1) / (2 * n_ + 1);
    case ScalarKind::EvenPower:
      return ipow(t, 2 * n_) / (2 * n_);
    case ScalarKind::ExpM1:
      return std::expm1(t);
    case ScalarKind::LogSigmoid:
      return 2.0 * (softplus(t) - std::log(2.0));
    case ScalarKind::NegLog1m:
      return t < 1.0 ? -std::log1p(-t) : kInf;
    case ScalarKind::InvM1:
      return t < 1.0 ? t / (1.0 - t) : kInf;
    case ScalarKind::Hyperbolic: {
      const double h = std::hypot(t, 1.0);
      return t >= -1.0 ? t + t * t / (h + 1.0) : 1.0 / (h - t) - 1.0;
    }
    case ScalarKind::PosCube: {
      const double p = std::max(t, 0.0);
      return p * p * p;
    }
    case ScalarKind::Exp:
      return std::exp(t);
    case ScalarKind::PosPart:
      return std::max(t, 0.0);
    case ScalarKind::Tabulated: {
      std::size_t k = static_cast<std::size_t>(std::upper_bound(xs_.begin(), xs_.end(), t) - xs_.begin());
      k = std::clamp<std::size_t>(k, 1, xs_.size() - 1);
      const double s = (ys_[k] - ys_[k - 1]) / (xs_[k] - xs_[k - 1]);
      return ys_[k - 1] + s * (t - xs_[k - 1]);
    }
  }
  return kInf;
}

double ScalarFn::d1(double t) const {
  switch (kind_) {
    case ScalarKind::Identity:
      return 1.0;
    case ScalarKind::Quadratic:
      return 2.0 * a_ * t;
    case ScalarKind::OddPower:
      return std::copysign(ipow(std::fabs(t), 2 * n_), t);
    case ScalarKind::EvenPower:
      return ipow(t, 2 * n_ - 1);
    case ScalarKind::ExpM1:
    case ScalarKind::Exp:
      return std::exp(t);
    case ScalarKind::LogSigmoid:
      return 2.0 * sigmoid(t);
    case ScalarKind::NegLog1m:
      return t < 1.0 ? 1.0 / (1.0 - t) : kInf;
    case ScalarKind::InvM1:
      return t < 1.0 ? 1.0 / ((1.0 - t) * (1.0 - t)) : kInf;
    case ScalarKind::Hyperbolic: {
      const double h = std::hypot(t, 1.0);
      return t >= 0 ? 1.0 + t / h : 1.0 / (h * (h - t));
    }
    case ScalarKind::PosCube: {
      const double p = std::max(t, 0.0);
      return 3.0 * p * p;
    }
    case ScalarKind::PosPart:
      return t > 0 ? 1.0 : 0.0;
    case ScalarKind::Tabulated: {
      std::size_t k = static_cast<std::size_t>(std::upper_bound(xs_.begin(), xs_.end(), t) - xs_.begin());
      k = std::clamp<std::size_t>(k, 1, xs_.size() - 1);
      return (ys_[k] - ys_[k - 1]) / (xs_[k] - xs_[k - 1]);
    }
  }
  return kInf;
}

double ScalarFn::d2(double t) const {
  switch (kind_) {
    case ScalarKind::Identity:
    case ScalarKind::PosPart:
    case ScalarKind::Tabulated:
      return 0.0;
    case ScalarKind::Quadratic:
      return 2.0 * a_;
    case ScalarKind::OddPower:
      return 2.0 * n_ * ipow(std::fabs(t), 2 * n_ - 1);
    case ScalarKind::EvenPower:
      return (2.0 * n_ - 1.0) * ipow(t, 2 * n_ - 2);
    case ScalarKind::ExpM1:
    case ScalarKind::Exp:
      return std::exp(t);
    case ScalarKind::LogSigmoid: {
      const double s = sigmoid(t);
      return 2.0 * s * (1.0 - s);
    }
    case ScalarKind::NegLog1m:
      return t < 1.0 ? 1.0 / ((1.0 - t) * (1.0 - t)) : kInf;
    case ScalarKind::InvM1:
      return t < 1.0 ? 2.0 / ((1.0 - t) * (1.0 - t) * (1.0 - t)) : kInf;
    case ScalarKind::Hyperbolic: {
      const double h = std::hypot(t, 1.0);
      return 1.0 / (h * h * h);
    }
    case ScalarKind::PosCube:
      return 6.0 * std::max(t, 0.0);
  }
  return kInf;
}

double ScalarFn::d1_inverse(double s) const {
  switch (kind_) {
    case ScalarKind::Quadratic:
      return s / (2.0 * a_);
    case ScalarKind::OddPower:
      return std::copysign(std::pow(std::fabs(s), 1.0 / (2 * n_)), s);
    case ScalarKind::EvenPower:
      return std::copysign(std::pow(std::fabs(s), 1.0 / (2 * n_ - 1)), s);
    default:
      break;
  }
  // d1 is non-decreasing: expand a bracket, then bisect.
  double lo = -1.0;
  double hi = 1.0;
  for (int k = 0; k < 200 && d1(lo) > s; ++k) lo *= 2.0;
  for (int k = 0; k < 200 && d1(hi) < s; ++k) hi = hi < eps0() ? std::min(2.0 * hi, eps0()) : hi;
  if (d1(lo) > s || d1(hi) < s) throw DomainError("derivative of " + name() + " does not reach the target");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (d1(mid) < s) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace auglag
