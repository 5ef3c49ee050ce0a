#include "auglag/problems.hpp"

#include <cmath>
#include <numbers>

#include "auglag/errors.hpp"
#include "json_util.hpp"

namespace auglag {

using detail::json;

Box Box::whole(int n) {
  const double inf = std::numeric_limits<double>::infinity();
  return Box{std::vector<double>(static_cast<std::size_t>(n), -inf), std::vector<double>(static_cast<std::size_t>(n), inf)};
}

bool Box::contains(const Point& x) const { return violation(x) == 0.0; }

double Box::violation(const Point& x) const {
  double v = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) v += std::max({0.0, lo[i] - x[i], x[i] - hi[i]});
  return v;
}

namespace {

Problem make(std::string name, int n, ConeSpec K) {
  Problem p;
  p.name = name;
  p.n = n;
  p.K = std::move(K);
  p.Q = Box::whole(n);
  p.descriptor = json{{"builtin", name}}.dump();
  return p;
}

Problem disjoint_mult() {
  Problem p = make("disjoint-mult", 1, ConeSpec::nonpos(2));
  p.f = [](const Point& x) { return ExtReal(-x[0] * x[0]); };
  p.G = [](const Point& x) { return BlockVec::vec({x[0] - 1.0, -x[0] - 1.0}); };
  p.f_star = -1.0;
  p.witness = {1.0};
  return p;
}

Problem sharp_demo() {
  Problem p = make("sharp-demo", 1, ConeSpec::nonpos(1));
  p.f = [](const Point& x) { return ExtReal(-x[0]); };
  p.G = [](const Point& x) { return BlockVec::vec({x[0]}); };
  p.f_star = 0.0;
  p.witness = {0.0};
  p.lambda_star = BlockVec::vec({1.0});
  return p;
}

Problem arctan_gap() {
  Problem p = make("arctan-gap", 1, ConeSpec::nonpos(1));
  p.f = [](const Point& x) { return ExtReal(-2.0 / std::numbers::pi * std::atan(x[0])); };
  // x e^{-x}; the exponent is clamped so the constraint stays finite for
  // very negative x.
  p.G = [](const Point& x) { return BlockVec::vec({x[0] * std::exp(std::min(-x[0], 600.0))}); };
  p.f_star = 0.0;
  p.witness = {0.0};
  return p;
}

Problem convex_qp() {
  Problem p = make("convex-qp", 1, ConeSpec::nonpos(1));
  p.f = [](const Point& x) { return ExtReal(x[0] * x[0]); };
  p.G = [](const Point& x) { return BlockVec::vec({1.0 - x[0]}); };
  p.f_star = 1.0;
  p.witness = {1.0};
  p.lambda_star = BlockVec::vec({2.0});
  return p;
}

// Closest point of the unit disc to (2, 2).
Problem soc_toy() {
  Problem p = make("soc-toy", 2, ConeSpec::soc(3));
  p.f = [](const Point& x) { return ExtReal((x[0] - 2.0) * (x[0] - 2.0) + (x[1] - 2.0) * (x[1] - 2.0)); };
  p.G = [](const Point& x) { return BlockVec({Block{{1.0, x[0], x[1]}, 0}}); };
  p.f_star = 9.0 - 4.0 * std::numbers::sqrt2;
  p.witness = {std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0};
  const double mu = 2.0 * (2.0 - std::numbers::sqrt2 / 2.0);
  p.lambda_star = BlockVec({Block{{-mu * std::numbers::sqrt2, mu, mu}, 0}});
  return p;
}

// min x1 + x2 subject to [[-x1, 1], [1, -x2]] negative semidefinite.
Problem sdp_toy() {
  Problem p = make("sdp-toy", 2, ConeSpec::nsd(2));
  p.f = [](const Point& x) { return ExtReal(x[0] + x[1]); };
  p.G = [](const Point& x) { return BlockVec({Block{{-x[0], 1.0, 1.0, -x[1]}, 2}}); };
  p.f_star = 2.0;
  p.witness = {1.0, 1.0};
  p.lambda_star = BlockVec({Block{{1.0, 1.0, 1.0, 1.0}, 2}});
  return p;
}

// ---------------------------------------------------------------- descriptors

struct Term {
  double c;
  std::vector<int> e;
};
using Poly = std::vector<Term>;

Poly parse_poly(const json& j, int n) {
  Poly out;
  for (const auto& t : j) {
    Term term{t.at("c").get<double>(), std::vector<int>(static_cast<std::size_t>(n), 0)};
    if (t.contains("e")) {
      const auto e = t.at("e").get<std::vector<int>>();
      if (static_cast<int>(e.size()) != n) throw StructuralError("monomial exponent length differs from n");
      for (int k : e) {
        if (k < 0) throw DomainError("negative exponent in polynomial term");
      }
      term.e = e;
    }
    out.push_back(std::move(term));
  }
  return out;
}

double eval_poly(const Poly& p, const Point& x) {
  double s = 0.0;
  for (const auto& t : p) {
    double m = t.c;
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (int k = 0; k < t.e[i]; ++k) m *= x[i];
    }
    s += m;
  }
  return s;
}

// Polynomial or rational expression; a zero denominator gives NaN.
std::function<double(const Point&)> parse_expr(const json& j, int n) {
  if (j.contains("poly")) {
    Poly p = parse_poly(j.at("poly"), n);
    return [p](const Point& x) { return eval_poly(p, x); };
  }
  if (j.contains("num") && j.contains("den")) {
    Poly num = parse_poly(j.at("num"), n);
    Poly den = parse_poly(j.at("den"), n);
    return [num, den](const Point& x) {
      const double d = eval_poly(den, x);
      return d == 0.0 ? std::numeric_limits<double>::quiet_NaN() : eval_poly(num, x) / d;
    };
  }
  throw StructuralError("expression needs \"poly\" or \"num\"/\"den\"");
}

}  // namespace

std::vector<std::string> builtin_names() {
  return {"disjoint-mult", "sharp-demo", "arctan-gap", "convex-qp", "soc-toy", "sdp-toy"};
}

Problem builtin(const std::string& name) {
  if (name == "disjoint-mult") return disjoint_mult();
  if (name == "sharp-demo") return sharp_demo();
  if (name == "arctan-gap") return arctan_gap();
  if (name == "convex-qp") return convex_qp();
  if (name == "soc-toy") return soc_toy();
  if (name == "sdp-toy") return sdp_toy();
  throw DomainError("unknown problem: " + name);
}

Problem perturbed(const Problem& base, const BlockVec& p) {
  if (!p.matches(base.K)) throw StructuralError("perturbation does not match " + base.K.describe());
  Problem out = base;
  out.name = base.name + "[perturbed]";
  auto G = base.G;
  out.G = [G, p](const Point& x) { return G(x) - p; };
  out.f_star.reset();
  out.lambda_star.reset();
  return out;
}

ExtReal eval_f(const Problem& prob, const Point& x) {
  if (static_cast<int>(x.size()) != prob.n) throw StructuralError("point dimension differs from n");
  return prob.f(x);
}

BlockVec eval_G(const Problem& prob, const Point& x) {
  if (static_cast<int>(x.size()) != prob.n) throw StructuralError("point dimension differs from n");
  return prob.G(x);
}

double feasibility(const Problem& prob, const Point& x) {
  return dist_to_cone(eval_G(prob, x), prob.K) + prob.Q.violation(x);
}

Problem problem_from_json(const std::string& text) {
  const json j = json::parse(text);
  if (j.contains("builtin")) return builtin(j.at("builtin").get<std::string>());
  const int n = j.at("n").get<int>();
  if (n < 1) throw StructuralError("problem dimension must be positive");
  Problem p;
  p.name = j.value("name", std::string("custom"));
  p.n = n;
  p.K = detail::cone_from_json(j.at("cone"));
  auto f = parse_expr(j.at("objective"), n);
  p.f = [f](const Point& x) { return ExtReal(f(x)); };
  std::vector<std::function<double(const Point&)>> gs;
  for (const auto& g : j.at("constraints")) gs.push_back(parse_expr(g, n));
  if (static_cast<int>(gs.size()) != p.K.ambient_dim()) {
    throw StructuralError("constraint count differs from the free coordinates of " + p.K.describe());
  }
  const ConeSpec K = p.K;
  p.G = [gs, K](const Point& x) {
    std::vector<double> flat;
    flat.reserve(gs.size());
    for (const auto& g : gs) flat.push_back(g(x));
    return BlockVec::from_flat(K, flat);
  };
  p.Q = Box::whole(n);
  if (j.contains("box")) {
    const auto& b = j.at("box");
    for (int i = 0; i < n; ++i) {
      p.Q.lo[static_cast<std::size_t>(i)] = detail::ext_from_json(b.at("lo").at(static_cast<std::size_t>(i))).value();
      p.Q.hi[static_cast<std::size_t>(i)] = detail::ext_from_json(b.at("hi").at(static_cast<std::size_t>(i))).value();
    }
  }
  if (j.contains("f_star")) p.f_star = j.at("f_star").get<double>();
  if (j.contains("witness")) {
    p.witness = j.at("witness").get<std::vector<double>>();
  } else {
    p.witness.assign(static_cast<std::size_t>(n), 0.0);
  }
  p.descriptor = j.dump();
  return p;
}

std::string problem_to_json(const Problem& prob) { return prob.descriptor; }

}  // namespace auglag
