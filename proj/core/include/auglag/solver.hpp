#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "auglag/dual.hpp"
#include "auglag/inner.hpp"
#include "auglag/phi.hpp"
#include "auglag/problems.hpp"

namespace auglag {

enum class MultiplierRule { ClassicHpr, Frozen, Custom };
enum class EpsMode { Constant, Geometric };

std::string multiplier_rule_name(MultiplierRule r);
MultiplierRule parse_multiplier_rule(const std::string& s);

// lambda_{n+1} from (lambda_n, c_n, G(x_n)).
using MultiplierUpdate = std::function<BlockVec(const BlockVec&, double, const BlockVec&)>;

struct SolverCfg {
  BlockVec lambda0;
  double c0 = 1.0;
  double c_min = 1.0;
  EpsMode eps_mode = EpsMode::Constant;
  // Constant epsilon, or eps_0 of the geometric schedule eps_n = eps * ratio^n.
  double eps = 1e-8;
  double eps_ratio = 0.5;
  double tau = 0.9;
  double gamma = 2.0;
  int max_iter = 200;
  double c_max = 1e8;
  MultiplierRule rule = MultiplierRule::ClassicHpr;
  MultiplierUpdate custom_update;
  // Componentwise bound |lambda_i| <= safeguard_box, applied by projection.
  std::optional<double> safeguard_box;
  // Stop once dist(G(x_n), K) and ||V_n|| are both below this.
  std::optional<double> stop_tol;
  // The penalty test uses V_n = min{-g(x_n), mu/c_n} with mu the updated
  // multiplier lambda_{n+1} (true) or the current one lambda_n (false).
  bool v_uses_updated = true;
  InnerCfg inner;

  void validate() const;
};

double epsilon_at(const SolverCfg& cfg, int n);

struct IterateRecord {
  int n = 0;
  Point x;
  BlockVec lambda;
  double c = 0.0;
  double eps = 0.0;
  // L(x_n, lambda_n, c_n) and the lower bound L - eps on Theta(lambda_n, c_n).
  double L = 0.0;
  double theta_lb = 0.0;
  double f = 0.0;
  double feas = 0.0;
  BlockVec V;
  double v_norm = 0.0;
  // False when the inner search hit its box limit without converging.
  bool certified = true;
};

enum class Termination { MaxIter, FeasEpsOptimal, CDiverged, LUnboundedBelow };

std::string termination_name(Termination t);
Termination parse_termination(const std::string& s);

struct LimitPoint {
  // Subsequence period (1 = the whole tail converges).
  int period = 1;
  // One limit per residue class.
  std::vector<Point> points;
};

struct DualLimit {
  int period = 1;
  std::vector<std::pair<BlockVec, double>> points;
};

struct Monitors {
  bool b2_bounded = false;
  bool b3_feas_to_zero = false;
  bool b4_monotone_divergence = false;
  bool primal_bounded = false;
  std::optional<LimitPoint> primal_limit;
  std::optional<DualLimit> dual_limit;
};

struct RunReport {
  std::string problem;
  std::string phi;
  std::vector<IterateRecord> trace;
  Termination termination = Termination::MaxIter;
  Monitors monitors;
  // Set when a non-orthant multiplier update was used.
  bool experimental_update = false;
};

struct InnerSolve {
  Point x;
  ExtReal value;
  InnerStatus status = InnerStatus::Finite;
  bool certified = false;
};

// eps-optimal minimizer of L(., lambda, c) over Q.
InnerSolve inner_solve(const Problem& prob, const PhiSpec& phi, const BlockVec& lambda, double c, double eps,
                       const InnerCfg& cfg = {});

// max{lambda + c g, 0} on orthant blocks, lambda + c g on zero blocks and the
// projection of lambda + c G onto K* on SOC/SDP blocks.
BlockVec update_multiplier_classic(const ConeSpec& K, const BlockVec& lambda, double c, const BlockVec& g);
// True when K has a block for which the update is not the textbook one.
bool update_is_experimental(const ConeSpec& K);

// V = Pi_K(G + mu/c) - G, i.e. min{-g, mu/c} on the orthant.
BlockVec shifted_feasibility(const ConeSpec& K, const BlockVec& g, const BlockVec& mu, double c);

double update_penalty_classic(double c, double v_norm, double v_prev_norm, double tau, double gamma, int n);

RunReport run(const Problem& prob, const PhiSpec& phi, const SolverCfg& cfg);

// Recomputes the monitors from the trace.
Monitors compute_monitors(const std::vector<IterateRecord>& trace);

struct Lemma51Cfg {
  int max_checks = 5;
  double tol = 1e-6;
  InnerCfg inner;
};

// For sampled iterates, no x in Q with G(x) below G(x_n) in the cone order
// has f(x) < f(x_n) - eps_n - tol.
bool verify_lemma51(const Problem& prob, const PhiSpec& phi, const std::vector<IterateRecord>& trace,
                    const Lemma51Cfg& cfg = {});

struct Diagnosis {
  double eps_star = 0.0;
  ExtReal theta_star;
  std::optional<bool> dual_limit_optimal;
  std::optional<bool> primal_limit_optimal;
  std::optional<SaddleReport> saddle;
  std::vector<std::string> notes;
};

Diagnosis classify_limit(const Problem& prob, const PhiSpec& phi, const RunReport& run,
                         std::optional<double> theta_star_val = std::nullopt, const InnerCfg& cfg = {});

}  // namespace auglag
