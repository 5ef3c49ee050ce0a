#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "auglag/axioms.hpp"
#include "auglag/dual.hpp"
#include "auglag/errors.hpp"
#include "auglag/phi.hpp"
#include "auglag/problems.hpp"
#include "auglag/serialize.hpp"
#include "auglag/solver.hpp"

using namespace auglag;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string problem = "disjoint-mult";
  std::string phi = "hpr";
  std::uint64_t seed = 42;
  std::string out;
  std::string format = "csv";
};

void add_common(CLI::App* sub, Common& c, bool with_problem = true) {
  if (with_problem) {
    sub->add_option("--problem", c.problem, "builtin name or path to a JSON descriptor")->capture_default_str();
    sub->add_option("--phi", c.phi, "penalty family, optionally name@generator")->capture_default_str();
  }
  sub->add_option("--seed", c.seed, "seed for all sampling")->capture_default_str();
  sub->add_option("--out", c.out, "output file (default: stdout)");
  sub->add_option("--format", c.format, "output format")->capture_default_str();
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(c.out, std::ios::binary);
  if (!os) throw UsageError("cannot write " + c.out);
  os << text;
}

void require_format(const Common& c, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (c.format == a) return;
  }
  throw UsageError("unsupported --format " + c.format);
}

Problem load_problem(const std::string& spec) {
  const auto names = builtin_names();
  if (std::find(names.begin(), names.end(), spec) != names.end()) return builtin(spec);
  if (!std::filesystem::exists(spec)) throw UsageError("no builtin problem or file named " + spec);
  std::ifstream is(spec);
  std::stringstream ss;
  ss << is.rdbuf();
  return problem_from_json(ss.str());
}

ConeSpec parse_cone(const std::string& text) {
  std::vector<ConeSpec> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, '*')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw UsageError("cone must look like kind:dim, got " + item);
    const std::string kind = item.substr(0, colon);
    const int d = std::stoi(item.substr(colon + 1));
    if (kind == "zero") {
      parts.push_back(ConeSpec::zero(d));
    } else if (kind == "nonpos") {
      parts.push_back(ConeSpec::nonpos(d));
    } else if (kind == "soc") {
      parts.push_back(ConeSpec::soc(d));
    } else if (kind == "nsd") {
      parts.push_back(ConeSpec::nsd(d));
    } else {
      throw UsageError("unknown cone kind " + kind);
    }
  }
  if (parts.empty()) throw UsageError("empty cone");
  return parts.size() == 1 ? parts.front() : ConeSpec::product(std::move(parts));
}

ConeSpec default_cone_for(const std::string& family) {
  const std::string head = family.substr(0, family.find('@'));
  if (head.rfind("soc-", 0) == 0) return ConeSpec::soc(3);
  if (head.rfind("sdp-", 0) == 0) return ConeSpec::nsd(2);
  if (head == "hp-eq" || head == "sharp-eq" || head == "mangasarian-eq") return ConeSpec::zero(2);
  return ConeSpec::nonpos(2);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(item));
  return out;
}

// lo:hi:step, inclusive of hi up to rounding.
std::vector<double> parse_range(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) v.push_back(parse_real(item));
  if (v.size() == 1) return v;
  if (v.size() != 3 || !(v[2] > 0.0) || v[1] < v[0]) throw UsageError("range must be lo:hi:step with step > 0");
  std::vector<double> out;
  const int count = static_cast<int>(std::floor((v[1] - v[0]) / v[2] + 1e-9));
  for (int k = 0; k <= count; ++k) out.push_back(v[0] + k * v[2]);
  return out;
}

BlockVec parse_lambda(const std::string& text, const ConeSpec& K) {
  if (text.empty()) return BlockVec::zeros(K);
  const auto v = parse_list(text);
  if (v.size() != static_cast<std::size_t>(K.ambient_dim())) {
    throw UsageError("multiplier needs " + std::to_string(K.ambient_dim()) + " entries");
  }
  return BlockVec::from_flat(K, v);
}

// Cartesian product of the coordinate grid over every multiplier coordinate.
std::vector<BlockVec> lambda_grid(const std::vector<double>& axis, const ConeSpec& K) {
  const auto d = static_cast<std::size_t>(K.ambient_dim());
  std::vector<std::vector<double>> pts{{}};
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<std::vector<double>> next;
    for (const auto& p : pts) {
      for (double a : axis) {
        auto q = p;
        q.push_back(a);
        next.push_back(std::move(q));
      }
    }
    pts = std::move(next);
  }
  std::vector<BlockVec> out;
  for (const auto& p : pts) out.push_back(BlockVec::from_flat(K, p));
  return out;
}

// ---------------------------------------------------------------- solve

struct SolveOpts {
  std::string lambda0;
  double c0 = 1.0;
  double c_min = 0.0;
  double eps = 1e-8;
  std::string eps_mode = "constant";
  double eps_ratio = 0.5;
  double tau = 0.9;
  double gamma = 2.0;
  int max_iter = 200;
  double c_max = 1e8;
  std::string rule = "classic-hpr";
  double safeguard = 0.0;
  double stop_tol = 0.0;
  bool v_current = false;
};

SolverCfg make_solver_cfg(const SolveOpts& o, const ConeSpec& K) {
  SolverCfg cfg;
  cfg.lambda0 = parse_lambda(o.lambda0, K);
  cfg.c0 = o.c0;
  cfg.c_min = o.c_min > 0.0 ? o.c_min : o.c0;
  cfg.eps = o.eps;
  if (o.eps_mode == "constant") {
    cfg.eps_mode = EpsMode::Constant;
  } else if (o.eps_mode == "geometric") {
    cfg.eps_mode = EpsMode::Geometric;
  } else {
    throw UsageError("--eps-mode must be constant or geometric");
  }
  cfg.eps_ratio = o.eps_ratio;
  cfg.tau = o.tau;
  cfg.gamma = o.gamma;
  cfg.max_iter = o.max_iter;
  cfg.c_max = o.c_max;
  cfg.rule = parse_multiplier_rule(o.rule);
  if (cfg.rule == MultiplierRule::Custom) throw UsageError("the custom rule is only available from the library");
  if (o.safeguard > 0.0) cfg.safeguard_box = o.safeguard;
  if (o.stop_tol > 0.0) cfg.stop_tol = o.stop_tol;
  cfg.v_uses_updated = !o.v_current;
  return cfg;
}

void add_solve_opts(CLI::App* sub, SolveOpts& o) {
  sub->add_option("--lambda0", o.lambda0, "initial multiplier, comma separated (default 0)");
  sub->add_option("--c0", o.c0)->capture_default_str();
  sub->add_option("--c-min", o.c_min, "default: c0");
  sub->add_option("--eps", o.eps)->capture_default_str();
  sub->add_option("--eps-mode", o.eps_mode, "constant or geometric")->capture_default_str();
  sub->add_option("--eps-ratio", o.eps_ratio)->capture_default_str();
  sub->add_option("--tau", o.tau)->capture_default_str();
  sub->add_option("--gamma", o.gamma)->capture_default_str();
  sub->add_option("--max-iter", o.max_iter)->capture_default_str();
  sub->add_option("--c-max", o.c_max)->capture_default_str();
  sub->add_option("--rule", o.rule, "classic-hpr or frozen")->capture_default_str();
  sub->add_option("--safeguard", o.safeguard, "bound on |lambda_i| (0: off)");
  sub->add_option("--stop-tol", o.stop_tol, "stop when feasibility and ||V_n|| fall below (0: off)");
  sub->add_flag("--v-current", o.v_current, "penalty test uses the current multiplier in V_n");
}

int cmd_solve(const Common& c, const SolveOpts& o) {
  require_format(c, {"csv", "json"});
  const Problem prob = load_problem(c.problem);
  const PhiSpec phi = phi_from_name(c.phi, prob.K);
  const RunReport rep = run(prob, phi, make_solver_cfg(o, prob.K));
  emit(c, c.format == "json" ? run_report_to_json(rep) : trace_to_csv(rep.trace));
  std::cerr << "termination: " << termination_name(rep.termination) << " after " << rep.trace.size() << " iterations\n";
  return kExitOk;
}

// ---------------------------------------------------------------- table1

struct ExpectedRow {
  double x, l1, l2, c;
};

const ExpectedRow kExpectedTrace[] = {
    {2, 1, 1, 3},           {-3, 4, 0, 3},          {1.5, 0, 6, 6},         {-1.5, 3, 0, 6},
    {1.2, 0, 3, 12},        {-1.2, 2.4, 0, 12},     {1.0909, 0, 2.4, 24},   {-1.0909, 2.1818, 0, 24},
    {1.0435, 0, 2.1818, 48}, {-1.0435, 2.087, 0, 48},
};

int cmd_table1(const Common& c, SolveOpts o) {
  require_format(c, {"csv", "json"});
  const Problem prob = builtin("disjoint-mult");
  const PhiSpec phi = PhiSpec::rockafellar_wets(prob.K, RwSigma::HalfSqNorm);
  if (o.lambda0.empty()) o.lambda0 = "1,1";
  o.max_iter = 10;
  const RunReport rep = run(prob, phi, make_solver_cfg(o, prob.K));
  std::ostringstream os;
  int bad = 0;
  char buf[160];
  os << "n        x       lambda1   lambda2   c      | expected x, lambda1, lambda2, c\n";
  for (std::size_t k = 0; k < 10; ++k) {
    const ExpectedRow& e = kExpectedTrace[k];
    if (k >= rep.trace.size()) {
      os << k << ": missing (run ended with " << termination_name(rep.termination) << ")\n";
      ++bad;
      continue;
    }
    const IterateRecord& r = rep.trace[k];
    const auto l = r.lambda.to_flat();
    std::string marks;
    if (std::fabs(r.x[0] - e.x) > 1e-3) marks += " x";
    if (std::fabs(l[0] - e.l1) > 1e-3) marks += " lambda1";
    if (std::fabs(l[1] - e.l2) > 1e-3) marks += " lambda2";
    if (r.c != e.c) marks += " c";
    if (!marks.empty()) ++bad;
    std::snprintf(buf, sizeof buf, "%-2zu %9.4f %9.4f %9.4f %6g | %8.4f %8.4f %8.4f %4g%s%s\n", k, r.x[0], l[0], l[1],
                  r.c, e.x, e.l1, e.l2, e.c, marks.empty() ? "" : "  MISMATCH:", marks.c_str());
    os << buf;
  }
  os << (bad == 0 ? "PASS" : "FAIL") << ": " << (10 - bad) << "/10 rows match\n";
  std::cout << os.str();
  if (!c.out.empty()) emit(c, c.format == "json" ? run_report_to_json(rep) : trace_to_csv(rep.trace));
  return bad == 0 ? kExitOk : kExitMismatch;
}

// ---------------------------------------------------------------- check-axioms

struct AxiomOpts {
  std::vector<std::string> families;
  std::string cone;
  std::string axioms;
  int samples = 500;
};

int cmd_check_axioms(const Common& c, const AxiomOpts& o) {
  require_format(c, {"csv", "json", "md"});
  SamplerCfg cfg;
  cfg.seed = c.seed;
  cfg.n_samples = o.samples;
  std::vector<AxiomId> ids;
  if (o.axioms.empty()) {
    ids = all_axioms();
  } else {
    std::stringstream ss(o.axioms);
    std::string item;
    while (std::getline(ss, item, ',')) ids.push_back(parse_axiom(item));
  }
  std::vector<std::pair<std::string, PhiSpec>> targets;
  if (o.families.empty()) {
    for (const auto& fc : claims_fixture()) targets.emplace_back(fc.key, fc.phi);
  } else {
    for (const auto& f : o.families) {
      const ConeSpec K = o.cone.empty() ? default_cone_for(f) : parse_cone(o.cone);
      targets.emplace_back(f, phi_from_name(f, K));
    }
  }
  std::vector<AxiomRow> rows;
  for (const auto& [key, phi] : targets) {
    AxiomRow row{key, {}};
    for (AxiomId id : ids) row.reports.push_back(check_axiom(id, phi, phi.cone(), cfg));
    rows.push_back(std::move(row));
  }
  if (c.format == "md") {
    emit(c, axiom_matrix_to_markdown(rows));
  } else if (c.format == "csv") {
    emit(c, axiom_matrix_to_csv(rows));
  } else {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
      nlohmann::ordered_json reps = nlohmann::ordered_json::array();
      for (const auto& r : row.reports) {
        nlohmann::ordered_json e{{"axiom", axiom_name(r.id)},
                                 {"verdict", verdict_name(r.verdict)},
                                 {"samples", r.samples_used},
                                 {"note", r.note}};
        if (r.witness) {
          e["witness"] = {{"y", r.witness->y.to_flat()},
                          {"lambda", r.witness->lambda.to_flat()},
                          {"c", r.witness->c},
                          {"note", r.witness->note}};
        }
        reps.push_back(e);
      }
      j.push_back({{"family", row.family}, {"reports", reps}});
    }
    emit(c, j.dump(2) + "\n");
  }
  return kExitOk;
}

// ---------------------------------------------------------------- dual-scan, gap, penalty-map

struct ScanOpts {
  std::string lambda_range = "0";
  std::string c_range = "1";
  std::string lambda0;
};

int cmd_dual_scan(const Common& c, const ScanOpts& o) {
  require_format(c, {"csv", "json"});
  const Problem prob = load_problem(c.problem);
  const PhiSpec phi = phi_from_name(c.phi, prob.K);
  std::vector<DualScanRow> rows;
  for (const auto& l : lambda_grid(parse_range(o.lambda_range), prob.K)) {
    if (!admissible(phi, l)) continue;
    for (double cc : parse_range(o.c_range)) {
      if (!(cc > 0.0)) continue;
      const DualEval d = theta(prob, phi, l, cc);
      rows.push_back(DualScanRow{l, cc, d.value, d.status});
    }
  }
  if (c.format == "csv") {
    emit(c, dual_scan_to_csv(rows));
  } else {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
      j.push_back({{"lambda", r.lambda.to_flat()},
                   {"c", r.c},
                   {"theta", fmt_real(r.theta.value())},
                   {"status", inner_status_name(r.status)}});
    }
    emit(c, j.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_gap(const Common& c, const ScanOpts& o) {
  require_format(c, {"csv", "json"});
  const Problem prob = load_problem(c.problem);
  const PhiSpec phi = phi_from_name(c.phi, prob.K);
  std::optional<BlockVec> l0;
  if (!o.lambda0.empty()) l0 = parse_lambda(o.lambda0, prob.K);
  const GapReport g = theta_star(prob, phi, l0, default_c_schedule(), InnerCfg{}, c.seed);
  if (c.format == "json") {
    emit(c, gap_report_to_json(g));
  } else {
    std::ostringstream os;
    os << "key,value\n";
    os << "status," << g.status << "\n";
    os << "theta_star," << fmt_real(g.theta_star.value()) << "\n";
    os << "f_star," << (g.f_star ? fmt_real(*g.f_star) : "") << "\n";
    os << "gap," << fmt_real(g.gap.value()) << "\n";
    os << "liminf_beta," << fmt_real(g.liminf_beta.value()) << "\n";
    os << "formula_guaranteed," << (g.formula_guaranteed ? "true" : "false") << "\n";
    emit(c, os.str());
  }
  return kExitOk;
}

int cmd_penalty_map(const Common& c, const ScanOpts& o, double tol, double c_max) {
  require_format(c, {"csv", "json"});
  const Problem prob = load_problem(c.problem);
  const PhiSpec phi = phi_from_name(c.phi, prob.K);
  const GapReport g = theta_star(prob, phi, std::nullopt, default_c_schedule(), InnerCfg{}, c.seed);
  std::vector<PenaltyRow> rows;
  for (const auto& l : lambda_grid(parse_range(o.lambda_range), prob.K)) {
    if (!admissible(phi, l)) continue;
    rows.push_back(PenaltyRow{l, penalty_map(prob, phi, l, g.theta_star.value(), tol, c_max)});
  }
  if (c.format == "csv") {
    emit(c, penalty_map_to_csv(rows));
  } else {
    nlohmann::ordered_json j{{"theta_star", fmt_real(g.theta_star.value())}, {"rows", nlohmann::ordered_json::array()}};
    for (const auto& r : rows) j["rows"].push_back({{"lambda", r.lambda.to_flat()}, {"c_star", fmt_real(r.c_star.value())}});
    emit(c, j.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_list(const Common& c) {
  std::ostringstream os;
  os << "problems:";
  for (const auto& n : builtin_names()) os << " " << n;
  os << "\nfamilies:";
  for (const auto& n : phi_names()) os << " " << n;
  os << "\naxioms:";
  for (AxiomId id : all_axioms()) os << " " << axiom_name(id);
  os << "\n";
  emit(c, os.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Augmented Lagrangian duality toolkit"};
  app.require_subcommand(1);

  Common solve_c, table_c, axiom_c, scan_c, gap_c, pmap_c, list_c;
  SolveOpts solve_o, table_o;
  AxiomOpts axiom_o;
  ScanOpts scan_o, gap_o, pmap_o;
  double pmap_tol = 1e-8;
  double pmap_cmax = 1e6;

  auto* solve = app.add_subcommand("solve", "run the model augmented Lagrangian method");
  add_common(solve, solve_c);
  add_solve_opts(solve, solve_o);

  auto* table1 = app.add_subcommand("table1", "reproduce the disjoint-multiplier iteration table");
  add_common(table1, table_c, false);
  table_o.c0 = 3.0;
  table_o.c_min = 2.5;
  table_o.eps = 1e-10;
  add_solve_opts(table1, table_o);

  auto* axioms = app.add_subcommand("check-axioms", "verdict matrix of the basic assumptions");
  axiom_c.format = "md";
  add_common(axioms, axiom_c, false);
  axioms->add_option("--family", axiom_o.families, "family name (repeatable; default: the claims fixture)");
  axioms->add_option("--cone", axiom_o.cone, "cone such as nonpos:2, soc:3, nsd:2 or nonpos:1*soc:3");
  axioms->add_option("--axioms", axiom_o.axioms, "comma separated subset, e.g. A1,A12");
  axioms->add_option("--samples", axiom_o.samples)->capture_default_str();

  auto* scan = app.add_subcommand("dual-scan", "Theta(lambda, c) over a grid");
  add_common(scan, scan_c);
  scan->add_option("--lambda", scan_o.lambda_range, "lo:hi:step per multiplier coordinate")->capture_default_str();
  scan->add_option("--c", scan_o.c_range, "lo:hi:step")->capture_default_str();

  auto* gap = app.add_subcommand("gap", "dual optimal value and duality gap");
  gap_c.format = "json";
  add_common(gap, gap_c);
  gap->add_option("--lambda0", gap_o.lambda0, "multiplier for the c-limit (default 0)");

  auto* pmap = app.add_subcommand("penalty-map", "smallest c reaching the dual optimal value");
  add_common(pmap, pmap_c);
  pmap->add_option("--lambda", pmap_o.lambda_range, "lo:hi:step per multiplier coordinate")->capture_default_str();
  pmap->add_option("--tol", pmap_tol)->capture_default_str();
  pmap->add_option("--c-max", pmap_cmax)->capture_default_str();

  auto* list = app.add_subcommand("list", "builtin problems, families and axioms");
  add_common(list, list_c, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*solve) return cmd_solve(solve_c, solve_o);
    if (*table1) return cmd_table1(table_c, table_o);
    if (*axioms) return cmd_check_axioms(axiom_c, axiom_o);
    if (*scan) return cmd_dual_scan(scan_c, scan_o);
    if (*gap) return cmd_gap(gap_c, gap_o);
    if (*pmap) return cmd_penalty_map(pmap_c, pmap_o, pmap_tol, pmap_cmax);
    if (*list) return cmd_list(list_c);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    // Structural, admissibility and domain errors all come from the spec.
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
