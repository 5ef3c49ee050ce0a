#include "auglag/serialize.hpp"

#include <cmath>
#include <sstream>

#include "auglag/errors.hpp"
#include "json_util.hpp"

namespace auglag {

using detail::json;

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(split(line, ','));
  }
  if (rows.empty()) throw DomainError("empty CSV");
  return rows;
}

void header_prefix(std::ostringstream& os, const char* name, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) os << name << i + 1 << ",";
}

BlockVec flat_slice(const std::vector<std::string>& row, std::size_t from, std::size_t count, const ConeSpec& K) {
  std::vector<double> v;
  for (std::size_t i = 0; i < count; ++i) v.push_back(parse_real(row.at(from + i)));
  return BlockVec::from_flat(K, v);
}

std::size_t count_prefix(const std::vector<std::string>& header, const std::string& prefix) {
  std::size_t n = 0;
  for (const auto& h : header) {
    if (h.rfind(prefix, 0) == 0 && h.size() > prefix.size() && std::isdigit(static_cast<unsigned char>(h[prefix.size()]))) ++n;
  }
  return n;
}

json num(double v) { return detail::ext_to_json(ExtReal(v)); }
double num_from(const json& j) { return detail::ext_from_json(j).value(); }

json point_json(const Point& x) {
  json a = json::array();
  for (double v : x) a.push_back(num(v));
  return a;
}

Point point_from(const json& j) {
  Point x;
  for (const auto& v : j) x.push_back(num_from(v));
  return x;
}

json flat_json(const BlockVec& b) { return point_json(b.to_flat()); }
BlockVec flat_from(const json& j, const ConeSpec& K) { return BlockVec::from_flat(K, point_from(j)); }

InnerStatus parse_inner_status(const std::string& s) {
  for (InnerStatus st : {InnerStatus::Finite, InnerStatus::MinusInfinityDetected, InnerStatus::MaxBoxReached}) {
    if (inner_status_name(st) == s) return st;
  }
  throw DomainError("unknown inner status: " + s);
}

}  // namespace

std::string fmt_real(double v) { return detail::fmt_double(v); }

double parse_real(const std::string& s) {
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw DomainError("malformed number: " + s);
  return v;
}

// ---------------------------------------------------------------- trace

std::string trace_to_csv(const std::vector<IterateRecord>& trace) {
  std::ostringstream os;
  const std::size_t nx = trace.empty() ? 0 : trace.front().x.size();
  const std::size_t nl = trace.empty() ? 0 : trace.front().lambda.to_flat().size();
  os << "n,";
  header_prefix(os, "x", nx);
  header_prefix(os, "lambda", nl);
  os << "c,eps,L,f,feas,Vnorm\n";
  for (const auto& r : trace) {
    os << r.n << ",";
    for (double v : r.x) os << fmt_real(v) << ",";
    for (double v : r.lambda.to_flat()) os << fmt_real(v) << ",";
    os << fmt_real(r.c) << "," << fmt_real(r.eps) << "," << fmt_real(r.L) << "," << fmt_real(r.f) << ","
       << fmt_real(r.feas) << "," << fmt_real(r.v_norm) << "\n";
  }
  return os.str();
}

std::vector<IterateRecord> trace_from_csv(const std::string& text, const ConeSpec& K) {
  const auto rows = read_csv(text);
  const auto& h = rows.front();
  const std::size_t nx = count_prefix(h, "x");
  const std::size_t nl = count_prefix(h, "lambda");
  if (h.size() != 1 + nx + nl + 6 || h.front() != "n") throw DomainError("trace CSV: unexpected header");
  if (nl != static_cast<std::size_t>(K.ambient_dim())) throw DomainError("trace CSV: multiplier width does not match the cone");
  std::vector<IterateRecord> out;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto& r = rows[k];
    if (r.size() != h.size()) throw DomainError("trace CSV: ragged row");
    IterateRecord rec;
    rec.n = std::stoi(r[0]);
    for (std::size_t i = 0; i < nx; ++i) rec.x.push_back(parse_real(r[1 + i]));
    rec.lambda = flat_slice(r, 1 + nx, nl, K);
    std::size_t j = 1 + nx + nl;
    rec.c = parse_real(r[j++]);
    rec.eps = parse_real(r[j++]);
    rec.L = parse_real(r[j++]);
    rec.f = parse_real(r[j++]);
    rec.feas = parse_real(r[j++]);
    rec.v_norm = parse_real(r[j++]);
    rec.theta_lb = rec.L - rec.eps;
    rec.V = BlockVec::zeros(K);
    out.push_back(std::move(rec));
  }
  return out;
}

// ---------------------------------------------------------------- run report

std::string run_report_to_json(const RunReport& r) {
  json trace = json::array();
  for (const auto& it : r.trace) {
    trace.push_back(json{{"n", it.n},
                         {"x", point_json(it.x)},
                         {"lambda", flat_json(it.lambda)},
                         {"c", num(it.c)},
                         {"eps", num(it.eps)},
                         {"L", num(it.L)},
                         {"theta_lb", num(it.theta_lb)},
                         {"f", num(it.f)},
                         {"feas", num(it.feas)},
                         {"V", flat_json(it.V)},
                         {"Vnorm", num(it.v_norm)},
                         {"certified", it.certified}});
  }
  const Monitors& m = r.monitors;
  json mon{{"B2_bounded", m.b2_bounded},
           {"B3_feas_to_zero", m.b3_feas_to_zero},
           {"B4_monotone_divergence", m.b4_monotone_divergence},
           {"primal_bounded", m.primal_bounded}};
  if (m.primal_limit) {
    json pts = json::array();
    for (const auto& x : m.primal_limit->points) pts.push_back(point_json(x));
    mon["primal_limit"] = json{{"period", m.primal_limit->period}, {"points", pts}};
  } else {
    mon["primal_limit"] = nullptr;
  }
  if (m.dual_limit) {
    json pts = json::array();
    for (const auto& [l, c] : m.dual_limit->points) pts.push_back(json{{"lambda", flat_json(l)}, {"c", num(c)}});
    mon["dual_limit_point"] = json{{"period", m.dual_limit->period}, {"points", pts}};
  } else {
    mon["dual_limit_point"] = nullptr;
  }
  json out{{"problem", r.problem},
           {"phi", r.phi},
           {"termination", termination_name(r.termination)},
           {"experimental_update", r.experimental_update},
           {"iterations", r.trace.size()},
           {"monitors", mon},
           {"trace", trace}};
  return out.dump(2) + "\n";
}

RunReport run_report_from_json(const std::string& text, const ConeSpec& K) {
  const json j = json::parse(text);
  RunReport r;
  r.problem = j.at("problem").get<std::string>();
  r.phi = j.at("phi").get<std::string>();
  r.termination = parse_termination(j.at("termination").get<std::string>());
  r.experimental_update = j.at("experimental_update").get<bool>();
  for (const auto& it : j.at("trace")) {
    IterateRecord rec;
    rec.n = it.at("n").get<int>();
    rec.x = point_from(it.at("x"));
    rec.lambda = flat_from(it.at("lambda"), K);
    rec.c = num_from(it.at("c"));
    rec.eps = num_from(it.at("eps"));
    rec.L = num_from(it.at("L"));
    rec.theta_lb = num_from(it.at("theta_lb"));
    rec.f = num_from(it.at("f"));
    rec.feas = num_from(it.at("feas"));
    rec.V = flat_from(it.at("V"), K);
    rec.v_norm = num_from(it.at("Vnorm"));
    rec.certified = it.at("certified").get<bool>();
    r.trace.push_back(std::move(rec));
  }
  const json& mon = j.at("monitors");
  Monitors& m = r.monitors;
  m.b2_bounded = mon.at("B2_bounded").get<bool>();
  m.b3_feas_to_zero = mon.at("B3_feas_to_zero").get<bool>();
  m.b4_monotone_divergence = mon.at("B4_monotone_divergence").get<bool>();
  m.primal_bounded = mon.at("primal_bounded").get<bool>();
  if (!mon.at("primal_limit").is_null()) {
    LimitPoint lp;
    lp.period = mon["primal_limit"].at("period").get<int>();
    for (const auto& p : mon["primal_limit"].at("points")) lp.points.push_back(point_from(p));
    m.primal_limit = lp;
  }
  if (!mon.at("dual_limit_point").is_null()) {
    DualLimit dl;
    dl.period = mon["dual_limit_point"].at("period").get<int>();
    for (const auto& p : mon["dual_limit_point"].at("points")) {
      dl.points.emplace_back(flat_from(p.at("lambda"), K), num_from(p.at("c")));
    }
    m.dual_limit = dl;
  }
  return r;
}

// ---------------------------------------------------------------- gap report

std::string gap_report_to_json(const GapReport& g) {
  json thetas = json::array();
  for (const auto& t : g.theta_values) thetas.push_back(detail::ext_to_json(t));
  json betas = json::array();
  for (const auto& b : g.beta_minima) betas.push_back(detail::ext_to_json(b));
  json cs = json::array();
  for (double c : g.c_schedule) cs.push_back(num(c));
  json ps = json::array();
  for (double p : g.p_scales) ps.push_back(num(p));
  json out{{"status", g.status},
           {"theta_star", detail::ext_to_json(g.theta_star)},
           {"f_star", g.f_star ? num(*g.f_star) : json(nullptr)},
           {"gap", detail::ext_to_json(g.gap)},
           {"liminf_beta", detail::ext_to_json(g.liminf_beta)},
           {"formula_guaranteed", g.formula_guaranteed},
           {"lambda0", flat_json(g.lambda0_used)},
           {"c_schedule", cs},
           {"theta_values", thetas},
           {"p_scales", ps},
           {"beta_minima", betas}};
  return out.dump(2) + "\n";
}

GapReport gap_report_from_json(const std::string& text, const ConeSpec& K) {
  const json j = json::parse(text);
  GapReport g;
  g.status = j.at("status").get<std::string>();
  g.theta_star = detail::ext_from_json(j.at("theta_star"));
  if (!j.at("f_star").is_null()) g.f_star = num_from(j.at("f_star"));
  g.gap = detail::ext_from_json(j.at("gap"));
  g.liminf_beta = detail::ext_from_json(j.at("liminf_beta"));
  g.formula_guaranteed = j.at("formula_guaranteed").get<bool>();
  g.lambda0_used = flat_from(j.at("lambda0"), K);
  for (const auto& c : j.at("c_schedule")) g.c_schedule.push_back(num_from(c));
  for (const auto& t : j.at("theta_values")) g.theta_values.push_back(detail::ext_from_json(t));
  for (const auto& p : j.at("p_scales")) g.p_scales.push_back(num_from(p));
  for (const auto& b : j.at("beta_minima")) g.beta_minima.push_back(detail::ext_from_json(b));
  return g;
}

// ---------------------------------------------------------------- scans

std::string dual_scan_to_csv(const std::vector<DualScanRow>& rows) {
  std::ostringstream os;
  header_prefix(os, "lambda", rows.empty() ? 0 : rows.front().lambda.to_flat().size());
  os << "c,theta,status\n";
  for (const auto& r : rows) {
    for (double v : r.lambda.to_flat()) os << fmt_real(v) << ",";
    os << fmt_real(r.c) << "," << fmt_real(r.theta.value()) << "," << inner_status_name(r.status) << "\n";
  }
  return os.str();
}

std::vector<DualScanRow> dual_scan_from_csv(const std::string& text, const ConeSpec& K) {
  const auto rows = read_csv(text);
  const std::size_t nl = count_prefix(rows.front(), "lambda");
  if (rows.front().size() != nl + 3) throw DomainError("dual-scan CSV: unexpected header");
  std::vector<DualScanRow> out;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto& r = rows[k];
    if (r.size() != nl + 3) throw DomainError("dual-scan CSV: ragged row");
    out.push_back(DualScanRow{flat_slice(r, 0, nl, K), parse_real(r[nl]), ExtReal(parse_real(r[nl + 1])),
                              parse_inner_status(r[nl + 2])});
  }
  return out;
}

std::string penalty_map_to_csv(const std::vector<PenaltyRow>& rows) {
  std::ostringstream os;
  header_prefix(os, "lambda", rows.empty() ? 0 : rows.front().lambda.to_flat().size());
  os << "c_star\n";
  for (const auto& r : rows) {
    for (double v : r.lambda.to_flat()) os << fmt_real(v) << ",";
    os << fmt_real(r.c_star.value()) << "\n";
  }
  return os.str();
}

std::vector<PenaltyRow> penalty_map_from_csv(const std::string& text, const ConeSpec& K) {
  const auto rows = read_csv(text);
  const std::size_t nl = count_prefix(rows.front(), "lambda");
  if (rows.front().size() != nl + 1) throw DomainError("penalty-map CSV: unexpected header");
  std::vector<PenaltyRow> out;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto& r = rows[k];
    if (r.size() != nl + 1) throw DomainError("penalty-map CSV: ragged row");
    out.push_back(PenaltyRow{flat_slice(r, 0, nl, K), ExtReal(parse_real(r[nl]))});
  }
  return out;
}

// ---------------------------------------------------------------- axiom matrix

std::string axiom_matrix_to_csv(const std::vector<AxiomRow>& rows) {
  std::ostringstream os;
  os << "family";
  if (!rows.empty()) {
    for (const auto& rep : rows.front().reports) os << "," << axiom_name(rep.id);
  }
  os << "\n";
  for (const auto& row : rows) {
    os << row.family;
    for (const auto& rep : row.reports) os << "," << verdict_name(rep.verdict);
    os << "\n";
  }
  return os.str();
}

std::string axiom_matrix_to_markdown(const std::vector<AxiomRow>& rows) {
  std::ostringstream os;
  os << "| family |";
  if (!rows.empty()) {
    for (const auto& rep : rows.front().reports) os << " " << axiom_name(rep.id) << " |";
  }
  os << "\n|---|";
  if (!rows.empty()) {
    for (std::size_t i = 0; i < rows.front().reports.size(); ++i) os << "---|";
  }
  os << "\n";
  for (const auto& row : rows) {
    os << "| " << row.family << " |";
    for (const auto& rep : row.reports) {
      const char* mark = rep.verdict == Verdict::Pass            ? "pass"
                         : rep.verdict == Verdict::PassOnHorizon ? "pass*"
                         : rep.verdict == Verdict::Fail          ? "FAIL"
                                                                 : "?";
      os << " " << mark << " |";
    }
    os << "\n";
  }
  os << "\npass* = consistent on the sampled horizon; ? = inconclusive\n";
  return os.str();
}

}  // namespace auglag
