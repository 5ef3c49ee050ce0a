#pragma once

#include <string>
#include <vector>

#include "auglag/axioms.hpp"
#include "auglag/dual.hpp"
#include "auglag/solver.hpp"

namespace auglag {

// Trace CSV: n,x1..,lambda1..,c,eps,L,f,feas,Vnorm (lambda flattened, upper
// triangle for matrix blocks).
std::string trace_to_csv(const std::vector<IterateRecord>& trace);
// Inverse of trace_to_csv; fields absent from the CSV (V, theta_lb,
// certified) are rebuilt as zero / L - eps / true.
std::vector<IterateRecord> trace_from_csv(const std::string& text, const ConeSpec& K);

std::string run_report_to_json(const RunReport& r);
RunReport run_report_from_json(const std::string& text, const ConeSpec& K);

std::string gap_report_to_json(const GapReport& g);
GapReport gap_report_from_json(const std::string& text, const ConeSpec& K);

struct DualScanRow {
  BlockVec lambda;
  double c = 0.0;
  ExtReal theta;
  InnerStatus status = InnerStatus::Finite;
};

// lambda1..,c,theta,status
std::string dual_scan_to_csv(const std::vector<DualScanRow>& rows);
std::vector<DualScanRow> dual_scan_from_csv(const std::string& text, const ConeSpec& K);

struct PenaltyRow {
  BlockVec lambda;
  ExtReal c_star;
};

// lambda1..,c_star
std::string penalty_map_to_csv(const std::vector<PenaltyRow>& rows);
std::vector<PenaltyRow> penalty_map_from_csv(const std::string& text, const ConeSpec& K);

struct AxiomRow {
  std::string family;
  std::vector<AxiomReport> reports;
};

// family,A1,A2,... with verdict names.
std::string axiom_matrix_to_csv(const std::vector<AxiomRow>& rows);
std::string axiom_matrix_to_markdown(const std::vector<AxiomRow>& rows);

std::string fmt_real(double v);
double parse_real(const std::string& s);

}  // namespace auglag
