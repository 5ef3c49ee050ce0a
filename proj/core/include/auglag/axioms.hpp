#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "auglag/cones.hpp"
#include "auglag/phi.hpp"

namespace auglag {

// Basic assumptions on Phi. The "s" suffix marks strong variants, the "r"
// suffix restricted ones (bounded y-sequences). A16 is the lemma derived
// from A13.
enum class AxiomId {
  A1, A2, A3, A4, A5, A6, A7, A8, A9, A9s, A10, A11,
  A12, A12s, A13, A13s, A14, A14s, A15,
  A13r, A13sr, A14r, A14sr, A15r,
  A16,
};

std::string axiom_name(AxiomId id);
AxiomId parse_axiom(const std::string& name);
// Every checkable axiom, A16 excluded.
std::vector<AxiomId> all_axioms();

enum class Verdict { Pass, PassOnHorizon, Fail, Inconclusive };

std::string verdict_name(Verdict v);
inline bool passes(Verdict v) { return v == Verdict::Pass || v == Verdict::PassOnHorizon; }

struct Witness {
  BlockVec y;
  BlockVec lambda;
  double c = 0.0;
  // Values along the auxiliary sequence (c-grid, ray radii, t-values).
  std::vector<double> sequence;
  // Size of the violation at (y, lambda, c) for pointwise axioms.
  double violation = 0.0;
  std::string note;
};

struct AxiomReport {
  AxiomId id = AxiomId::A1;
  Verdict verdict = Verdict::Inconclusive;
  std::optional<Witness> witness;
  int samples_used = 0;
  double tolerance = 0.0;
  std::string note;
};

struct SamplerCfg {
  std::uint64_t seed = 42;
  int n_samples = 500;
  std::vector<double> y_radii{0.1, 1.0, 10.0};
  std::vector<double> c_grid{0.1, 1.0, 10.0, 1e2, 1e3, 1e4, 1e5, 1e6};
  std::vector<double> lambda_radii{0.1, 1.0, 10.0};
  double tol = 1e-9;
  // Acceptance level for limit axioms at the end of the c-grid.
  double horizon_tol = 1e-2;
};

// Checks one axiom for phi bound to K (phi is rebound when its cone differs).
AxiomReport check_axiom(AxiomId id, const PhiSpec& phi, const ConeSpec& K, const SamplerCfg& cfg = {});

// liminf_{c -> inf} inf_{y in K} Phi(y, lambda, c) >= 0 over sampled
// multipliers (or the given one).
AxiomReport check_lemma_a16(const PhiSpec& phi, const ConeSpec& K, const SamplerCfg& cfg = {},
                            std::optional<BlockVec> lambda = std::nullopt);

struct CompositionReport {
  std::vector<std::vector<AxiomReport>> parts;
  std::vector<AxiomReport> composite;
  // Human-readable descriptions of implication violations; empty when the
  // composite inherits every property it should.
  std::vector<std::string> violations;
};

CompositionReport check_composition(const std::vector<PhiSpec>& parts, const SamplerCfg& cfg = {});

// Expected verdicts for the catalogued families on their default cones.
struct FamilyClaims {
  std::string key;
  PhiSpec phi;
  std::vector<AxiomId> expected_fail;
  // Cells left unasserted (vacuous or not stated for this family).
  std::vector<AxiomId> unasserted;
};

std::vector<FamilyClaims> claims_fixture();

}  // namespace auglag
