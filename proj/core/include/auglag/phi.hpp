#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "auglag/cones.hpp"
#include "auglag/ext_real.hpp"
#include "auglag/scalar_fn.hpp"

namespace auglag {

enum class Family {
  RockafellarWets,
  HestenesPowellEq,
  SharpEq,
  MangasarianEq,
  EssentiallyQuadratic,
  Cubic,
  MangasarianIneq,
  ExponentialType,
  PenalizedExponential,
  PthPower,
  HyperbolicType,
  ModifiedBarrier,
  HeWuMeng,
  SocHPR,
  SocExpBarrier,
  SdpHPR,
  SdpExpBarrier,
  SdpPenalizedExp,
  Separable,
};

// Penalty profile of the Rockafellar-Wets family.
enum class RwSigma { HalfSqNorm, Norm, CustomGrid };

// Admissible multipliers: the whole dual space or the polar cone K*.
enum class LambdaSet { Full, Polar };

struct RwGridCfg {
  double r0 = 10.0;
  int max_doublings = 10;
  double minus_inf_threshold = -1e12;
};

// A penalty-coupling function bound to a cone. Immutable after construction.
class PhiSpec {
 public:
  static PhiSpec rockafellar_wets(const ConeSpec& K, RwSigma sigma,
                                  ScalarFn profile = ScalarFn::quadratic(0.5));
  static PhiSpec hestenes_powell_eq(int m);
  static PhiSpec sharp_eq(int m);
  static PhiSpec mangasarian_eq(int m, ScalarFn phi);
  static PhiSpec essentially_quadratic(int m, ScalarFn phi = ScalarFn::quadratic(0.5));
  static PhiSpec cubic(int m);
  static PhiSpec mangasarian_ineq(int m, ScalarFn phi);
  static PhiSpec exponential(int m, ScalarFn phi = ScalarFn::expm1());
  static PhiSpec penalized_exponential(int m, ScalarFn phi = ScalarFn::expm1(),
                                       ScalarFn xi = ScalarFn::pos_cube());
  static PhiSpec pth_power(int m, ScalarFn phi = ScalarFn::exp(), double b = 0.0);
  static PhiSpec hyperbolic(int m, ScalarFn phi = ScalarFn::hyperbolic());
  static PhiSpec modified_barrier(int m, ScalarFn phi = ScalarFn::neg_log1m());
  static PhiSpec he_wu_meng(int m);
  // K is a second-order cone or a product of second-order cones.
  static PhiSpec soc_hpr(const ConeSpec& K);
  static PhiSpec soc_exp(const ConeSpec& K, ScalarFn psi = ScalarFn::expm1());
  static PhiSpec sdp_hpr(int order);
  static PhiSpec sdp_exp(int order, ScalarFn psi = ScalarFn::expm1());
  static PhiSpec sdp_penalized_exp(int order, ScalarFn psi = ScalarFn::expm1(),
                                   ScalarFn xi = ScalarFn::pos_cube());
  static PhiSpec separable(std::vector<PhiSpec> parts);

  // Same family and generators bound to another cone of the matching kind.
  PhiSpec rebind(const ConeSpec& K) const;

  Family family() const { return family_; }
  const ConeSpec& cone() const { return cone_; }
  LambdaSet lambda_set() const { return lambda_; }
  RwSigma sigma() const { return sigma_; }
  // phi / psi / sigma-profile depending on the family.
  const ScalarFn& gen() const { return gen_; }
  // xi for penalized families.
  const ScalarFn& aux() const { return aux_; }
  double shift() const { return b_; }
  const std::vector<PhiSpec>& parts() const { return parts_; }
  const RwGridCfg& grid() const { return grid_; }

  // Short identifier, e.g. "exponential[expm1]".
  std::string label() const;

  friend bool operator==(const PhiSpec& a, const PhiSpec& b);

 private:
  PhiSpec(Family f, ConeSpec K, LambdaSet l) : family_(f), cone_(std::move(K)), lambda_(l) {}
  Family family_;
  ConeSpec cone_;
  LambdaSet lambda_;
  RwSigma sigma_ = RwSigma::HalfSqNorm;
  ScalarFn gen_;
  ScalarFn aux_;
  double b_ = 0.0;
  std::vector<PhiSpec> parts_;
  RwGridCfg grid_;
};

std::string family_name(Family f);

// True when lambda lies in the admissible set of spec (tolerance scaled by
// the magnitude of lambda).
bool admissible(const PhiSpec& spec, const BlockVec& lambda);

ExtReal phi_eval(const PhiSpec& spec, const BlockVec& y, const BlockVec& lambda, double c);

// Rockafellar-Wets value inf_{p in K - y} (-<lambda,p> + c sigma(p)).
ExtReal rw_phi_eval(RwSigma sigma, const ConeSpec& K, const BlockVec& y, const BlockVec& lambda,
                    double c, const RwGridCfg& cfg = {}, const ScalarFn& profile = ScalarFn::quadratic(0.5));

// Spectral lift for the second-order cone; nullopt when an eigenvalue lies
// outside dom psi.
std::optional<std::vector<double>> loewner_soc(const ScalarFn& psi, const std::vector<double>& y);
std::optional<Block> loewner_sdp(const ScalarFn& psi, const Block& y);

// Gradient of y -> Phi(y, lambda, c). Throws KinkError at nonsmooth points.
BlockVec phi_grad_y(const PhiSpec& spec, const BlockVec& y, const BlockVec& lambda, double c);

// The derivative at complementary pairs, when the family has one.
std::optional<BlockVec> phi_zero_map(const PhiSpec& spec, const BlockVec& lambda);

PhiSpec compose_separable(std::vector<PhiSpec> parts);

// Random admissible multiplier of block-sum norm about radius.
BlockVec sample_multiplier(const PhiSpec& spec, std::mt19937_64& rng, double radius);
// Nearest admissible multiplier (projection onto the admissible set).
BlockVec project_multiplier(const PhiSpec& spec, const BlockVec& lambda);
// True when the admissible set is strictly larger than K*.
bool lambda_exceeds_polar(const PhiSpec& spec);
// Admissible multiplier outside K*, at relative distance >= 1e-3 from it.
BlockVec sample_multiplier_outside_polar(const PhiSpec& spec, std::mt19937_64& rng, double radius);

// Parses a family name as accepted on the command line ("hpr",
// "exponential", "sdp-frisch", ...) and binds it to K when possible.
PhiSpec phi_from_name(const std::string& name, const ConeSpec& K);
// Families understood by phi_from_name.
std::vector<std::string> phi_names();

}  // namespace auglag
