#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "auglag/axioms.hpp"
#include "auglag/errors.hpp"
#include "auglag/phi.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace auglag;

namespace {

const ConeSpec R1 = ConeSpec::nonpos(1);
const ConeSpec R2 = ConeSpec::nonpos(2);

BlockVec v(std::vector<double> x) { return BlockVec::vec(std::move(x)); }

// inf over p <= -y of -l p + (c/2) p^2, on a grid.
double rw_halfsq_grid(double y, double l, double c) {
  return oracle::grid_min_1d([&](double p) { return -l * p + 0.5 * c * p * p; }, -y - 60.0, -y, 60000);
}


}  // namespace

TEST(PhiEval, HprInequalityMatchesRwGrid) {
  const PhiSpec hpr = PhiSpec::essentially_quadratic(2);
  const double got = phi_eval(hpr, v({1.0, -3.0}), v({1.0, 1.0}), 3.0).value();
  EXPECT_NEAR(got, 7.0 / 3.0, 1e-12);
  EXPECT_NEAR(got, rw_halfsq_grid(1.0, 1.0, 3.0) + rw_halfsq_grid(-3.0, 1.0, 3.0), 1e-8);
}

TEST(PhiEval, ComplementaryPairGivesZero) {
  std::mt19937_64 rng(5);
  for (const auto& fc : claims_fixture()) {
    const PhiSpec& phi = fc.phi;
    for (int k = 0; k < 20; ++k) {
      const BlockVec l = project_multiplier(phi, random_in_polar(phi.cone(), rng, 1.0));
      EXPECT_NEAR(phi_eval(phi, BlockVec::zeros(phi.cone()), l, 2.0).value(), 0.0, 1e-12) << fc.key;
    }
  }
}

TEST(PhiEval, BarrierIsInfiniteOutsideDomain) {
  const PhiSpec frisch = PhiSpec::modified_barrier(1);
  EXPECT_TRUE(phi_eval(frisch, v({0.5}), v({1.0}), 2.0).is_pos_inf());
  EXPECT_TRUE(phi_eval(frisch, v({0.6}), v({1.0}), 2.0).is_pos_inf());
  EXPECT_TRUE(phi_eval(frisch, v({0.4}), v({1.0}), 2.0).is_finite());
}

TEST(PhiEval, SharpOnOrthantIsMinusInfinityBelowPenalty) {
  const PhiSpec sharp = PhiSpec::rockafellar_wets(R1, RwSigma::Norm);
  EXPECT_TRUE(phi_eval(sharp, v({0.3}), v({-2.0}), 1.0).is_neg_inf());
  EXPECT_TRUE(phi_eval(sharp, v({-0.3}), v({-0.5}), 1.0).is_finite());
}

TEST(PhiEval, ArgumentChecks) {
  const PhiSpec hpr = PhiSpec::essentially_quadratic(2);
  EXPECT_THROW(phi_eval(hpr, v({0.0, 0.0}), v({1.0, 1.0}), 0.0), DomainError);
  EXPECT_THROW(phi_eval(PhiSpec::exponential(2), v({0.0, 0.0}), v({-1.0, 1.0}), 1.0), AdmissibilityError);
  EXPECT_THROW(phi_eval(hpr, v({0.0}), v({1.0, 1.0}), 1.0), StructuralError);
}

TEST(RwPhiEval, Examples) {
  EXPECT_NEAR(rw_phi_eval(RwSigma::HalfSqNorm, R1, v({1.0}), v({1.0}), 3.0).value(), 2.5, 1e-12);
  EXPECT_NEAR(rw_phi_eval(RwSigma::HalfSqNorm, R1, v({1.0}), v({1.0}), 3.0).value(), rw_halfsq_grid(1.0, 1.0, 3.0),
              1e-8);
  EXPECT_EQ(rw_phi_eval(RwSigma::Norm, R2, v({-1.0, -0.5}), v({0.0, 0.0}), 1.0).value(), 0.0);
  EXPECT_NEAR(rw_phi_eval(RwSigma::Norm, R1, v({0.5}), v({0.0}), 2.0).value(), 1.0, 1e-12);
  const double oracle_norm =
      oracle::grid_min_1d([](double p) { return 2.0 * std::fabs(p); }, -60.5, -0.5, 60000);
  EXPECT_NEAR(rw_phi_eval(RwSigma::Norm, R1, v({0.5}), v({0.0}), 2.0).value(), oracle_norm, 1e-8);
}

TEST(RwPhiEval, NormPenaltyMatchesBallSupremum) {
  // Phi(y, l, c) = sup{<mu, y> : mu in K*, |mu - l| <= c}; K* is -soc for soc
  // and the nonnegative orthant for nonpos.
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> uc(0.5, 4.0);
  const ConeSpec soc = ConeSpec::soc(3);
  const ConeSpec orth = ConeSpec::nonpos(3);
  int finite = 0;
  for (int k = 0; k < 40; ++k) {
    const std::array<double, 3> y{g(rng), g(rng), g(rng)}, l{g(rng), g(rng), g(rng)};
    const double c = uc(rng);
    const bool on_soc = k % 2 == 0;
    const ConeSpec& K = on_soc ? soc : orth;
    const ExtReal lib = rw_phi_eval(RwSigma::Norm, K, v({y[0], y[1], y[2]}), v({l[0], l[1], l[2]}), c);
    const double ref = on_soc ? oracle::max_linear_ball_neg_soc3(y, l, c)
                              : oracle::max_linear_ball_orthant({y[0], y[1], y[2]}, {l[0], l[1], l[2]}, c);
    if (!std::isfinite(ref)) {
      EXPECT_TRUE(lib.is_neg_inf()) << k;
      continue;
    }
    ++finite;
    EXPECT_NEAR(lib.value(), ref, 1e-6) << k;
  }
  EXPECT_GE(finite, 15);
}

TEST(RwPhiEval, GridProfileMatchesHprClosedForm) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-2.0, 2.0), uc(0.5, 4.0);
  for (int m = 1; m <= 3; ++m) {
    const ConeSpec K = ConeSpec::nonpos(m);
    for (int k = 0; k < 8; ++k) {
      std::vector<double> y, l;
      double closed = 0.0;
      const double c = uc(rng);
      for (int i = 0; i < m; ++i) {
        y.push_back(u(rng));
        l.push_back(std::fabs(u(rng)));
        closed += oracle::hpr_ineq(y.back(), l.back(), c);
      }
      const ExtReal grid = rw_phi_eval(RwSigma::CustomGrid, K, v(y), v(l), c);
      ASSERT_TRUE(grid.is_finite());
      EXPECT_NEAR(grid.value(), closed, 1e-8) << "m=" << m;
      EXPECT_NEAR(rw_phi_eval(RwSigma::HalfSqNorm, K, v(y), v(l), c).value(), closed, 1e-12);
    }
  }
}

TEST(Loewner, SocExamples) {
  const std::vector<double> y{0.7, -0.2, 1.1};
  EXPECT_EQ(*loewner_soc(ScalarFn::identity(), y), y);
  const auto z = *loewner_soc(ScalarFn::expm1(), {0.0, 0.0});
  EXPECT_EQ(z[0], 0.0);
  EXPECT_EQ(z[1], 0.0);
  const auto w = *loewner_soc(ScalarFn::expm1(), {1.0, 1.0});
  const double e2 = std::exp(2.0) - 1.0;
  EXPECT_NEAR(w[0], e2 / 2.0, 1e-12);
  EXPECT_NEAR(w[1], e2 / 2.0, 1e-12);
  EXPECT_FALSE(loewner_soc(ScalarFn::neg_log1m(), {0.5, 0.6}).has_value());
}

TEST(Loewner, SdpExamples) {
  std::mt19937_64 rng(21);
  const Block y = support::random_sym(rng, 3, 1.0);
  const Block id = *loewner_sdp(ScalarFn::identity(), y);
  for (std::size_t k = 0; k < y.v.size(); ++k) EXPECT_NEAR(id.v[k], y.v[k], 1e-12);
  Block d{{0.3, 0.0, 0.0, -1.2}, 2};
  const Block e = *loewner_sdp(ScalarFn::expm1(), d);
  EXPECT_NEAR(e.at(0, 0), std::expm1(0.3), 1e-14);
  EXPECT_NEAR(e.at(1, 1), std::expm1(-1.2), 1e-14);
  EXPECT_NEAR(e.at(0, 1), 0.0, 1e-14);
}

TEST(Loewner, SdpExpm1MatchesTaylorOracle) {
  std::mt19937_64 rng(22);
  for (int k = 0; k < 100; ++k) {
    const Block y = support::random_sym(rng, 4, 1.0);
    const Block got = *loewner_sdp(ScalarFn::expm1(), y);
    const oracle::Mat want = oracle::expm(support::to_mat(y));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) EXPECT_NEAR(got.at(i, j), want[i][j] - (i == j ? 1.0 : 0.0), 1e-8);
  }
}

TEST(Loewner, SocAgreesWithTwoByTwoMatrix) {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g(0.0, 1.0);
  for (const ScalarFn& psi : {ScalarFn::expm1(), ScalarFn::hyperbolic(), ScalarFn::quadratic(0.5)}) {
    for (int k = 0; k < 50; ++k) {
      const double a = g(rng), b = g(rng);
      const auto s = *loewner_soc(psi, {a, b});
      const Block m = *loewner_sdp(psi, Block{{a, b, b, a}, 2});
      EXPECT_NEAR(s[0], m.at(0, 0), 1e-10);
      EXPECT_NEAR(s[1], m.at(0, 1), 1e-10);
    }
  }
}

TEST(PhiGrad, ZeroMapExamples) {
  const BlockVec g = phi_grad_y(PhiSpec::essentially_quadratic(2), v({0.0, 0.0}), v({2.0, 3.0}), 5.0);
  EXPECT_EQ(g.to_flat(), (std::vector<double>{2.0, 3.0}));
  const BlockVec m = phi_grad_y(PhiSpec::mangasarian_eq(2, ScalarFn::quadratic(0.5)), v({0.0, 0.0}), v({-1.5, 0.25}), 2.0);
  EXPECT_NEAR(m.to_flat()[0], -1.5, 1e-15);
  EXPECT_NEAR(m.to_flat()[1], 0.25, 1e-15);
  const BlockVec e = phi_grad_y(PhiSpec::exponential(2), v({0.0, 0.0}), v({0.7, 1.9}), 2.0);
  EXPECT_NEAR(e.to_flat()[0], 0.7, 1e-15);
  EXPECT_NEAR(e.to_flat()[1], 1.9, 1e-15);
  const auto z = phi_zero_map(PhiSpec::exponential(2), v({0.7, 1.9}));
  ASSERT_TRUE(z.has_value());
  EXPECT_NEAR(z->to_flat()[1], 1.9, 1e-15);
}

TEST(PhiGrad, KinkThrows) {
  EXPECT_THROW(phi_grad_y(PhiSpec::sharp_eq(1), v({0.0}), v({0.5}), 1.0), KinkError);
}

TEST(PhiGrad, FiniteDifferencesAgreeForSmoothFamilies) {
  std::uint64_t seed = 1000;
  for (const auto& fc : claims_fixture()) {
    if (!support::is_smooth_family(fc.key)) continue;
    const auto st = support::fd_gradient_check(fc.phi, 100, seed++);
    EXPECT_EQ(st.points, 100) << fc.key;
    EXPECT_EQ(st.bad, 0) << fc.key << " worst " << st.worst;
  }
}

TEST(Compose, SinglePartBehavesLikeThePart) {
  std::mt19937_64 rng(31);
  const PhiSpec base = PhiSpec::exponential(2);
  const PhiSpec comp = compose_separable({base});
  for (int k = 0; k < 50; ++k) {
    const BlockVec y = random_gaussian(base.cone(), rng, 1.0);
    const BlockVec l = sample_multiplier(base, rng, 1.0);
    EXPECT_EQ(phi_eval(comp, y, l, 1.7).value(), phi_eval(base, y, l, 1.7).value());
  }
}

TEST(Compose, EqualityTimesInequalityMatchesRwOnProduct) {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(-2.0, 2.0), uc(0.5, 4.0);
  const PhiSpec comp = compose_separable({PhiSpec::hestenes_powell_eq(1), PhiSpec::essentially_quadratic(1)});
  for (int k = 0; k < 200; ++k) {
    const double y0 = u(rng), y1 = u(rng), l0 = u(rng), l1 = std::fabs(u(rng)), c = uc(rng);
    const BlockVec y({Block{{y0}, 0}, Block{{y1}, 0}});
    const BlockVec l({Block{{l0}, 0}, Block{{l1}, 0}});
    // Zero-cone component: p = -y0 is forced.
    const double want = l0 * y0 + 0.5 * c * y0 * y0 + rw_halfsq_grid(y1, l1, c);
    EXPECT_NEAR(phi_eval(comp, y, l, c).value(), want, 1e-8);
  }
}

TEST(Compose, MinusInfinityAbsorbsPlusInfinity) {
  const PhiSpec comp =
      compose_separable({PhiSpec::rockafellar_wets(R1, RwSigma::Norm), PhiSpec::modified_barrier(1)});
  const BlockVec y({Block{{0.3}, 0}, Block{{2.0}, 0}});
  const BlockVec l({Block{{-2.0}, 0}, Block{{1.0}, 0}});
  EXPECT_TRUE(phi_eval(comp, y, l, 1.0).is_neg_inf());
}

TEST(PhiProperty, DiagonalReductionOfMatrixFamilies) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> uy(-1.5, 0.3), ul(0.0, 2.0), uc(0.5, 3.0);
  for (const ScalarFn& psi : {ScalarFn::expm1(), ScalarFn::neg_log1m()}) {
    const PhiSpec mat = PhiSpec::sdp_exp(3, psi);
    const PhiSpec vec =
        psi.kind() == ScalarKind::ExpM1 ? PhiSpec::exponential(3, psi) : PhiSpec::modified_barrier(3, psi);
    for (int k = 0; k < 200; ++k) {
      std::vector<double> y(3), l(3);
      for (int i = 0; i < 3; ++i) {
        y[static_cast<std::size_t>(i)] = uy(rng);
        l[static_cast<std::size_t>(i)] = ul(rng);
      }
      const double c = uc(rng);
      Block ym{std::vector<double>(9, 0.0), 3}, lm{std::vector<double>(9, 0.0), 3};
      for (int i = 0; i < 3; ++i) {
        ym.at(i, i) = y[static_cast<std::size_t>(i)];
        lm.at(i, i) = l[static_cast<std::size_t>(i)];
      }
      const ExtReal a = phi_eval(mat, BlockVec({ym}), BlockVec({lm}), c);
      const ExtReal b = phi_eval(vec, v(y), v(l), c);
      if (b.is_pos_inf()) {
        EXPECT_TRUE(a.is_pos_inf());
      } else {
        EXPECT_NEAR(a.value(), b.value(), 1e-10);
      }
    }
  }
}

TEST(PhiProperty, MonotoneInPenaltyParameter) {
  std::mt19937_64 rng(42);
  const double cs[] = {0.1, 0.5, 1.0, 3.0, 10.0, 100.0};
  for (const auto& fc : claims_fixture()) {
    const PhiSpec& phi = fc.phi;
    for (int k = 0; k < 40; ++k) {
      const BlockVec y = random_gaussian(phi.cone(), rng, 1.0);
      const BlockVec l = sample_multiplier(phi, rng, 1.0);
      double prev = -std::numeric_limits<double>::infinity();
      for (double c : cs) {
        const double val = phi_eval(phi, y, l, c).value();
        if (std::isinf(prev) && prev > 0) {
          EXPECT_TRUE(std::isinf(val) && val > 0) << fc.key << " c=" << c;
        } else {
          EXPECT_GE(val, prev - 1e-9 * std::max(1.0, std::fabs(prev))) << fc.key << " c=" << c;
        }
        prev = val;
      }
    }
  }
}

TEST(PhiNames, EveryNameParses) {
  for (const auto& name : phi_names()) {
    const ConeSpec K = name.rfind("soc-", 0) == 0   ? ConeSpec::soc(3)
                       : name.rfind("sdp-", 0) == 0 ? ConeSpec::nsd(2)
                       : name.find("-eq") != std::string::npos ? ConeSpec::zero(2)
                                                               : ConeSpec::nonpos(2);
    EXPECT_NO_THROW(phi_from_name(name, K)) << name;
  }
  EXPECT_ANY_THROW(phi_from_name("no-such-family", R2));
}
