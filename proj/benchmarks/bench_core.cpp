#include <benchmark/benchmark.h>

#include <random>

#include "auglag/axioms.hpp"
#include "auglag/dual.hpp"
#include "auglag/solver.hpp"

using namespace auglag;

namespace {

void BM_ProjectPolar(benchmark::State& state, ConeSpec K) {
  std::mt19937_64 rng(1);
  const BlockVec y = random_gaussian(K, rng, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(project_polar(y, K));
}
BENCHMARK_CAPTURE(BM_ProjectPolar, soc3, ConeSpec::soc(3));
BENCHMARK_CAPTURE(BM_ProjectPolar, nsd4, ConeSpec::nsd(4));

void BM_PhiEval(benchmark::State& state, const char* family, ConeSpec K) {
  const PhiSpec phi = phi_from_name(family, K);
  std::mt19937_64 rng(2);
  const BlockVec y = random_gaussian(K, rng, 1.0);
  const BlockVec l = sample_multiplier(phi, rng, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(phi_eval(phi, y, l, 2.0));
}
BENCHMARK_CAPTURE(BM_PhiEval, hpr_nonpos2, "hpr", ConeSpec::nonpos(2));
BENCHMARK_CAPTURE(BM_PhiEval, exponential_nonpos2, "exponential", ConeSpec::nonpos(2));
BENCHMARK_CAPTURE(BM_PhiEval, rw_norm_soc3, "rw-norm", ConeSpec::soc(3));
BENCHMARK_CAPTURE(BM_PhiEval, sdp_hpr_nsd2, "sdp-hpr", ConeSpec::nsd(2));

void BM_ThetaDisjoint(benchmark::State& state) {
  const Problem p = builtin("disjoint-mult");
  const PhiSpec phi = phi_from_name("hpr", p.K);
  const BlockVec l = BlockVec::zeros(p.K);
  for (auto _ : state) benchmark::DoNotOptimize(theta(p, phi, l, 4.0));
}
BENCHMARK(BM_ThetaDisjoint)->Unit(benchmark::kMillisecond);

void BM_ThetaSocToy(benchmark::State& state) {
  const Problem p = builtin("soc-toy");
  const PhiSpec phi = phi_from_name("hpr", p.K);
  const BlockVec l = BlockVec::zeros(p.K);
  for (auto _ : state) benchmark::DoNotOptimize(theta(p, phi, l, 4.0));
}
BENCHMARK(BM_ThetaSocToy)->Unit(benchmark::kMillisecond);

void BM_DisjointTraceRun(benchmark::State& state) {
  const Problem p = builtin("disjoint-mult");
  const PhiSpec phi = phi_from_name("hpr", p.K);
  SolverCfg cfg;
  cfg.lambda0 = BlockVec::vec({1.0, 1.0});
  cfg.c0 = 3.0;
  cfg.c_min = 2.5;
  cfg.eps = 1e-10;
  cfg.max_iter = 10;
  for (auto _ : state) benchmark::DoNotOptimize(run(p, phi, cfg));
}
BENCHMARK(BM_DisjointTraceRun)->Unit(benchmark::kMillisecond);

void BM_CheckAxiomA1(benchmark::State& state) {
  const PhiSpec phi = phi_from_name("cubic", ConeSpec::nonpos(2));
  SamplerCfg cfg;
  cfg.n_samples = 200;
  for (auto _ : state) benchmark::DoNotOptimize(check_axiom(AxiomId::A1, phi, ConeSpec::nonpos(2), cfg));
}
BENCHMARK(BM_CheckAxiomA1)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
