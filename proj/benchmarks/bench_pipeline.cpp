#include <benchmark/benchmark.h>

#include <random>

#include "qcrb/conditions.hpp"
#include "qcrb/fisher.hpp"
#include "qcrb/fixtures.hpp"
#include "qcrb/model.hpp"
#include "qcrb/numkernel.hpp"
#include "qcrb/povm.hpp"
#include "qcrb/sld.hpp"

using namespace qcrb;

namespace {

struct Prepared {
  StateAtPoint sp;
  SupportDecomposition dec;
  SLDSet slds;
};

Prepared prepare(const fixtures::Fixture& f) {
  Prepared p;
  p.sp = evaluate(f.model, f.default_theta);
  p.dec = support_decomposition(p.sp, {});
  p.slds = compute_sld(p.dec, p.sp.rho, p.sp.drho, 1e-8);
  return p;
}

fixtures::Fixture random_instance(int n) {
  return fixtures::get("random-rank-r",
                       {{"n_s", n}, {"r_plus", n / 2}, {"p", 3}, {"seed", 7}, {"plant", 2}});
}

}  // namespace

static void BM_SupportDecomposition(benchmark::State& state) {
  const auto f = random_instance(static_cast<int>(state.range(0)));
  const auto sp = evaluate(f.model, f.default_theta);
  for (auto _ : state) benchmark::DoNotOptimize(support_decomposition(sp, {}));
}
BENCHMARK(BM_SupportDecomposition)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

static void BM_SldAndQfim(benchmark::State& state) {
  const auto p = prepare(random_instance(static_cast<int>(state.range(0))));
  for (auto _ : state) {
    const auto slds = compute_sld(p.dec, p.sp.rho, p.sp.drho, 1e-8);
    benchmark::DoNotOptimize(qfim(p.dec, slds));
  }
}
BENCHMARK(BM_SldAndQfim)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

static void BM_JointEigenprojectors(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(3);
  const ComplexMatrix u = random_unitary(n, rng);
  std::vector<ComplexMatrix> family;
  for (int l = 0; l < 3; ++l) {
    RealVector d = RealVector::Random(n);
    family.push_back(u * d.cast<Complex>().asDiagonal() * u.adjoint());
  }
  for (auto _ : state) benchmark::DoNotOptimize(joint_eigenprojectors(family, {}));
}
BENCHMARK(BM_JointEigenprojectors)->Arg(4)->Arg(16)->Arg(64);

static void BM_FindW(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto f = fixtures::get("random-rank-r", {{"n_s", n}, {"r_plus", n - 2}, {"p", 2},
                                                 {"seed", 11}, {"plant", 2}});
  const auto p = prepare(f);
  for (auto _ : state) benchmark::DoNotOptimize(find_W_condition4(p.slds, 1e-8));
}
BENCHMARK(BM_FindW)->Arg(4)->Arg(8)->Arg(16);

static void BM_FindWRankDeficientPencil(benchmark::State& state) {
  const auto f = fixtures::get("random-rank-r", {{"n_s", 5}, {"r_plus", 2}, {"p", 2},
                                                 {"seed", 27}, {"plant", 2}});
  const auto p = prepare(f);
  for (auto _ : state) benchmark::DoNotOptimize(find_W_condition4(p.slds, 1e-8));
}
BENCHMARK(BM_FindWRankDeficientPencil);

static void BM_QutritPipeline(benchmark::State& state) {
  const auto f = fixtures::get("paper-qutrit");
  for (auto _ : state) {
    auto p = prepare(f);
    const auto report = evaluate_conditions(p.sp.rho, p.dec, p.slds);
    auto built = construct_optimal(p.dec, p.slds, report.cond4.W);
    const auto dist = outcome_distribution(p.sp.rho, p.sp.drho, p.slds, built.povm);
    benchmark::DoNotOptimize(compare(classical_fim(dist), qfim(p.dec, p.slds)));
  }
}
BENCHMARK(BM_QutritPipeline);

static void BM_MonteCarlo(benchmark::State& state) {
  const auto f = fixtures::get("paper-qutrit");
  const auto p = prepare(f);
  const auto report = evaluate_conditions(p.sp.rho, p.dec, p.slds);
  const auto povm = construct_optimal(p.dec, p.slds, report.cond4.W).povm;
  const auto dist = outcome_distribution(p.sp.rho, p.sp.drho, p.slds, povm);
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(monte_carlo(dist, state.range(0), seed++));
}
BENCHMARK(BM_MonteCarlo)->Arg(1000)->Arg(1000000);
BENCHMARK_MAIN();
