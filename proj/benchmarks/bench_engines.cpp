#include "qcfa/constructions.hpp"
#include "qcfa/engine.hpp"
#include "qcfa/languages.hpp"
#include "qcfa/montecarlo.hpp"
#include "qcfa/proofsystems.hpp"

#include <benchmark/benchmark.h>

using namespace qcfa;

namespace {

void BM_PowerEqExact(benchmark::State& state) {
  RecognizerBundle b = build_power_eq();
  std::string w = power_eq_member(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_exact(b.spec, w));
  state.SetLabel(std::to_string(w.size()) + " symbols");
}
BENCHMARK(BM_PowerEqExact)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_PowerEqMonteCarlo(benchmark::State& state) {
  RecognizerBundle b = build_power_eq();
  std::string w = power_eq_member(0) + "a";
  MonteCarloOptions opt;
  opt.trials = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_monte_carlo(b.spec, w, opt));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PowerEqMonteCarlo)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_UpowerCounter(benchmark::State& state) {
  LanguageOracle o = LanguageOracle::random("a", 12, 1);
  RecognizerBundle b = build_2qcca_upower(theta_of(o), o);
  std::string w(static_cast<std::size_t>(state.range(0)), 'a');
  for (auto _ : state) benchmark::DoNotOptimize(run_exact(b.spec, w));
}
BENCHMARK(BM_UpowerCounter)->RangeMultiplier(8)->Range(8, 4096)->Unit(benchmark::kMillisecond);

void BM_UnaryProtocol(benchmark::State& state) {
  LanguageOracle o = LanguageOracle::random("a", 12, 1);
  VerifierSpec v = build_unary_verifier(gamma_of(o).value);
  ProverStrategy p = honest_prover(o);
  std::string w(static_cast<std::size_t>(state.range(0)), 'a');
  for (auto _ : state) benchmark::DoNotOptimize(run_protocol(v, p, w));
}
BENCHMARK(BM_UnaryProtocol)->DenseRange(0, 6, 2);

void BM_WalkSolve(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(walk_absorption_solve(state.range(0)));
}
BENCHMARK(BM_WalkSolve)->RangeMultiplier(4)->Range(4, 1024);

}  // namespace
BENCHMARK_MAIN();
