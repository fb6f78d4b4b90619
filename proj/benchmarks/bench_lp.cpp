#include <benchmark/benchmark.h>

#include "ifbs/belief_sets.hpp"
#include "ifbs/lp.hpp"
#include "ifbs/model.hpp"
#include "ifbs/rng.hpp"

using namespace ifbs;

// One prior LP on a simplex grid; the argument is the number of divisions.
static void BM_SolveLpCold(benchmark::State& state) {
  const std::size_t k = static_cast<std::size_t>(state.range(0));
  const std::vector<Belief> posteriors = build_simplex_grid(3, k);
  std::vector<double> values(posteriors.size());
  RandomStream rng(3, 0);
  for (double& v : values) v = rng.uniform();
  const LPInstance lp = assemble_lp(Belief::uniform(3), posteriors, values, 5.0);
  for (auto _ : state) benchmark::DoNotOptimize(solve_lp(lp).objective);
  state.counters["columns"] = static_cast<double>(lp.admissible.size());
}
BENCHMARK(BM_SolveLpCold)->Arg(5)->Arg(10)->Arg(20)->Arg(40);

static void BM_SolveLpWarm(benchmark::State& state) {
  const std::size_t k = static_cast<std::size_t>(state.range(0));
  const std::vector<Belief> posteriors = build_simplex_grid(3, k);
  std::vector<double> values(posteriors.size());
  RandomStream rng(3, 0);
  for (double& v : values) v = rng.uniform();
  const LPInstance lp = assemble_lp(Belief::uniform(3), posteriors, values, 5.0);
  LPWarmStart warm;
  solve_lp(lp, &warm);
  for (auto _ : state) benchmark::DoNotOptimize(solve_lp(lp, &warm).objective);
}
BENCHMARK(BM_SolveLpWarm)->Arg(5)->Arg(10)->Arg(20)->Arg(40);

static void BM_AssembleLp(benchmark::State& state) {
  const std::vector<Belief> posteriors = build_simplex_grid(5, std::size_t{10});
  const std::vector<double> values(posteriors.size(), 0.0);
  const Belief b = Belief::uniform(5);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_lp(b, posteriors, values, 1.0).cost.size());
}
BENCHMARK(BM_AssembleLp);
