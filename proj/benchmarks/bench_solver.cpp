#include <benchmark/benchmark.h>

#include "ifbs/belief_sets.hpp"
#include "ifbs/gridworld.hpp"
#include "ifbs/model.hpp"
#include "ifbs/solver.hpp"

using namespace ifbs;

static void BM_BuildPriorSet12x12(benchmark::State& state) {
  const GridworldConfig g = mars_layout();
  const PerceptionMDP model = build_gridworld(g, 0.95, 20.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_prior_set(build_local_blur_set(g), model).num_priors());
  }
}
BENCHMARK(BM_BuildPriorSet12x12)->Unit(benchmark::kMillisecond);

// Full value iteration on the three-state model; the argument is grid divisions.
static void BM_ValueIterationThreeState(benchmark::State& state) {
  const PerceptionMDP model = build_three_state();
  const BeliefSets sets =
      build_prior_set(build_simplex_grid(3, static_cast<std::size_t>(state.range(0))), model);
  SolveOptions opt;
  opt.jobs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(value_iteration(model, sets, opt).iterations);
  state.counters["priors"] = static_cast<double>(sets.num_priors());
}
BENCHMARK(BM_ValueIterationThreeState)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_SolveRover8x8(benchmark::State& state) {
  const GridworldConfig g = mars_small_layout();
  const PerceptionMDP model = build_gridworld(g, 0.95, static_cast<double>(state.range(0)));
  const BeliefSets sets = build_prior_set(build_local_blur_set(g), model);
  for (auto _ : state) benchmark::DoNotOptimize(value_iteration(model, sets).iterations);
}
BENCHMARK(BM_SolveRover8x8)->Arg(0)->Arg(20)->Unit(benchmark::kSecond)->Iterations(1);
