#include <benchmark/benchmark.h>

#include <beliefplan/belief_rrt.hpp>
#include <beliefplan/discrete_planner.hpp>
#include <beliefplan/tracking.hpp>

#include "lightdark.hpp"

using namespace beliefplan;

static void BM_PropagateMlo(benchmark::State& state) {
  const auto mode = lightdark::mode();
  const Vector u{{0.5, -0.5}};
  BeliefState b = lightdark::initial();
  for (auto _ : state) {
    b = propagate_mlo(mode, lightdark::initial(), u);
    benchmark::DoNotOptimize(b);
  }
}
BENCHMARK(BM_PropagateMlo);

static void BM_Satisfies(benchmark::State& state) {
  const Formula phi = lightdark::formula();
  Trace tr;
  BeliefState b = lightdark::initial();
  const auto mode = lightdark::mode();
  for (int k = 0; k < 120; ++k) {
    tr.beliefs.push_back(b);
    tr.modes.push_back(0);
    b = propagate_mlo(mode, b, Vector{{0.4, k < 20 ? 0.0 : -0.15}});
  }
  tr.beliefs.push_back(b);
  for (auto _ : state) benchmark::DoNotOptimize(satisfies(phi, tr));
}
BENCHMARK(BM_Satisfies);

static void BM_BmcFirstCandidates(benchmark::State& state) {
  const Formula phi = lightdark::formula();
  const auto abs = abstract(phi, lightdark::system());
  for (auto _ : state) {
    auto first = bmc_next_candidate(abs, phi, {}, kDefaultKMax);
    auto second = bmc_next_candidate(abs, phi, add_counterexample({}, labels_of(*first)), kDefaultKMax);
    benchmark::DoNotOptimize(second);
  }
}
BENCHMARK(BM_BmcFirstCandidates);

static void BM_SolveSegment(benchmark::State& state) {
  const auto sys = lightdark::system();
  const auto named = lightdark::named();
  const SegmentTask task{0, named.at("free_space").atomic().cone, named.at("target").atomic().cone, 0, 240, 1};
  for (auto _ : state) {
    Rng rng(1);
    benchmark::DoNotOptimize(solve_segment(sys, task, lightdark::initial(), lightdark::params(), rng));
  }
}
BENCHMARK(BM_SolveSegment)->Unit(benchmark::kMillisecond);

static void BM_LqrGains(benchmark::State& state) {
  const Matrix I = Matrix::Identity(2, 2);
  for (auto _ : state) benchmark::DoNotOptimize(lqr_gains(lightdark::mode(), 20, I, I, 0.05 * I));
}
BENCHMARK(BM_LqrGains);
BENCHMARK_MAIN();
