// SPDX-License-Identifier: Apache-2.0
// Serial vs OpenMP trial-parallel run of a small rate-vs-power experiment.
#include <benchmark/benchmark.h>

#include "irs/experiment.hpp"

namespace {

irs::ExperimentSpec small_spec() {
  irs::ExperimentSpec spec = irs::default_spec(irs::FigureId::Fig2RateVsPower);
  spec.scenario.trials = 8;
  spec.sweep_values = {25.0, 35.0};
  spec.baselines = {irs::Baseline::ZeroPhase, irs::Baseline::NoIrs};
  return spec;
}

void run(benchmark::State& state, irs::ExecPolicy policy) {
  const irs::ExperimentSpec spec = small_spec();
  for (auto _ : state) benchmark::DoNotOptimize(irs::run_experiment(spec, policy));
}

void BM_Serial(benchmark::State& state) { run(state, irs::ExecPolicy::Serial); }
void BM_Parallel(benchmark::State& state) { run(state, irs::ExecPolicy::Parallel); }

}  // namespace

BENCHMARK(BM_Serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
