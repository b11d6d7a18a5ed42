/*
   Copyright 2026 The treeorder Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// Serial reference vs OpenMP engine. Arguments: s, replications.
#include <benchmark/benchmark.h>

#include <omp.h>

#include "treeorder/estimator.hpp"
#include "treeorder/montecarlo.hpp"

namespace {

treeorder::ExperimentPlan plan_for(std::size_t s, std::size_t replications, std::size_t workers)
{
    treeorder::ExperimentPlan plan;
    plan.scenario.regime = treeorder::regime::NeymanScott{5};
    plan.scenario.seed = 7;
    plan.s_grid = {s};
    plan.replications = replications;
    plan.worker_hint = workers;
    return plan;
}

void BM_ExperimentSerial(benchmark::State& state)
{
    const auto plan = plan_for(state.range(0), state.range(1), 1);
    for (auto _ : state) benchmark::DoNotOptimize(treeorder::run_experiment_serial(plan));
    state.SetItemsProcessed(state.iterations() * state.range(1));
}

void BM_ExperimentOpenMP(benchmark::State& state)
{
    const auto plan = plan_for(state.range(0), state.range(1), static_cast<std::size_t>(omp_get_max_threads()));
    for (auto _ : state) benchmark::DoNotOptimize(treeorder::run_experiment(plan));
    state.SetItemsProcessed(state.iterations() * state.range(1));
}

void BM_MleMu0(benchmark::State& state)
{
    auto stream = treeorder::derive_stream(11, 0, state.range(0));
    treeorder::ScenarioConfig config;
    config.regime = treeorder::regime::NeymanScott{5};
    const auto summary = treeorder::draw_summary(config, state.range(0), stream);
    for (auto _ : state) benchmark::DoNotOptimize(treeorder::mle_mu0(summary));
}

}  // namespace

BENCHMARK(BM_ExperimentSerial)->Args({1000, 64})->Args({10000, 16})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExperimentOpenMP)->Args({1000, 64})->Args({10000, 16})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MleMu0)->Arg(100)->Arg(10000)->Arg(100000);

BENCHMARK_MAIN();
