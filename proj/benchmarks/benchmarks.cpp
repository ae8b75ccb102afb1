// SPDX-License-Identifier: Apache-2.0
//
// gbsm - simulator for 3D non-stationary geometry-based stochastic channels
// Copyright (C) 2026 gbsm contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "gbsm/pipelines.hpp"
#include "gbsm/simulator.hpp"
#include "gbsm/stats.hpp"

namespace
{

gbsm::ScenarioConfig bench_config(const std::string &name)
{
    gbsm::ScenarioConfig cfg = gbsm::preset(name);
    cfg.duration_s = 0.02;
    return cfg;
}

void BM_SnapshotAssembly(benchmark::State &state)
{
    gbsm::ChannelState chan = gbsm::init_state(bench_config("hst_3d"), 7);
    for (auto _ : state)
        benchmark::DoNotOptimize(gbsm::snapshot(chan));
}
BENCHMARK(BM_SnapshotAssembly);

void BM_EvolveTimeStep(benchmark::State &state)
{
    const gbsm::ScenarioConfig cfg = bench_config("hst_3d");
    gbsm::ChannelState chan = gbsm::init_state(cfg, 7);
    for (auto _ : state)
        gbsm::evolve_time_step(chan, cfg.time_step_s);
}
BENCHMARK(BM_EvolveTimeStep);

void BM_MassiveMimoSnapshot(benchmark::State &state)
{
    gbsm::ChannelState chan = gbsm::init_state(bench_config("massive_mimo_3d"), 7);
    for (auto _ : state)
        benchmark::DoNotOptimize(gbsm::snapshot(chan));
}
BENCHMARK(BM_MassiveMimoSnapshot);

void BM_Stfcf(benchmark::State &state)
{
    const gbsm::ScenarioConfig cfg = bench_config("hst_3d");
    std::vector<gbsm::TransferGrid> grids;
    const std::vector<double> freqs = {0.0, 1e6, 2e6};
    for (uint64_t seed = 1; seed <= 8; ++seed)
    {
        const std::vector<gbsm::CirSnapshot> snaps =
            gbsm::run_realization(cfg, seed, gbsm::SnapshotOptions{});
        grids.push_back(gbsm::transfer_grid(snaps, freqs, {{0, 0}}));
    }
    for (auto _ : state)
        benchmark::DoNotOptimize(gbsm::stfcf(grids, 0, 0, 0, 0, 0, 0, 5, 1));
}
BENCHMARK(BM_Stfcf);

void BM_SmoothMusic(benchmark::State &state)
{
    const std::size_t n = 16;
    std::vector<std::vector<gbsm::cdouble>> samples;
    gbsm::RandomStream rng(11);
    for (int k = 0; k < 64; ++k)
    {
        std::vector<gbsm::cdouble> x(n);
        const double phase = rng.uniform() * 2.0 * gbsm::GBSM_PI;
        for (std::size_t i = 0; i < n; ++i)
            x[i] = std::exp(gbsm::cdouble(0.0, gbsm::GBSM_PI * double(i) * 0.5 + phase));
        samples.push_back(std::move(x));
    }
    std::vector<double> angles(181);
    for (int g = 0; g < 181; ++g)
        angles[g] = (double(g) - 90.0) * gbsm::GBSM_PI / 180.0;
    for (auto _ : state)
        benchmark::DoNotOptimize(gbsm::smooth_music_aps(samples, 8, 2, angles));
}
BENCHMARK(BM_SmoothMusic);

} // namespace

BENCHMARK_MAIN();
