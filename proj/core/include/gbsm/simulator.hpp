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
// ------------------------------------------------------------------------

#ifndef GBSM_SIMULATOR_H
#define GBSM_SIMULATOR_H

#include <cstdint>
#include <functional>
#include <vector>

#include "gbsm/channel.hpp"
#include "gbsm/scenario.hpp"

namespace gbsm
{

// Builds the t = 0 state: per-realization large-scale draws, moving-cluster
// speeds and the initial cluster set (all clusters born Active).
//
// Two independent generator streams drive a realization: the structure
// stream (cluster counts, delays, powers, geometry, lifetimes) and the phase
// stream (polarization phases only). Re-seeding the phase stream alone
// re-randomizes fast fading while keeping every cluster in place.
ChannelState init_state(const ScenarioConfig &cfg, uint64_t structure_seed,
                        uint64_t phase_seed);

// Single-seed form; derives the two streams from one realization seed.
ChannelState init_state(const ScenarioConfig &cfg, uint64_t seed);

// Generates one fully populated cluster born at birth_time: ray set, virtual
// delay, power, bounce geometry, per-side visibility, polarization phases and
// Doppler phase accumulators. Returned Active; the caller owns lifecycle.
Cluster generate_cluster(ChannelState &state, double birth_time);

// Advances the state by dt: survival decisions, new-cluster births, survived
// cluster updates (virtual-delay relaxation, ray-power evolution), Doppler
// phase accumulation and appearance/disappearance ramp bookkeeping.
//
// force_survival suppresses deaths while consuming the identical random
// draws, which lets correlation pipelines track one cluster deterministically
// alongside an unforced twin run.
void evolve_time_step(ChannelState &state, double dt, bool force_survival = false);

// Number of snapshots a run emits: round(duration / dt), taken at
// t = 0, dt, ..., (count - 1) * dt.
std::size_t snapshot_count(double duration_s, double time_step_s);

using SnapshotSink = std::function<void(const CirSnapshot &)>;

// Runs one full realization, streaming every snapshot into sink.
void run_realization(const ScenarioConfig &cfg, uint64_t seed, const SnapshotOptions &opts,
                     const SnapshotSink &sink);

// Convenience form collecting all snapshots.
std::vector<CirSnapshot> run_realization(const ScenarioConfig &cfg, uint64_t seed,
                                         const SnapshotOptions &opts = {});

} // namespace gbsm

#endif
