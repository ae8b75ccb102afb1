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

#ifndef GBSM_ESTIMATION_H
#define GBSM_ESTIMATION_H

#include <cstdint>
#include <string>
#include <vector>

#include "gbsm/pipelines.hpp"

namespace gbsm
{

// Statistic families a measured target curve can describe.
enum class StatisticKind
{
    SpaceCcf,
    StationaryIntervalCcdf,
    CoherenceBandwidthCdf,
    RmsDelaySpreadCcdf
};

StatisticKind statistic_kind_from_string(const std::string &name);
std::string to_string(StatisticKind kind);

// Measured (or synthetic) statistic curve to fit against. x must be
// non-decreasing; ties keep the last value.
struct TargetCurve
{
    StatisticKind kind = StatisticKind::SpaceCcf;
    std::vector<double> x;
    std::vector<double> y;
    std::string source;
};

// Loads a two-column curve file whose "# statistic:" header names the kind.
TargetCurve load_target(const std::string &path);

// Pipeline knobs used when simulating a candidate's statistic.
struct StatisticOptions
{
    StationaryIntervalOptions stationary;
    CoherenceBandwidthOptions coherence;
    DelaySpreadOptions delay_spread;
    SpaceCcfOptions space;
};

// Exhaustive-search domain: named parameters with their candidate values, the
// base configuration for everything else, common random seeds and the
// required stopping threshold (no default; must be set positive).
struct ParameterGrid
{
    std::vector<std::string> names;
    std::vector<std::vector<double>> candidates; // per name
    ScenarioConfig base;
    std::vector<uint64_t> seeds;
    double epsilon_threshold = 0.0;
    StatisticOptions options;
};

struct FitRow
{
    std::vector<double> values; // per grid parameter
    double epsilon = 0.0;
};

struct FitResult
{
    std::vector<std::string> names;
    std::vector<double> best;
    double best_epsilon = 0.0;
    bool threshold_met = false;
    std::vector<FitRow> table; // rows in evaluation order
};

// Fit-parameter names accepted by apply_parameter:
//   aoa_azimuth_std, aoa_elevation_std, aod_azimuth_std, aod_elevation_std,
//   array_coherence_m, space_coherence_m, virtual_link_coherence_s.
ScenarioConfig apply_parameter(ScenarioConfig cfg, const std::string &name, double value);

// Simulates the statistic curve of one configuration across the seed list.
CurveData evaluate_statistic(const ScenarioConfig &cfg, StatisticKind kind,
                             const std::vector<uint64_t> &seeds,
                             const StatisticOptions &options);

// Mean squared error between the candidate's simulated curve (linearly
// interpolated to the target's x points) and the target values.
double objective(const std::vector<double> &values, const ParameterGrid &grid,
                 const TargetCurve &target);

// Exhaustive lexicographic search over the candidate grid with common random
// seeds, stopping early once the objective reaches the threshold.
FitResult grid_search(const ParameterGrid &grid, const TargetCurve &target);

} // namespace gbsm

#endif
