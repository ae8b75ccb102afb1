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

#include "gbsm/estimation.hpp"

#include <stdexcept>

#include "gbsm/io.hpp"

namespace gbsm
{

StatisticKind statistic_kind_from_string(const std::string &name)
{
    if (name == "space-ccf")
        return StatisticKind::SpaceCcf;
    if (name == "stationary-interval-ccdf")
        return StatisticKind::StationaryIntervalCcdf;
    if (name == "coherence-bandwidth-cdf")
        return StatisticKind::CoherenceBandwidthCdf;
    if (name == "rms-delay-ccdf")
        return StatisticKind::RmsDelaySpreadCcdf;
    throw ConfigError("unknown statistic kind '" + name + "'");
}

std::string to_string(StatisticKind kind)
{
    switch (kind)
    {
    case StatisticKind::SpaceCcf:
        return "space-ccf";
    case StatisticKind::StationaryIntervalCcdf:
        return "stationary-interval-ccdf";
    case StatisticKind::CoherenceBandwidthCdf:
        return "coherence-bandwidth-cdf";
    case StatisticKind::RmsDelaySpreadCcdf:
        return "rms-delay-ccdf";
    }
    throw std::logic_error("to_string: unhandled statistic kind");
}

TargetCurve load_target(const std::string &path)
{
    const Curve curve = load_curve(path);

    TargetCurve target;
    target.kind = statistic_kind_from_string(curve.statistic);
    target.source = path;

    // Deduplicate tied x values, keeping the last step of the empirical curve.
    for (std::size_t i = 0; i < curve.x.size(); ++i)
    {
        if (!target.x.empty() && curve.x[i] < target.x.back())
            throw IoError(path + ": x values must be non-decreasing");
        if (!target.x.empty() && curve.x[i] == target.x.back())
        {
            target.y.back() = curve.y[i];
            continue;
        }
        target.x.push_back(curve.x[i]);
        target.y.push_back(curve.y[i]);
    }
    if (target.x.empty())
        throw IoError(path + ": target curve has no data rows");
    return target;
}

ScenarioConfig apply_parameter(ScenarioConfig cfg, const std::string &name, double value)
{
    if (name == "aoa_azimuth_std")
        cfg.angles.aoa_azimuth.std_rad = value;
    else if (name == "aoa_elevation_std")
        cfg.angles.aoa_elevation.std_rad = value;
    else if (name == "aod_azimuth_std")
        cfg.angles.aod_azimuth.std_rad = value;
    else if (name == "aod_elevation_std")
        cfg.angles.aod_elevation.std_rad = value;
    else if (name == "array_coherence_m")
        cfg.evolution.array_coherence_m = value;
    else if (name == "space_coherence_m")
        cfg.evolution.space_coherence_m = value;
    else if (name == "virtual_link_coherence_s")
        cfg.evolution.virtual_link_coherence_s = value;
    else
        throw ConfigError("unknown fit parameter '" + name + "'");
    return cfg;
}

CurveData evaluate_statistic(const ScenarioConfig &cfg, StatisticKind kind,
                             const std::vector<uint64_t> &seeds,
                             const StatisticOptions &options)
{
    switch (kind)
    {
    case StatisticKind::SpaceCcf:
    {
        const SpaceCcfCurve sc = space_ccf_vs_separation(cfg, seeds, options.space);
        CurveData curve;
        curve.x = sc.separation;
        curve.y = sc.correlation;
        return curve;
    }
    case StatisticKind::StationaryIntervalCcdf:
        return stationary_interval_ccdf(cfg, seeds, options.stationary);
    case StatisticKind::CoherenceBandwidthCdf:
        return coherence_bandwidth_cdf(cfg, seeds, options.coherence);
    case StatisticKind::RmsDelaySpreadCcdf:
        return rms_delay_spread_ccdf(cfg, seeds, options.delay_spread);
    }
    throw std::logic_error("evaluate_statistic: unhandled statistic kind");
}

double objective(const std::vector<double> &values, const ParameterGrid &grid,
                 const TargetCurve &target)
{
    if (values.size() != grid.names.size())
        throw std::invalid_argument("objective: candidate size does not match the grid");
    if (target.x.empty())
        throw std::invalid_argument("objective: empty target curve");

    ScenarioConfig cfg = grid.base;
    for (std::size_t i = 0; i < values.size(); ++i)
        cfg = apply_parameter(std::move(cfg), grid.names[i], values[i]);

    const CurveData curve = evaluate_statistic(cfg, target.kind, grid.seeds, grid.options);

    double sum = 0.0;
    for (std::size_t i = 0; i < target.x.size(); ++i)
    {
        const double diff = interp_curve(curve.x, curve.y, target.x[i]) - target.y[i];
        sum += diff * diff;
    }
    return sum / static_cast<double>(target.x.size());
}

FitResult grid_search(const ParameterGrid &grid, const TargetCurve &target)
{
    if (grid.names.empty() || grid.names.size() != grid.candidates.size())
        throw ConfigError("grid search needs at least one parameter with candidates");
    for (std::size_t i = 0; i < grid.candidates.size(); ++i)
        if (grid.candidates[i].empty())
            throw ConfigError("no candidate values for fit parameter '" + grid.names[i] + "'");
    if (grid.seeds.empty())
        throw ConfigError("grid search needs at least one seed");
    if (!(grid.epsilon_threshold > 0.0))
        throw ConfigError("epsilon threshold must be set positive (no default)");

    FitResult result;
    result.names = grid.names;
    result.best_epsilon = -1.0;

    std::vector<std::size_t> index(grid.names.size(), 0);
    bool exhausted = false;
    while (!exhausted)
    {
        FitRow row;
        row.values.reserve(index.size());
        for (std::size_t i = 0; i < index.size(); ++i)
            row.values.push_back(grid.candidates[i][index[i]]);
        row.epsilon = objective(row.values, grid, target);
        result.table.push_back(row);

        if (result.best_epsilon < 0.0 || row.epsilon < result.best_epsilon)
        {
            result.best_epsilon = row.epsilon;
            result.best = row.values;
        }
        if (result.best_epsilon <= grid.epsilon_threshold)
        {
            result.threshold_met = true;
            break;
        }

        // Lexicographic increment, last parameter fastest.
        std::size_t pos = index.size();
        for (;;)
        {
            if (pos == 0)
            {
                exhausted = true;
                break;
            }
            --pos;
            if (++index[pos] < grid.candidates[pos].size())
                break;
            index[pos] = 0;
        }
    }

    result.threshold_met = result.best_epsilon <= grid.epsilon_threshold;
    return result;
}

} // namespace gbsm
