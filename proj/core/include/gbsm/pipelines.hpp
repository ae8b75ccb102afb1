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

#ifndef GBSM_PIPELINES_H
#define GBSM_PIPELINES_H

#include <cstdint>
#include <vector>

#include "gbsm/simulator.hpp"
#include "gbsm/stats.hpp"

namespace gbsm
{

// Generic sampled curve with the fraction of censored ensemble members.
struct CurveData
{
    std::vector<double> x;
    std::vector<double> y;
    double censored_fraction = 0.0;
};

// --- per-cluster correlation study ------------------------------------------

// Field-combination coefficients and state of one ray at one lag, for a fixed
// antenna pair. a..d are the four polarization products that survive phase
// averaging; sqrt_power includes the global normalization and Rician share.
struct RaySample
{
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;
    double sqrt_power = 0.0;
    double theta = 0.0; // accumulated Doppler phase, both legs
};

struct ClusterTrack
{
    uint64_t id = 0;
    std::size_t n_rays = 0;
    std::vector<double> tau;       // cluster delay per lag, s
    std::vector<RaySample> rays;   // [lag * n_rays + m]
};

// Deterministic per-cluster trajectory of one realization, recorded with
// forced survival so every cluster present at the reference time stays
// tracked over the whole lag range. The line-of-sight track is recorded when
// the Rician factor is positive.
struct Trajectory
{
    std::vector<double> lag_s;
    double step_survival = 1.0; // per-step survival probability
    double time_step_s = 0.0;
    std::vector<ClusterTrack> clusters;
    std::vector<cdouble> los_gain;  // weighted LOS gain per lag (empty if K = 0)
    std::vector<double> los_tau;
};

Trajectory record_trajectory(const ScenarioConfig &cfg, uint64_t seed, std::size_t n_lags,
                             std::size_t q, std::size_t p);

// Semi-analytical per-cluster ACF on the frozen trajectory: the expectation
// over polarization phases taken in closed form (only same-ray products
// survive), multiplied by the survival envelope. freq_offset_hz is the
// transfer-function evaluation offset from the carrier.
std::vector<cdouble> analytical_acf_per_cluster(const Trajectory &traj,
                                                std::size_t cluster_index,
                                                double freq_offset_hz = 0.0);

// Deterministic LOS correlation on the same trajectory (no phase averaging
// needed; the LOS polarization phase is fixed per realization).
std::vector<cdouble> analytical_los_acf(const Trajectory &traj, double freq_offset_hz = 0.0);

// Monte-Carlo counterpart: plugs independently drawn polarization phases into
// the recorded trajectory and averages the conjugate products, with per-step
// survival thinning. Matches the analytical curve as members grow.
std::vector<cdouble> simulated_acf_per_cluster(const Trajectory &traj,
                                               std::size_t cluster_index, std::size_t members,
                                               uint64_t seed, double freq_offset_hz = 0.0);

struct AcfStudyOptions
{
    uint64_t seed = 1;
    std::size_t n_lags = 120;
    std::size_t members = 8000;
    std::size_t rx_index = 0;
    std::size_t tx_index = 0;
    double freq_offset_hz = 0.0;
};

struct AcfStudyResult
{
    std::vector<double> lag_s;
    std::vector<uint64_t> cluster_ids;
    std::vector<std::vector<double>> analytical; // [cluster][lag], normalized magnitude
    std::vector<std::vector<double>> simulated;
    double normalizer = 0.0; // first cluster's zero-lag analytical power
};

// Two-cluster narrowband MIMO configuration used by the bundled
// per-cluster correlation study.
ScenarioConfig acf_reference_config();

// Paired analytical/simulated per-cluster ACF magnitudes, all normalized by
// the first cluster's zero-lag analytical value.
AcfStudyResult acf_study(const ScenarioConfig &cfg, const AcfStudyOptions &opts);

// --- ensemble statistic pipelines --------------------------------------------

struct StationaryIntervalOptions
{
    double threshold = 0.8;
    double bin_s = 5e-9;
    std::size_t start_stride = 10; // snapshot indices between interval starts
    double min_window_s = 0.1;     // remaining window required for a start
    std::size_t workers = 1;
};

// Pooled stationary intervals over an ensemble of realizations, as a CCDF.
CurveData stationary_interval_ccdf(const ScenarioConfig &cfg,
                                   const std::vector<uint64_t> &seeds,
                                   const StationaryIntervalOptions &opts);

struct CoherenceBandwidthOptions
{
    double freq_step_hz = 1e4;
    std::size_t n_freq = 501;       // evaluation grid size
    std::size_t max_lag_steps = 200;
    double threshold = 0.9;
    std::size_t time_stride = 10;   // snapshots between sampled instants
    std::size_t rx_index = 0;
    std::size_t tx_index = 0;
    std::size_t workers = 1;
};

// Pooled per-time-sample 90% coherence bandwidths, as a CDF.
CurveData coherence_bandwidth_cdf(const ScenarioConfig &cfg, const std::vector<uint64_t> &seeds,
                                  const CoherenceBandwidthOptions &opts);

struct DelaySpreadOptions
{
    std::size_t time_stride = 1; // snapshots between pooled samples
    std::size_t workers = 1;
};

// RMS delay spread of the power delay profile, pooled over strided snapshots
// of every realization, as a CCDF.
CurveData rms_delay_spread_ccdf(const ScenarioConfig &cfg, const std::vector<uint64_t> &seeds,
                                const DelaySpreadOptions &opts);

struct SpaceCcfOptions
{
    std::size_t max_separation = 6; // in element spacings
    std::size_t tx_index = 0;
    std::size_t batches = 20;       // batch-mean groups for the error estimate
    std::size_t workers = 1;
};

struct SpaceCcfCurve
{
    std::vector<double> separation;  // element spacings
    std::vector<double> correlation; // normalized |E[conj(H_0) H_d]|
    std::vector<double> std_error;   // batch-mean standard error
};

// Receive-side spatial correlation at the initial instant versus element
// separation, estimated across the seed ensemble.
SpaceCcfCurve space_ccf_vs_separation(const ScenarioConfig &cfg,
                                      const std::vector<uint64_t> &seeds,
                                      const SpaceCcfOptions &opts);

// --- angular power spectrum ---------------------------------------------------

struct ApsOptions
{
    uint64_t seed = 1;
    std::size_t members = 64;   // phase redraws forming the sample covariance
    std::size_t subarray = 3;
    std::size_t signal_dim = 2;
    std::size_t segment = 8;    // consecutive elements per reported window
    std::size_t stride = 4;
    std::size_t n_angles = 181; // grid over [-pi/2, pi/2]
    std::size_t tx_index = 0;
};

struct ApsGrid
{
    std::vector<double> window_center; // element-index axis
    std::vector<double> angle_rad;
    std::vector<double> power; // [window * n_angles + angle], peak 1 per window
};

// Angle spectrum along the receive array: spatial samples are built from the
// realization's ray table with per-element carrier phases of the exact
// last-bounce distances (spherical wavefronts), then estimated per window
// with subarray smoothing. Cluster visibility differences appear as windows
// where peaks vanish.
ApsGrid aps_study(const ScenarioConfig &cfg, const ApsOptions &opts);

// --- shared helpers -----------------------------------------------------------

// Runs fn(item) for item = 0..n-1 on `workers` threads. Work is partitioned
// by item; callers write results into per-item slots so reductions stay in a
// fixed order regardless of scheduling.
void parallel_for_items(std::size_t n_items, std::size_t workers,
                        const std::function<void(std::size_t)> &fn);

// Empirical CCDF / CDF over pooled samples: x = sorted sample values,
// y = P(X > x) or P(X <= x).
CurveData empirical_ccdf(std::vector<double> samples);
CurveData empirical_cdf(std::vector<double> samples);

// Linear interpolation of a sampled curve at x (clamped to the end values).
// Exact hits on a run of tied x values resolve to the last y of the run, the
// same convention target-curve loading applies when deduplicating.
double interp_curve(const std::vector<double> &xs, const std::vector<double> &ys, double x);

} // namespace gbsm

#endif
