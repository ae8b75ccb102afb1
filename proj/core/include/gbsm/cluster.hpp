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

#ifndef GBSM_CLUSTER_H
#define GBSM_CLUSTER_H

#include <cstdint>
#include <vector>

#include "gbsm/geometry.hpp"
#include "gbsm/rng.hpp"
#include "gbsm/vec3.hpp"

namespace gbsm
{

// Parameters of the cluster birth-death process and the per-cluster
// generators. Rates are per meter of array/trajectory displacement.
struct EvolutionParams
{
    double generation_rate_per_m = 80.0;    // lambda_G
    double recombination_rate_per_m = 4.0;  // lambda_R
    double moving_cluster_fraction = 0.3;   // P_F
    double mean_relative_speed_rx = 0.0;    // E||v^R - v_n^R||, m/s
    double mean_relative_speed_tx = 0.0;    // m/s
    double array_coherence_m = 30.0;        // D_c^a, array-axis scenario coherence
    double space_coherence_m = 100.0;       // D_c^s, time-axis scenario coherence
    double virtual_link_coherence_s = 7.0;  // varsigma, virtual-delay relaxation
    double delay_scalar = 2.3;              // r_tau
    double log10_delay_spread_mean = -6.63; // E[log10 sigma_tau], sigma_tau in s
    double log10_delay_spread_std = 0.32;
    double shadowing_std_db = 3.0;       // Z ~ N(0, this) in dB
    double ray_count_mean = 20.0;        // std > 0: Poisson; std == 0: fixed count
    double ray_count_std = 0.0;
    double ray_delay_mean_s = 0.0;       // E[tau_{m_n}]; 0 collapses rays to one delay
    double ray_offset_std_rad = 0.017;   // Laplace std of per-ray angle offsets
    double rx_distance_mean_m = 25.0;    // last-bounce distance stats
    double rx_distance_std_m = 15.0;
    double tx_distance_mean_m = 30.0;    // first-bounce distance stats
    double tx_distance_std_m = 10.0;
    double fade_ramp_s = 0.001;          // linear appearance/disappearance ramp
    double power_decay_exponent = 2.0;   // eta in the power-evolution factor
    bool array_visibility_evolution = true;
    int initial_cluster_count = -1;      // < 0: draw Poisson(lambda_G / lambda_R)
};

struct AngleSpread
{
    double mean_rad = 0.0;
    double std_rad = 0.0;
};

struct AngleParams
{
    AngleSpread aoa_azimuth;
    AngleSpread aoa_elevation;
    AngleSpread aod_azimuth;
    AngleSpread aod_elevation;
};

struct ClusterAngles
{
    double aoa_azimuth;
    double aoa_elevation;
    double aod_azimuth;
    double aod_elevation;
};

// One ray within a cluster: excess delay relative to the cluster delay, a
// time-evolving (unnormalized) mean power, fixed angle offsets around the
// cluster direction and four i.i.d. initial polarization phases.
struct Ray
{
    double relative_delay = 0.0; // tau_{m_n}, s
    double power = 0.0;          // unnormalized, evolves over time
    double aoa_az_offset = 0.0;
    double aoa_el_offset = 0.0;
    double aod_az_offset = 0.0;
    double aod_el_offset = 0.0;
    double phase_vv = 0.0;
    double phase_vh = 0.0;
    double phase_hv = 0.0;
    double phase_hh = 0.0;
};

enum class Lifecycle
{
    Active,
    FadingIn, // power ramps 0 -> 1 over fade_ramp_s after birth
    FadingOut // power ramps (entry scale) -> 0 over fade_ramp_s, then removed
};

struct Cluster
{
    uint64_t id = 0;
    double birth_time = 0.0;
    Lifecycle lifecycle = Lifecycle::Active;
    double phase_change_time = 0.0; // FadingIn/FadingOut ramp start
    double fade_out_scale = 1.0;    // ramp level at the moment of death

    // First/last-bounce positions in global coordinates at birth plus their
    // constant velocities; positions at time t follow birth + v * (t - birth).
    Vec3 tx_bounce_birth{};
    Vec3 rx_bounce_birth{};
    Vec3 tx_bounce_velocity{};
    Vec3 rx_bounce_velocity{};

    double virtual_delay = 0.0; // tau~_n, s; evolves by exponential relaxation

    std::vector<Ray> rays;

    // Antenna visibility per side, fixed at birth (index -> observable).
    std::vector<uint8_t> rx_visible;
    std::vector<uint8_t> tx_visible;

    // Accumulated Doppler phases, [antenna * n_rays + ray].
    std::vector<double> rx_phase;
    std::vector<double> tx_phase;

    Vec3 tx_bounce(double t) const { return tx_bounce_birth + tx_bounce_velocity * (t - birth_time); }
    Vec3 rx_bounce(double t) const { return rx_bounce_birth + rx_bounce_velocity * (t - birth_time); }

    // Appearance/disappearance power scale at time t, in [0, 1].
    double ramp(double t, double ramp_duration) const;

    double total_power() const;
};

// --- birth-death process -------------------------------------------------

// Per-step survival probability
//   P_T(dt) = exp(-lambda_R * P_F * (dv^R + dv^T) * dt / D_c^s).
double survival_probability(const EvolutionParams &p, double dt);

// Expected number of newly generated clusters over one step,
//   E[N_new] = (lambda_G / lambda_R) * (1 - P_T(dt)).
double expected_new_clusters(const EvolutionParams &p, double dt);

// --- per-cluster generators ----------------------------------------------

// Virtual delay tau~ = -r_tau * sigma_tau * ln(u), exponential with mean
// r_tau * sigma_tau.
double generate_virtual_delay(double r_tau, double sigma_tau, RandomStream &rng);

// Cluster power exp(-tau~ * (r_tau - 1) / (r_tau * sigma_tau)) * 10^(-Z/10),
// Z ~ N(0, shadow_std_db).
double generate_cluster_power(double virtual_delay, double r_tau, double sigma_tau,
                              double shadow_std_db, RandomStream &rng);

// Wrapped-Gaussian departure/arrival angles around the configured means.
ClusterAngles generate_cluster_angles(const AngleParams &p, RandomStream &rng);

// Ray set: count from the configured distribution (Poisson when std > 0,
// fixed otherwise, never below 1), excess delays exponential with mean
// ray_delay_mean_s, powers exp(-tau_m * (r_tau - 1) / E[tau_m]) * 10^(-Z/10)
// (all mass at zero delay when E[tau_m] == 0, so rays differ via shadowing
// only) and Laplace angle offsets. Polarization phases are assigned by the
// caller from the dedicated phase stream.
std::vector<Ray> generate_ray_set(const EvolutionParams &p, RandomStream &rng);

// Rescales ray powers in place so they sum to cluster_power.
// Throws std::invalid_argument when the unscaled powers sum to zero.
void scale_ray_powers(double cluster_power, std::vector<Ray> &rays);

// Visibility ball on one array side: anchor antenna uniform, radius
// exponential with rate lambda_R / D_c^a, every element within the radius of
// the anchor (at time t) observes the cluster. The anchor always does.
std::vector<uint8_t> assign_visibility(const AntennaArray &array, double t,
                                       double recombination_rate_per_m,
                                       double array_coherence_m, RandomStream &rng);

// Speed assigned to moving clusters so that E||v_array - v_cluster|| over all
// clusters (static fraction included) meets the configured mean relative
// speed. Infeasible targets (mean below the array speed) fall back to
// target / moving_fraction. Pure function of the parameters.
double moving_cluster_speed(double array_speed, double mean_relative_speed,
                            double moving_fraction, bool two_d);

// Draws a bounce velocity: zero with probability 1 - P_F, otherwise `speed`
// times a uniform direction (sphere, or xy-circle in 2D mode).
Vec3 draw_bounce_velocity(double speed, double moving_fraction, bool two_d, RandomStream &rng);

// Power-evolution factor applied to a ray power between consecutive steps:
//   P(t+dt) = P(t) * ((eta+1)*tau(t) - eta*tau(t+dt) + tau_m) / (tau(t) + tau_m)
// clamped at 0 (large delay jumps mean the cluster left the local
// stationarity region).
double power_evolution(double power, double tau_old, double tau_new, double ray_delay,
                       double eta);

} // namespace gbsm

#endif
