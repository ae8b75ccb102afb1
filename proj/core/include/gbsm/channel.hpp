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

#ifndef GBSM_CHANNEL_H
#define GBSM_CHANNEL_H

#include <complex>
#include <cstdint>
#include <vector>

#include "gbsm/cluster.hpp"
#include "gbsm/geometry.hpp"
#include "gbsm/rng.hpp"
#include "gbsm/scenario.hpp"

namespace gbsm
{

using cdouble = std::complex<double>;

// Tap cluster id used for the line-of-sight component.
constexpr uint32_t LOS_TAP_ID = 0xFFFFFFFFu;

// Full simulation state of one realization at one instant.
struct ChannelState
{
    ScenarioConfig config;
    AntennaArray tx;
    AntennaArray rx;

    double time = 0.0;
    double sigma_tau = 0.0;          // per-realization delay-spread draw, s
    double los_phase = 0.0;          // initial LOS polarization phase
    double moving_speed_rx = 0.0;    // bounce speed of moving clusters, Rx side
    double moving_speed_tx = 0.0;

    std::vector<Cluster> clusters;
    uint64_t next_cluster_id = 1;

    std::vector<double> los_phase_acc; // accumulated LOS Doppler, [q * n_tx + p]

    RandomStream structure_rng; // cluster structure, lifetimes, evolution draws
    RandomStream phase_rng;     // polarization phases only

    ChannelState(const ScenarioConfig &cfg, RandomStream s, RandomStream p)
        : config(cfg), tx(build_array(cfg, true)), rx(build_array(cfg, false)),
          structure_rng(s), phase_rng(p)
    {
    }
};

// One channel tap: complex amplitude at an absolute delay, tagged with the
// producing cluster/ray (LOS_TAP_ID for the line-of-sight tap).
struct Tap
{
    double delay = 0.0;
    cdouble gain{};
    uint32_t cluster_id = 0;
    uint32_t ray_index = 0;
};

// Globally normalized mean ray power (appearance ramps applied), the delay
// side of the power delay profile.
struct RayPower
{
    uint32_t cluster_id = 0;
    uint32_t ray_index = 0;
    double delay = 0.0; // absolute (cluster + excess), s
    double power = 0.0;
};

// Channel impulse response of every requested antenna pair at one instant.
struct CirSnapshot
{
    double time = 0.0;
    uint32_t n_rx = 0;
    uint32_t n_tx = 0;
    std::vector<std::vector<Tap>> taps; // [q * n_tx + p]; empty in pdp_only mode
    std::vector<RayPower> ray_powers;   // global, identical for all pairs
    bool ramping = false;               // any cluster mid-ramp (sum of powers < 1)

    const std::vector<Tap> &pair(std::size_t q, std::size_t p) const;
};

struct SnapshotOptions
{
    bool pdp_only = false; // skip per-pair tap assembly (power/delay table only)
    // When non-empty, restricts tap assembly to these (q, p) pairs.
    std::vector<std::pair<uint32_t, uint32_t>> pairs;
};

// --- geometry helpers ------------------------------------------------------

// Vector from Tx element p to Rx element q at the state's current time.
Vec3 los_distance(const ChannelState &s, std::size_t q, std::size_t p);

// Per-cluster derived geometry at time t: bounce positions in global
// coordinates, distances and angles relative to the current array centers.
struct ClusterVectors
{
    Vec3 rx_bounce;     // last-bounce position
    Vec3 tx_bounce;     // first-bounce position
    double rx_distance; // ||last bounce - rx center||
    double tx_distance;
    double aoa_azimuth;
    double aoa_elevation;
    double aod_azimuth;
    double aod_elevation;
};

ClusterVectors cluster_vectors(const ChannelState &s, const Cluster &c, double t);

// Bounce position of one ray: cluster distance with the ray's angle offsets.
Vec3 ray_rx_bounce(const ChannelState &s, const ClusterVectors &cv, const Ray &r, double t);
Vec3 ray_tx_bounce(const ChannelState &s, const ClusterVectors &cv, const Ray &r, double t);

// Doppler frequency of a propagation leg: projection of the relative velocity
// onto the leg direction over the wavelength. Throws on a zero-length leg.
double doppler_frequency(const Vec3 &leg, const Vec3 &v_array, const Vec3 &v_bounce,
                         double wavelength);

double doppler_los(const ChannelState &s, std::size_t q, std::size_t p);

// NLOS path delay: two-hop geometric distance plus the virtual delay.
double nlos_delay(const ChannelState &s, const Cluster &c);

// --- gain assembly ----------------------------------------------------------

// LOS polarization coupling and accumulated Doppler phase; excludes the
// Rician weight.
cdouble los_gain(const ChannelState &s, std::size_t q, std::size_t p);

// Single-ray gain for pair (q, p): field patterns, polarization matrix with
// cross-polarization kappa, sqrt(amplitude weight) and both accumulated
// Doppler phases. Returns exactly 0 when the cluster is not jointly
// observable by q and p. `weight` is the normalized mean ray power including
// ramps and the Rician NLOS share.
cdouble nlos_gain(const ChannelState &s, const Cluster &c, const ClusterVectors &cv,
                  std::size_t ray_index, std::size_t q, std::size_t p, double weight);

// Assembles the snapshot at the state's current time. Normalizes mean ray
// powers globally to unit sum (before ramps), applies Rician weights
// sqrt(K/(K+1)) / sqrt(1/(K+1)) and appearance ramps.
CirSnapshot snapshot(const ChannelState &s, const SnapshotOptions &opts = {});

// Observable-cluster bookkeeping (per-antenna visibility sets).
struct VisibilitySet
{
    // cluster ids observable per receive / transmit element
    std::vector<std::vector<uint64_t>> rx_sets;
    std::vector<std::vector<uint64_t>> tx_sets;

    // Clusters observable by the (q, p) link: intersection of both sides.
    std::vector<uint64_t> pair_set(std::size_t q, std::size_t p) const;

    // Total number of distinct clusters observable by at least one link.
    std::size_t observable_count() const;
};

VisibilitySet visibility_set(const ChannelState &s);

} // namespace gbsm

#endif
