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

#include "gbsm/simulator.hpp"

#include <cmath>
#include <stdexcept>

namespace gbsm
{

namespace
{

// Accumulated Doppler phase increments of one cluster over [t, t + dt]; also
// used at birth with dt = birth_time to seed the accumulators at 2*pi*f*t.
void accumulate_ray_phases(const ChannelState &s, Cluster &c, double t, double dt)
{
    const ClusterVectors cv = cluster_vectors(s, c, t);
    const double wl = s.config.wavelength();
    const std::size_t n_rays = c.rays.size();

    for (std::size_t m = 0; m < n_rays; ++m)
    {
        const Vec3 bounce_rx = ray_rx_bounce(s, cv, c.rays[m], t);
        const Vec3 bounce_tx = ray_tx_bounce(s, cv, c.rays[m], t);
        for (std::size_t q = 0; q < s.rx.size(); ++q)
        {
            const Vec3 leg = bounce_rx - s.rx.element_position(q, t);
            const double f = doppler_frequency(leg, s.rx.velocity, c.rx_bounce_velocity, wl);
            c.rx_phase[q * n_rays + m] += 2.0 * GBSM_PI * f * dt;
        }
        for (std::size_t p = 0; p < s.tx.size(); ++p)
        {
            const Vec3 leg = bounce_tx - s.tx.element_position(p, t);
            const double f = doppler_frequency(leg, s.tx.velocity, c.tx_bounce_velocity, wl);
            c.tx_phase[p * n_rays + m] += 2.0 * GBSM_PI * f * dt;
        }
    }
}

void accumulate_los_phase(ChannelState &s, double t, double dt)
{
    if (s.config.rician_k <= 0.0)
        return;
    const double wl = s.config.wavelength();
    for (std::size_t q = 0; q < s.rx.size(); ++q)
        for (std::size_t p = 0; p < s.tx.size(); ++p)
        {
            const Vec3 d = s.rx.element_position(q, t) - s.tx.element_position(p, t);
            const double f = doppler_frequency(d, s.rx.velocity, s.tx.velocity, wl);
            s.los_phase_acc[q * s.tx.size() + p] += 2.0 * GBSM_PI * f * dt;
        }
}

double bounce_distance(double mean, double std, RandomStream &rng)
{
    if (std <= 0.0)
        return mean;
    // Matches both requested moments; an exponential cannot when mean != std.
    const double shape = (mean / std) * (mean / std);
    const double scale = std * std / mean;
    return rng.gamma(shape, scale);
}

} // namespace

Cluster generate_cluster(ChannelState &state, double birth_time)
{
    const EvolutionParams &ev = state.config.evolution;
    RandomStream &rng = state.structure_rng;

    Cluster c;
    c.id = state.next_cluster_id++;
    c.birth_time = birth_time;
    c.lifecycle = Lifecycle::Active;
    c.phase_change_time = birth_time;

    c.virtual_delay = generate_virtual_delay(ev.delay_scalar, state.sigma_tau, rng);
    const double cluster_power = generate_cluster_power(
        c.virtual_delay, ev.delay_scalar, state.sigma_tau, ev.shadowing_std_db, rng);

    const double d_rx = bounce_distance(ev.rx_distance_mean_m, ev.rx_distance_std_m, rng);
    const double d_tx = bounce_distance(ev.tx_distance_mean_m, ev.tx_distance_std_m, rng);

    const ClusterAngles ang = generate_cluster_angles(state.config.angles, rng);
    c.rx_bounce_birth = state.rx.center(birth_time) +
                        d_rx * unit_from_angles(ang.aoa_azimuth, ang.aoa_elevation);
    c.tx_bounce_birth = state.tx.center(birth_time) +
                        d_tx * unit_from_angles(ang.aod_azimuth, ang.aod_elevation);

    c.rx_bounce_velocity = draw_bounce_velocity(state.moving_speed_rx,
                                                ev.moving_cluster_fraction,
                                                state.config.two_d, rng);
    c.tx_bounce_velocity = draw_bounce_velocity(state.moving_speed_tx,
                                                ev.moving_cluster_fraction,
                                                state.config.two_d, rng);

    c.rays = generate_ray_set(ev, rng);
    scale_ray_powers(cluster_power, c.rays);

    if (ev.array_visibility_evolution)
    {
        c.rx_visible = assign_visibility(state.rx, birth_time, ev.recombination_rate_per_m,
                                         ev.array_coherence_m, rng);
        c.tx_visible = assign_visibility(state.tx, birth_time, ev.recombination_rate_per_m,
                                         ev.array_coherence_m, rng);
    }
    else
    {
        c.rx_visible.assign(state.rx.size(), 1);
        c.tx_visible.assign(state.tx.size(), 1);
    }

    for (Ray &r : c.rays)
    {
        r.phase_vv = state.phase_rng.uniform(0.0, 2.0 * GBSM_PI);
        r.phase_vh = state.phase_rng.uniform(0.0, 2.0 * GBSM_PI);
        r.phase_hv = state.phase_rng.uniform(0.0, 2.0 * GBSM_PI);
        r.phase_hh = state.phase_rng.uniform(0.0, 2.0 * GBSM_PI);
    }

    c.rx_phase.assign(state.rx.size() * c.rays.size(), 0.0);
    c.tx_phase.assign(state.tx.size() * c.rays.size(), 0.0);
    if (birth_time != 0.0)
        accumulate_ray_phases(state, c, birth_time, birth_time);
    return c;
}

ChannelState init_state(const ScenarioConfig &cfg, uint64_t structure_seed,
                        uint64_t phase_seed)
{
    validate(cfg);

    ChannelState state(cfg, RandomStream(structure_seed), RandomStream(phase_seed));
    const EvolutionParams &ev = cfg.evolution;

    state.sigma_tau =
        state.structure_rng.lognormal10(ev.log10_delay_spread_mean, ev.log10_delay_spread_std);
    state.los_phase = state.phase_rng.uniform(0.0, 2.0 * GBSM_PI);

    state.moving_speed_rx = moving_cluster_speed(state.rx.velocity.norm(),
                                                 ev.mean_relative_speed_rx,
                                                 ev.moving_cluster_fraction, cfg.two_d);
    state.moving_speed_tx = moving_cluster_speed(state.tx.velocity.norm(),
                                                 ev.mean_relative_speed_tx,
                                                 ev.moving_cluster_fraction, cfg.two_d);

    state.los_phase_acc.assign(state.rx.size() * state.tx.size(), 0.0);

    std::size_t initial = 0;
    if (ev.initial_cluster_count >= 0)
        initial = static_cast<std::size_t>(ev.initial_cluster_count);
    else
        initial = static_cast<std::size_t>(
            state.structure_rng.poisson(ev.generation_rate_per_m / ev.recombination_rate_per_m));

    state.clusters.reserve(initial);
    for (std::size_t i = 0; i < initial; ++i)
        state.clusters.push_back(generate_cluster(state, 0.0));
    return state;
}

ChannelState init_state(const ScenarioConfig &cfg, uint64_t seed)
{
    return init_state(cfg, derive_seed(seed, 0), derive_seed(seed, 1));
}

void evolve_time_step(ChannelState &state, double dt, bool force_survival)
{
    if (dt <= 0.0)
        throw std::invalid_argument("evolve_time_step: dt must be positive");

    const EvolutionParams &ev = state.config.evolution;
    const double t0 = state.time;
    const double t1 = t0 + dt;
    const double ramp_dur = ev.fade_ramp_s;

    // Survival decisions. Draws are consumed for every live cluster even in
    // force_survival mode so forced and unforced twins stay aligned until the
    // first death.
    const double p_surv = survival_probability(ev, dt);
    for (Cluster &c : state.clusters)
    {
        if (c.lifecycle == Lifecycle::FadingOut)
            continue;
        const double u = state.structure_rng.uniform();
        if (force_survival || u < p_surv)
            continue;
        c.fade_out_scale = c.ramp(t1, ramp_dur);
        c.lifecycle = Lifecycle::FadingOut;
        c.phase_change_time = t1;
    }

    const uint64_t n_new = state.structure_rng.poisson(expected_new_clusters(ev, dt));

    // Doppler phases advance with the frequency at the start of the step for
    // every cluster that can still contribute power, dying ones included.
    for (Cluster &c : state.clusters)
        accumulate_ray_phases(state, c, t0, dt);
    accumulate_los_phase(state, t0, dt);

    // Survived-cluster updates: virtual-delay relaxation and ray-power decay
    // driven by the step's total-delay change.
    const double keep = std::exp(-dt / ev.virtual_link_coherence_s);
    for (Cluster &c : state.clusters)
    {
        if (c.lifecycle == Lifecycle::FadingOut)
            continue;

        const ClusterVectors cv0 = cluster_vectors(state, c, t0);
        const double tau_old =
            (cv0.rx_distance + cv0.tx_distance) / SPEED_OF_LIGHT + c.virtual_delay;

        const double fresh =
            generate_virtual_delay(ev.delay_scalar, state.sigma_tau, state.structure_rng);
        c.virtual_delay = keep * c.virtual_delay + (1.0 - keep) * fresh;

        const ClusterVectors cv1 = cluster_vectors(state, c, t1);
        const double tau_new =
            (cv1.rx_distance + cv1.tx_distance) / SPEED_OF_LIGHT + c.virtual_delay;

        for (Ray &r : c.rays)
            r.power = power_evolution(r.power, tau_old, tau_new, r.relative_delay,
                                      ev.power_decay_exponent);

        if (!force_survival && c.total_power() <= 0.0)
        {
            // The whole cluster left the local stationarity region.
            c.fade_out_scale = c.ramp(t1, ramp_dur);
            c.lifecycle = Lifecycle::FadingOut;
            c.phase_change_time = t1;
        }
    }

    for (uint64_t i = 0; i < n_new; ++i)
    {
        Cluster c = generate_cluster(state, t1);
        c.lifecycle = Lifecycle::FadingIn;
        c.phase_change_time = t1;
        state.clusters.push_back(std::move(c));
    }

    // Ramp bookkeeping: completed fade-outs leave the state, completed
    // fade-ins become plain Active clusters.
    std::vector<Cluster> kept;
    kept.reserve(state.clusters.size());
    for (Cluster &c : state.clusters)
    {
        if (c.lifecycle == Lifecycle::FadingOut && t1 >= c.phase_change_time + ramp_dur)
            continue;
        if (c.lifecycle == Lifecycle::FadingIn && t1 >= c.phase_change_time + ramp_dur)
            c.lifecycle = Lifecycle::Active;
        kept.push_back(std::move(c));
    }
    state.clusters = std::move(kept);

    state.time = t1;
}

std::size_t snapshot_count(double duration_s, double time_step_s)
{
    if (duration_s <= 0.0 || time_step_s <= 0.0)
        throw ConfigError("snapshot_count: duration and time step must be positive");
    const long long n = std::llround(duration_s / time_step_s);
    if (n < 1)
        throw ConfigError("snapshot_count: duration shorter than half a time step");
    return static_cast<std::size_t>(n);
}

void run_realization(const ScenarioConfig &cfg, uint64_t seed, const SnapshotOptions &opts,
                     const SnapshotSink &sink)
{
    const std::size_t count = snapshot_count(cfg.duration_s, cfg.time_step_s);
    ChannelState state = init_state(cfg, seed);
    sink(snapshot(state, opts));
    for (std::size_t i = 1; i < count; ++i)
    {
        evolve_time_step(state, cfg.time_step_s);
        sink(snapshot(state, opts));
    }
}

std::vector<CirSnapshot> run_realization(const ScenarioConfig &cfg, uint64_t seed,
                                         const SnapshotOptions &opts)
{
    std::vector<CirSnapshot> out;
    out.reserve(snapshot_count(cfg.duration_s, cfg.time_step_s));
    run_realization(cfg, seed, opts, [&out](const CirSnapshot &s) { out.push_back(s); });
    return out;
}

} // namespace gbsm
