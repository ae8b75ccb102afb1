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

#include "gbsm/pipelines.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace gbsm
{

void parallel_for_items(std::size_t n_items, std::size_t workers,
                        const std::function<void(std::size_t)> &fn)
{
    if (workers <= 1 || n_items <= 1)
    {
        for (std::size_t i = 0; i < n_items; ++i)
            fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto run = [&]() {
        for (;;)
        {
            const std::size_t i = next.fetch_add(1);
            if (i >= n_items)
                return;
            try
            {
                fn(i);
            }
            catch (...)
            {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    const std::size_t n_threads = std::min(workers, n_items);
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t)
        pool.emplace_back(run);
    for (std::thread &t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
}

CurveData empirical_ccdf(std::vector<double> samples)
{
    if (samples.empty())
        throw std::invalid_argument("empirical_ccdf: no samples");
    std::sort(samples.begin(), samples.end());

    CurveData curve;
    const double n = static_cast<double>(samples.size());
    curve.x = std::move(samples);
    curve.y.resize(curve.x.size());
    for (std::size_t i = 0; i < curve.x.size(); ++i)
        curve.y[i] = (n - static_cast<double>(i + 1)) / n;
    return curve;
}

CurveData empirical_cdf(std::vector<double> samples)
{
    if (samples.empty())
        throw std::invalid_argument("empirical_cdf: no samples");
    std::sort(samples.begin(), samples.end());

    CurveData curve;
    const double n = static_cast<double>(samples.size());
    curve.x = std::move(samples);
    curve.y.resize(curve.x.size());
    for (std::size_t i = 0; i < curve.x.size(); ++i)
        curve.y[i] = static_cast<double>(i + 1) / n;
    return curve;
}

double interp_curve(const std::vector<double> &xs, const std::vector<double> &ys, double x)
{
    if (xs.empty() || xs.size() != ys.size())
        throw std::invalid_argument("interp_curve: malformed curve");
    if (x < xs.front())
        return ys.front();
    if (x >= xs.back())
        return ys.back();

    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
    const std::size_t lo = hi - 1;
    const double span = xs[hi] - xs[lo];
    if (span <= 0.0)
        return ys[lo];
    const double w = (x - xs[lo]) / span;
    return ys[lo] + w * (ys[hi] - ys[lo]);
}

// --- per-cluster correlation study ------------------------------------------

namespace
{

// Appends one lag of per-ray samples and the cluster delays to the tracks.
void record_lag(const ChannelState &state, std::vector<ClusterTrack> &tracks, std::size_t q,
                std::size_t p, Trajectory &traj)
{
    const double t = state.time;
    const double nlos_weight = 1.0 / (state.config.rician_k + 1.0);
    const double sqrt_kappa = std::sqrt(state.config.cross_polarization);

    CirSnapshot snap = snapshot(state, SnapshotOptions{true, {}});
    std::unordered_map<uint64_t, std::vector<double>> powers;
    for (const RayPower &rp : snap.ray_powers)
    {
        std::vector<double> &per_ray = powers[rp.cluster_id];
        if (per_ray.size() <= rp.ray_index)
            per_ray.resize(rp.ray_index + 1, 0.0);
        per_ray[rp.ray_index] = rp.power;
    }

    for (ClusterTrack &track : tracks)
    {
        const Cluster *cluster = nullptr;
        for (const Cluster &c : state.clusters)
        {
            if (c.id == track.id)
            {
                cluster = &c;
                break;
            }
        }
        if (cluster == nullptr)
            throw std::logic_error("record_lag: tracked cluster disappeared");

        const Cluster &c = *cluster;
        const ClusterVectors cv = cluster_vectors(state, c, t);
        track.tau.push_back(nlos_delay(state, c));

        const bool joint = c.rx_visible[q] != 0 && c.tx_visible[p] != 0;
        const std::vector<double> &per_ray = powers[c.id];
        for (std::size_t m = 0; m < track.n_rays; ++m)
        {
            RaySample sample;
            if (joint)
            {
                const Ray &ray = c.rays[m];
                const Vec3 rb = ray_rx_bounce(state, cv, ray, t);
                const Vec3 tb = ray_tx_bounce(state, cv, ray, t);
                const PolarizedField fr = field_pattern(
                    state.rx.pattern, rb, state.rx.element_position(q, t), state.rx.rotation);
                const PolarizedField ft = field_pattern(
                    state.tx.pattern, tb, state.tx.element_position(p, t), state.tx.rotation);

                sample.a = fr.f_vertical * ft.f_vertical;
                sample.b = sqrt_kappa * fr.f_vertical * ft.f_horizontal;
                sample.c = sqrt_kappa * fr.f_horizontal * ft.f_vertical;
                sample.d = fr.f_horizontal * ft.f_horizontal;
                const double power = m < per_ray.size() ? per_ray[m] : 0.0;
                sample.sqrt_power = std::sqrt(power * nlos_weight);
                sample.theta = c.rx_phase[q * c.rays.size() + m] + c.tx_phase[p * c.rays.size() + m];
            }
            track.rays.push_back(sample);
        }
    }

    if (state.config.rician_k > 0.0)
    {
        const double w = std::sqrt(state.config.rician_k / (state.config.rician_k + 1.0));
        traj.los_gain.push_back(w * los_gain(state, q, p));
        traj.los_tau.push_back((state.rx.center(t) - state.tx.center(t)).norm() / SPEED_OF_LIGHT);
    }
}

} // namespace

Trajectory record_trajectory(const ScenarioConfig &cfg, uint64_t seed, std::size_t n_lags,
                             std::size_t q, std::size_t p)
{
    if (n_lags == 0)
        throw std::invalid_argument("record_trajectory: need at least one lag");

    ChannelState state = init_state(cfg, seed);
    if (q >= state.rx.size() || p >= state.tx.size())
        throw std::out_of_range("record_trajectory: antenna index outside the arrays");

    Trajectory traj;
    traj.time_step_s = cfg.time_step_s;
    traj.step_survival = survival_probability(cfg.evolution, cfg.time_step_s);
    traj.clusters.reserve(state.clusters.size());
    for (const Cluster &c : state.clusters)
    {
        ClusterTrack track;
        track.id = c.id;
        track.n_rays = c.rays.size();
        track.tau.reserve(n_lags);
        track.rays.reserve(n_lags * track.n_rays);
        traj.clusters.push_back(std::move(track));
    }

    traj.lag_s.reserve(n_lags);
    traj.lag_s.push_back(0.0);
    record_lag(state, traj.clusters, q, p, traj);
    for (std::size_t k = 1; k < n_lags; ++k)
    {
        evolve_time_step(state, cfg.time_step_s, true);
        traj.lag_s.push_back(state.time);
        record_lag(state, traj.clusters, q, p, traj);
    }
    return traj;
}

std::vector<cdouble> analytical_acf_per_cluster(const Trajectory &traj,
                                                std::size_t cluster_index,
                                                double freq_offset_hz)
{
    const ClusterTrack &track = traj.clusters.at(cluster_index);
    const std::size_t n_lags = traj.lag_s.size();
    const std::size_t n_rays = track.n_rays;

    std::vector<cdouble> out(n_lags);
    for (std::size_t k = 0; k < n_lags; ++k)
    {
        cdouble sum{0.0, 0.0};
        for (std::size_t m = 0; m < n_rays; ++m)
        {
            const RaySample &s0 = track.rays[m];
            const RaySample &sk = track.rays[k * n_rays + m];
            const double combo = s0.a * sk.a + s0.b * sk.b + s0.c * sk.c + s0.d * sk.d;
            const double mag = combo * s0.sqrt_power * sk.sqrt_power;
            const double dtheta = sk.theta - s0.theta;
            sum += mag * cdouble{std::cos(dtheta), std::sin(dtheta)};
        }
        const double delay_phase = 2.0 * GBSM_PI * freq_offset_hz * (track.tau[0] - track.tau[k]);
        const double envelope = std::pow(traj.step_survival, static_cast<double>(k));
        out[k] = envelope * sum * cdouble{std::cos(delay_phase), std::sin(delay_phase)};
    }
    return out;
}

std::vector<cdouble> analytical_los_acf(const Trajectory &traj, double freq_offset_hz)
{
    if (traj.los_gain.empty())
        throw std::invalid_argument("analytical_los_acf: trajectory has no line-of-sight track");

    std::vector<cdouble> out(traj.los_gain.size());
    const double phase0 = -2.0 * GBSM_PI * freq_offset_hz * traj.los_tau[0];
    const cdouble h0 = traj.los_gain[0] * cdouble{std::cos(phase0), std::sin(phase0)};
    for (std::size_t k = 0; k < traj.los_gain.size(); ++k)
    {
        const double phase = -2.0 * GBSM_PI * freq_offset_hz * traj.los_tau[k];
        out[k] = std::conj(h0) * traj.los_gain[k] * cdouble{std::cos(phase), std::sin(phase)};
    }
    return out;
}

std::vector<cdouble> simulated_acf_per_cluster(const Trajectory &traj,
                                               std::size_t cluster_index, std::size_t members,
                                               uint64_t seed, double freq_offset_hz)
{
    if (members == 0)
        throw std::invalid_argument("simulated_acf_per_cluster: need at least one member");

    const ClusterTrack &track = traj.clusters.at(cluster_index);
    const std::size_t n_lags = traj.lag_s.size();
    const std::size_t n_rays = track.n_rays;

    std::vector<cdouble> acc(n_lags, cdouble{0.0, 0.0});
    std::vector<cdouble> h(n_lags);
    std::vector<double> phases(4 * n_rays);

    for (std::size_t member = 0; member < members; ++member)
    {
        RandomStream rng(derive_seed(seed, member));
        for (double &phi : phases)
            phi = rng.uniform(0.0, 2.0 * GBSM_PI);

        bool alive = true;
        for (std::size_t k = 0; k < n_lags; ++k)
        {
            if (k > 0 && rng.uniform() > traj.step_survival)
                alive = false;
            if (!alive)
            {
                h[k] = cdouble{0.0, 0.0};
                continue;
            }
            cdouble sum{0.0, 0.0};
            for (std::size_t m = 0; m < n_rays; ++m)
            {
                const RaySample &s = track.rays[k * n_rays + m];
                const cdouble mix =
                    s.a * cdouble{std::cos(phases[4 * m]), std::sin(phases[4 * m])} +
                    s.b * cdouble{std::cos(phases[4 * m + 1]), std::sin(phases[4 * m + 1])} +
                    s.c * cdouble{std::cos(phases[4 * m + 2]), std::sin(phases[4 * m + 2])} +
                    s.d * cdouble{std::cos(phases[4 * m + 3]), std::sin(phases[4 * m + 3])};
                sum += mix * s.sqrt_power * cdouble{std::cos(s.theta), std::sin(s.theta)};
            }
            const double delay_phase = -2.0 * GBSM_PI * freq_offset_hz * track.tau[k];
            h[k] = sum * cdouble{std::cos(delay_phase), std::sin(delay_phase)};
        }
        const cdouble h0 = std::conj(h[0]);
        for (std::size_t k = 0; k < n_lags; ++k)
            acc[k] += h0 * h[k];
    }

    for (cdouble &v : acc)
        v /= static_cast<double>(members);
    return acc;
}

ScenarioConfig acf_reference_config()
{
    ScenarioConfig cfg = preset("hst_3d");
    cfg.name = "acf_reference";
    cfg.carrier_frequency_hz = 2.0e9;
    cfg.center_distance_m = 200.0;
    cfg.two_d = false;
    cfg.rician_k = 0.0;
    cfg.cross_polarization = 0.0;
    cfg.tx_array.count = 2;
    cfg.rx_array.count = 2;
    cfg.tx_array.spacing_m = 0.0;
    cfg.rx_array.spacing_m = 0.0;
    cfg.tx_array.velocity = Vec3{0.0, 0.0, 0.0};
    cfg.rx_array.velocity = Vec3{5.0, 0.0, 0.0};
    cfg.evolution.mean_relative_speed_rx = 0.0;
    cfg.evolution.mean_relative_speed_tx = 0.0;
    cfg.evolution.array_coherence_m = 50.0;
    cfg.evolution.space_coherence_m = 100.0;
    cfg.evolution.virtual_link_coherence_s = 7.0;
    cfg.evolution.ray_count_mean = 81.0;
    cfg.evolution.ray_count_std = 0.0;
    cfg.evolution.initial_cluster_count = 2;
    cfg.duration_s = 0.12;
    cfg.time_step_s = 0.001;
    return cfg;
}

AcfStudyResult acf_study(const ScenarioConfig &cfg, const AcfStudyOptions &opts)
{
    const Trajectory traj =
        record_trajectory(cfg, opts.seed, opts.n_lags, opts.rx_index, opts.tx_index);
    if (traj.clusters.empty())
        throw std::runtime_error("acf_study: realization has no clusters");

    AcfStudyResult result;
    result.lag_s = traj.lag_s;

    const std::vector<cdouble> reference =
        analytical_acf_per_cluster(traj, 0, opts.freq_offset_hz);
    result.normalizer = std::abs(reference[0]);
    if (result.normalizer <= 0.0)
        throw std::runtime_error(
            "acf_study: reference cluster not observable by the selected antenna pair");

    for (std::size_t ci = 0; ci < traj.clusters.size(); ++ci)
    {
        result.cluster_ids.push_back(traj.clusters[ci].id);

        const std::vector<cdouble> ana =
            ci == 0 ? reference : analytical_acf_per_cluster(traj, ci, opts.freq_offset_hz);
        const std::vector<cdouble> sim = simulated_acf_per_cluster(
            traj, ci, opts.members, derive_seed(opts.seed, 0xACF0 + ci), opts.freq_offset_hz);

        std::vector<double> ana_mag(ana.size());
        std::vector<double> sim_mag(sim.size());
        for (std::size_t k = 0; k < ana.size(); ++k)
        {
            ana_mag[k] = std::abs(ana[k]) / result.normalizer;
            sim_mag[k] = std::abs(sim[k]) / result.normalizer;
        }
        result.analytical.push_back(std::move(ana_mag));
        result.simulated.push_back(std::move(sim_mag));
    }
    return result;
}

// --- ensemble statistic pipelines --------------------------------------------

CurveData stationary_interval_ccdf(const ScenarioConfig &cfg,
                                   const std::vector<uint64_t> &seeds,
                                   const StationaryIntervalOptions &opts)
{
    if (seeds.empty())
        throw std::invalid_argument("stationary_interval_ccdf: no seeds");
    if (opts.start_stride == 0)
        throw std::invalid_argument("stationary_interval_ccdf: start stride must be positive");

    struct Slot
    {
        std::vector<double> intervals;
        std::size_t censored = 0;
    };
    std::vector<Slot> slots(seeds.size());

    parallel_for_items(seeds.size(), opts.workers, [&](std::size_t i) {
        std::vector<Pdp> pdps;
        run_realization(cfg, seeds[i], SnapshotOptions{true, {}},
                        [&](const CirSnapshot &snap) { pdps.push_back(pdp(snap)); });

        Slot &slot = slots[i];
        const double window_end = pdps.back().time;
        for (std::size_t start = 0; start < pdps.size(); start += opts.start_stride)
        {
            if (window_end - pdps[start].time < opts.min_window_s)
                break;
            const StationaryInterval si =
                stationary_interval(pdps, start, opts.threshold, opts.bin_s);
            slot.intervals.push_back(si.interval_s);
            if (si.censored)
                ++slot.censored;
        }
    });

    std::vector<double> pooled;
    std::size_t censored = 0;
    for (const Slot &slot : slots)
    {
        pooled.insert(pooled.end(), slot.intervals.begin(), slot.intervals.end());
        censored += slot.censored;
    }
    if (pooled.empty())
        throw std::runtime_error("stationary_interval_ccdf: window too short for any start");

    CurveData curve = empirical_ccdf(std::move(pooled));
    curve.censored_fraction = static_cast<double>(censored) / static_cast<double>(curve.x.size());
    return curve;
}

CurveData coherence_bandwidth_cdf(const ScenarioConfig &cfg, const std::vector<uint64_t> &seeds,
                                  const CoherenceBandwidthOptions &opts)
{
    if (seeds.empty())
        throw std::invalid_argument("coherence_bandwidth_cdf: no seeds");
    if (opts.max_lag_steps + 1 > opts.n_freq)
        throw std::invalid_argument("coherence_bandwidth_cdf: lag range exceeds the grid");
    if (opts.time_stride == 0)
        throw std::invalid_argument("coherence_bandwidth_cdf: time stride must be positive");

    std::vector<double> freqs(opts.n_freq);
    for (std::size_t f = 0; f < opts.n_freq; ++f)
        freqs[f] = static_cast<double>(f) * opts.freq_step_hz;

    const std::vector<std::pair<uint32_t, uint32_t>> pair = {
        {static_cast<uint32_t>(opts.rx_index), static_cast<uint32_t>(opts.tx_index)}};

    struct Slot
    {
        std::vector<double> bandwidths;
        std::size_t censored = 0;
    };
    std::vector<Slot> slots(seeds.size());

    parallel_for_items(seeds.size(), opts.workers, [&](std::size_t i) {
        std::vector<CirSnapshot> sampled;
        std::size_t index = 0;
        run_realization(cfg, seeds[i], SnapshotOptions{false, pair},
                        [&](const CirSnapshot &snap) {
                            if (index % opts.time_stride == 0)
                                sampled.push_back(snap);
                            ++index;
                        });

        const TransferGrid grid = transfer_grid(sampled, freqs, pair);
        Slot &slot = slots[i];
        for (std::size_t t = 0; t < sampled.size(); ++t)
        {
            const std::vector<cdouble> fcf =
                snapshot_fcf(grid, t, opts.rx_index, opts.tx_index, opts.max_lag_steps);
            const CoherenceBandwidth bc =
                coherence_bandwidth_90(fcf, opts.freq_step_hz, opts.threshold);
            slot.bandwidths.push_back(bc.bandwidth_hz);
            if (bc.censored)
                ++slot.censored;
        }
    });

    std::vector<double> pooled;
    std::size_t censored = 0;
    for (const Slot &slot : slots)
    {
        pooled.insert(pooled.end(), slot.bandwidths.begin(), slot.bandwidths.end());
        censored += slot.censored;
    }

    CurveData curve = empirical_cdf(std::move(pooled));
    curve.censored_fraction = static_cast<double>(censored) / static_cast<double>(curve.x.size());
    return curve;
}

CurveData rms_delay_spread_ccdf(const ScenarioConfig &cfg, const std::vector<uint64_t> &seeds,
                                const DelaySpreadOptions &opts)
{
    if (seeds.empty())
        throw std::invalid_argument("rms_delay_spread_ccdf: no seeds");
    if (opts.time_stride == 0)
        throw std::invalid_argument("rms_delay_spread_ccdf: time stride must be positive");

    std::vector<std::vector<double>> slots(seeds.size());
    parallel_for_items(seeds.size(), opts.workers, [&](std::size_t i) {
        std::size_t index = 0;
        run_realization(cfg, seeds[i], SnapshotOptions{true, {}}, [&](const CirSnapshot &snap) {
            if (index % opts.time_stride == 0)
            {
                // Snapshots caught mid-transition with every ray faded out
                // carry no delay spread and are skipped.
                const Pdp profile = pdp(snap);
                if (profile.total_power() > 0.0)
                    slots[i].push_back(rms_delay_spread(profile));
            }
            ++index;
        });
    });

    std::vector<double> spreads;
    for (const std::vector<double> &slot : slots)
        spreads.insert(spreads.end(), slot.begin(), slot.end());
    return empirical_ccdf(std::move(spreads));
}

SpaceCcfCurve space_ccf_vs_separation(const ScenarioConfig &cfg,
                                      const std::vector<uint64_t> &seeds,
                                      const SpaceCcfOptions &opts)
{
    if (seeds.empty())
        throw std::invalid_argument("space_ccf_vs_separation: no seeds");
    if (cfg.rx_array.count <= opts.max_separation)
        throw std::invalid_argument(
            "space_ccf_vs_separation: separation range exceeds the receive array");
    if (cfg.tx_array.count <= opts.tx_index)
        throw std::invalid_argument("space_ccf_vs_separation: transmit index outside the array");

    const std::size_t n_sep = opts.max_separation + 1;
    std::vector<std::pair<uint32_t, uint32_t>> pairs;
    pairs.reserve(n_sep);
    for (std::size_t d = 0; d < n_sep; ++d)
        pairs.emplace_back(static_cast<uint32_t>(d), static_cast<uint32_t>(opts.tx_index));

    struct Slot
    {
        std::vector<cdouble> h; // per separation
    };
    std::vector<Slot> slots(seeds.size());

    parallel_for_items(seeds.size(), opts.workers, [&](std::size_t i) {
        const ChannelState state = init_state(cfg, seeds[i]);
        const CirSnapshot snap = snapshot(state, SnapshotOptions{false, pairs});
        Slot &slot = slots[i];
        slot.h.resize(n_sep, cdouble{0.0, 0.0});
        for (std::size_t d = 0; d < n_sep; ++d)
        {
            cdouble sum{0.0, 0.0};
            for (const Tap &tap : snap.pair(d, opts.tx_index))
                sum += tap.gain;
            slot.h[d] = sum;
        }
    });

    const std::size_t n_batches = std::max<std::size_t>(1, std::min(opts.batches, seeds.size()));
    std::vector<std::vector<cdouble>> batch_num(n_batches, std::vector<cdouble>(n_sep));
    std::vector<std::vector<double>> batch_den0(n_batches, std::vector<double>(n_sep, 0.0));
    std::vector<std::vector<double>> batch_dend(n_batches, std::vector<double>(n_sep, 0.0));

    for (std::size_t i = 0; i < slots.size(); ++i)
    {
        const std::size_t b = i * n_batches / slots.size();
        const std::vector<cdouble> &h = slots[i].h;
        for (std::size_t d = 0; d < n_sep; ++d)
        {
            batch_num[b][d] += std::conj(h[0]) * h[d];
            batch_den0[b][d] += std::norm(h[0]);
            batch_dend[b][d] += std::norm(h[d]);
        }
    }

    SpaceCcfCurve curve;
    curve.separation.resize(n_sep);
    curve.correlation.resize(n_sep);
    curve.std_error.resize(n_sep);

    for (std::size_t d = 0; d < n_sep; ++d)
    {
        curve.separation[d] = static_cast<double>(d);

        cdouble num{0.0, 0.0};
        double den0 = 0.0;
        double dend = 0.0;
        std::vector<double> batch_rho;
        batch_rho.reserve(n_batches);
        for (std::size_t b = 0; b < n_batches; ++b)
        {
            num += batch_num[b][d];
            den0 += batch_den0[b][d];
            dend += batch_dend[b][d];
            const double denom = std::sqrt(batch_den0[b][d] * batch_dend[b][d]);
            if (denom > 0.0)
                batch_rho.push_back(std::abs(batch_num[b][d]) / denom);
        }

        const double denom = std::sqrt(den0 * dend);
        curve.correlation[d] = denom > 0.0 ? std::abs(num) / denom : 0.0;

        double se = 0.0;
        if (batch_rho.size() > 1)
        {
            double mean = 0.0;
            for (double r : batch_rho)
                mean += r;
            mean /= static_cast<double>(batch_rho.size());
            double var = 0.0;
            for (double r : batch_rho)
                var += (r - mean) * (r - mean);
            var /= static_cast<double>(batch_rho.size() - 1);
            se = std::sqrt(var / static_cast<double>(batch_rho.size()));
        }
        curve.std_error[d] = se;
    }
    return curve;
}

// --- angular power spectrum ---------------------------------------------------

ApsGrid aps_study(const ScenarioConfig &cfg, const ApsOptions &opts)
{
    if (opts.segment < opts.subarray)
        throw std::invalid_argument("aps_study: segment shorter than the subarray");
    if (cfg.rx_array.count < opts.segment)
        throw std::invalid_argument("aps_study: receive array shorter than one segment");
    if (opts.stride == 0)
        throw std::invalid_argument("aps_study: stride must be positive");
    if (opts.members == 0)
        throw std::invalid_argument("aps_study: need at least one covariance member");
    if (opts.n_angles < 2)
        throw std::invalid_argument("aps_study: angle grid too small");

    const ChannelState state = init_state(cfg, opts.seed);
    if (opts.tx_index >= state.tx.size())
        throw std::out_of_range("aps_study: transmit index outside the array");

    const CirSnapshot snap = snapshot(state, SnapshotOptions{true, {}});
    const std::size_t n_elements = state.rx.size();
    const double wavelength = cfg.wavelength();

    // Per-ray spatial signatures: carrier phase of the exact element to
    // last-bounce distance, masked by the per-element visibility sets.
    struct Signature
    {
        double amplitude = 0.0;
        std::vector<cdouble> steer; // per element, zero when not observable
    };
    std::vector<Signature> signatures;

    std::unordered_map<uint64_t, const Cluster *> by_id;
    for (const Cluster &c : state.clusters)
        by_id[c.id] = &c;

    for (const RayPower &rp : snap.ray_powers)
    {
        const Cluster &c = *by_id.at(rp.cluster_id);
        if (c.tx_visible[opts.tx_index] == 0 || rp.power <= 0.0)
            continue;

        const ClusterVectors cv = cluster_vectors(state, c, 0.0);
        const Vec3 bounce = ray_rx_bounce(state, cv, c.rays[rp.ray_index], 0.0);

        Signature sig;
        sig.amplitude = std::sqrt(rp.power);
        sig.steer.resize(n_elements, cdouble{0.0, 0.0});
        for (std::size_t e = 0; e < n_elements; ++e)
        {
            if (c.rx_visible[e] == 0)
                continue;
            const double dist = (bounce - state.rx.element_position(e, 0.0)).norm();
            const double phase = -2.0 * GBSM_PI * dist / wavelength;
            sig.steer[e] = cdouble{std::cos(phase), std::sin(phase)};
        }
        signatures.push_back(std::move(sig));
    }

    // Random-phase members decorrelate rays so the sample covariance carries
    // the geometry.
    RandomStream rng(derive_seed(opts.seed, 0xA95));
    std::vector<std::vector<cdouble>> samples(opts.members,
                                              std::vector<cdouble>(n_elements, cdouble{0.0, 0.0}));
    for (std::size_t member = 0; member < opts.members; ++member)
    {
        for (const Signature &sig : signatures)
        {
            const double phi = rng.uniform(0.0, 2.0 * GBSM_PI);
            const cdouble rotor = sig.amplitude * cdouble{std::cos(phi), std::sin(phi)};
            for (std::size_t e = 0; e < n_elements; ++e)
                samples[member][e] += rotor * sig.steer[e];
        }
    }

    ApsGrid grid;
    grid.angle_rad.resize(opts.n_angles);
    for (std::size_t g = 0; g < opts.n_angles; ++g)
        grid.angle_rad[g] = -0.5 * GBSM_PI +
                            GBSM_PI * static_cast<double>(g) /
                                static_cast<double>(opts.n_angles - 1);

    for (std::size_t start = 0; start + opts.segment <= n_elements; start += opts.stride)
    {
        std::vector<std::vector<cdouble>> segment(opts.members,
                                                  std::vector<cdouble>(opts.segment));
        for (std::size_t member = 0; member < opts.members; ++member)
            for (std::size_t e = 0; e < opts.segment; ++e)
                segment[member][e] = samples[member][start + e];

        const AngularSpectrum spec =
            smooth_music_aps(segment, opts.subarray, opts.signal_dim, grid.angle_rad);

        grid.window_center.push_back(static_cast<double>(start) +
                                     0.5 * static_cast<double>(opts.segment - 1));
        grid.power.insert(grid.power.end(), spec.power.begin(), spec.power.end());
    }
    return grid;
}

} // namespace gbsm
