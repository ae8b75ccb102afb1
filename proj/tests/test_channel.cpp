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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <set>
#include <stdexcept>

#include "gbsm/channel.hpp"
#include "gbsm/simulator.hpp"

using namespace gbsm;

namespace
{

// Small static scenario: 2x2 omni arrays 50 m apart, three initial clusters
// with four rays each, no births or deaths (zero mean relative speeds).
ScenarioConfig small_config()
{
    ScenarioConfig cfg;
    cfg.name = "channel_test";
    cfg.carrier_frequency_hz = 2.0e9;
    cfg.center_distance_m = 50.0;
    cfg.tx_array.count = 2;
    cfg.tx_array.spacing_m = 0.1;
    cfg.rx_array.count = 2;
    cfg.rx_array.spacing_m = 0.1;
    cfg.evolution.initial_cluster_count = 3;
    cfg.evolution.ray_count_mean = 4.0;
    cfg.evolution.ray_count_std = 0.0;
    cfg.evolution.ray_delay_mean_s = 5.0e-9;
    cfg.duration_s = 0.01;
    cfg.time_step_s = 1.0e-3;
    return cfg;
}

// One fully specified single-ray cluster under manual control.
Cluster manual_cluster(uint64_t id, const Vec3 &rx_bounce, const Vec3 &tx_bounce,
                       std::size_t n_rx, std::size_t n_tx, double virtual_delay)
{
    Cluster c;
    c.id = id;
    c.birth_time = 0.0;
    c.lifecycle = Lifecycle::Active;
    c.rx_bounce_birth = rx_bounce;
    c.tx_bounce_birth = tx_bounce;
    c.virtual_delay = virtual_delay;

    Ray r;
    r.relative_delay = 0.0;
    r.power = 1.0;
    c.rays.push_back(r);

    c.rx_visible.assign(n_rx, 1);
    c.tx_visible.assign(n_tx, 1);
    c.rx_phase.assign(n_rx, 0.0);
    c.tx_phase.assign(n_tx, 0.0);
    return c;
}

double tap_power_sum(const CirSnapshot &snap)
{
    double sum = 0.0;
    for (const RayPower &rp : snap.ray_powers)
        sum += rp.power;
    return sum;
}

SnapshotOptions pdp_only_opts()
{
    SnapshotOptions opts;
    opts.pdp_only = true;
    return opts;
}

} // namespace

TEST_CASE("los distance spans tx element to rx element")
{
    ChannelState s = init_state(small_config(), 5);

    for (std::size_t q = 0; q < 2; ++q)
        for (std::size_t p = 0; p < 2; ++p)
        {
            const Vec3 d = los_distance(s, q, p);
            const Vec3 expect = s.rx.element_position(q, 0.0) - s.tx.element_position(p, 0.0);
            REQUIRE(d.x == expect.x);
            REQUIRE(d.y == expect.y);
            REQUIRE(d.z == expect.z);
            REQUIRE(d.x == Catch::Approx(50.0).margin(1e-12));
        }
}

TEST_CASE("doppler frequency projects relative motion onto the leg")
{
    const double lam = 0.149896229;

    SECTION("approaching array")
    {
        const double f = doppler_frequency({10.0, 0.0, 0.0}, {5.0, 0.0, 0.0}, {}, lam);
        REQUIRE(f == Catch::Approx(33.35640951981521).margin(1e-9));
    }
    SECTION("leg length cancels")
    {
        const double f = doppler_frequency({20.0, 0.0, 0.0}, {5.0, 0.0, 0.0}, {}, lam);
        REQUIRE(f == Catch::Approx(33.35640951981521).margin(1e-9));
    }
    SECTION("perpendicular motion")
    {
        const double f = doppler_frequency({0.0, 7.0, 0.0}, {5.0, 0.0, 0.0}, {}, lam);
        REQUIRE(f == Catch::Approx(0.0).margin(1e-12));
    }
    SECTION("co-moving bounce cancels")
    {
        const double f =
            doppler_frequency({10.0, 0.0, 0.0}, {5.0, 0.0, 0.0}, {5.0, 0.0, 0.0}, lam);
        REQUIRE(f == Catch::Approx(0.0).margin(1e-12));
    }
    SECTION("opposing bounce adds")
    {
        const double f =
            doppler_frequency({10.0, 0.0, 0.0}, {5.0, 0.0, 0.0}, {-3.0, 0.0, 0.0}, lam);
        REQUIRE(f == Catch::Approx(53.370255231704334).margin(1e-9));
    }
    SECTION("receding array flips the sign")
    {
        const double f = doppler_frequency({-10.0, 0.0, 0.0}, {5.0, 0.0, 0.0}, {}, lam);
        REQUIRE(f == Catch::Approx(-33.35640951981521).margin(1e-9));
    }
    SECTION("zero-length leg throws")
    {
        REQUIRE_THROWS_AS(doppler_frequency({}, {5.0, 0.0, 0.0}, {}, lam),
                          std::invalid_argument);
    }
}

TEST_CASE("los doppler projects the relative array velocity")
{
    ScenarioConfig cfg = small_config();
    cfg.rx_array.velocity = {10.0, 0.0, 0.0};
    ChannelState s = init_state(cfg, 5);

    // Same element index on both sides: the separation is purely along x, so
    // the projection picks up the full closing speed.
    REQUIRE(doppler_los(s, 0, 0) == Catch::Approx(66.71281903963042).margin(1e-6));
    REQUIRE(doppler_los(s, 1, 1) == Catch::Approx(66.71281903963042).margin(1e-6));
}

TEST_CASE("nlos delay adds two hop distances and the virtual delay")
{
    ChannelState s = init_state(small_config(), 5);
    s.clusters.clear();

    Cluster c = manual_cluster(1, s.rx.center(0.0) + Vec3{0.0, 10.0, 0.0},
                               Vec3{0.0, 0.0, 20.0}, 2, 2, 1.0e-8);

    SECTION("static bounce")
    {
        REQUIRE(nlos_delay(s, c) == Catch::Approx(1.100692285594456e-07).margin(1e-20));
    }
    SECTION("bounce drift changes the hop length")
    {
        c.rx_bounce_velocity = {0.0, 1.0, 0.0};
        s.time = 2.0;
        REQUIRE(nlos_delay(s, c) == Catch::Approx(1.1674051046340865e-07).margin(1e-20));
    }
}

TEST_CASE("cluster vectors recover distances and angles")
{
    ChannelState s = init_state(small_config(), 5);

    Cluster c = manual_cluster(1, s.rx.center(0.0) + Vec3{0.0, 10.0, 0.0},
                               Vec3{0.0, 3.0, 4.0}, 2, 2, 0.0);
    const ClusterVectors cv = cluster_vectors(s, c, 0.0);

    REQUIRE(cv.rx_distance == Catch::Approx(10.0).margin(1e-12));
    REQUIRE(cv.aoa_azimuth == Catch::Approx(GBSM_PI / 2.0).margin(1e-12));
    REQUIRE(cv.aoa_elevation == Catch::Approx(0.0).margin(1e-12));

    REQUIRE(cv.tx_distance == Catch::Approx(5.0).margin(1e-12));
    REQUIRE(cv.aod_azimuth == Catch::Approx(GBSM_PI / 2.0).margin(1e-12));
    REQUIRE(cv.aod_elevation == Catch::Approx(0.9272952180016122).margin(1e-12));
}

TEST_CASE("ray bounce positions apply angle offsets at the cluster range")
{
    ChannelState s = init_state(small_config(), 5);

    Cluster c = manual_cluster(1, s.rx.center(0.0) + Vec3{10.0, 0.0, 0.0},
                               Vec3{0.0, 5.0, 0.0}, 2, 2, 0.0);
    const ClusterVectors cv = cluster_vectors(s, c, 0.0);

    SECTION("zero offsets reproduce the cluster bounce")
    {
        const Vec3 b = ray_rx_bounce(s, cv, c.rays[0], 0.0);
        REQUIRE(b.x == Catch::Approx(cv.rx_bounce.x).margin(1e-12));
        REQUIRE(b.y == Catch::Approx(cv.rx_bounce.y).margin(1e-12));
        REQUIRE(b.z == Catch::Approx(cv.rx_bounce.z).margin(1e-12));

        const Vec3 bt = ray_tx_bounce(s, cv, c.rays[0], 0.0);
        REQUIRE(bt.x == Catch::Approx(cv.tx_bounce.x).margin(1e-12));
        REQUIRE(bt.y == Catch::Approx(cv.tx_bounce.y).margin(1e-12));
        REQUIRE(bt.z == Catch::Approx(cv.tx_bounce.z).margin(1e-12));
    }
    SECTION("quarter-turn azimuth offset rotates the bounce around the center")
    {
        Ray r = c.rays[0];
        r.aoa_az_offset = GBSM_PI / 2.0;
        const Vec3 b = ray_rx_bounce(s, cv, r, 0.0);
        const Vec3 expect = s.rx.center(0.0) + Vec3{0.0, 10.0, 0.0};
        REQUIRE(b.x == Catch::Approx(expect.x).margin(1e-12));
        REQUIRE(b.y == Catch::Approx(expect.y).margin(1e-12));
        REQUIRE(b.z == Catch::Approx(expect.z).margin(1e-12));
    }
}

TEST_CASE("snapshot ray powers sum to one outside ramps")
{
    for (uint64_t seed : {1u, 2u, 3u, 9u})
    {
        ChannelState s = init_state(small_config(), seed);
        const CirSnapshot snap = snapshot(s);
        REQUIRE_FALSE(snap.ramping);
        REQUIRE(tap_power_sum(snap) == Catch::Approx(1.0).margin(1e-9));
    }
}

TEST_CASE("snapshot ray powers stay normalized through births and deaths")
{
    ScenarioConfig cfg = small_config();
    cfg.evolution.mean_relative_speed_rx = 10.0;
    cfg.evolution.mean_relative_speed_tx = 10.0;
    cfg.evolution.space_coherence_m = 10.0;
    cfg.evolution.fade_ramp_s = 5.0e-3;
    cfg.evolution.initial_cluster_count = 10;

    ChannelState s = init_state(cfg, 4);
    bool saw_ramping = false;
    for (int step = 0; step < 100; ++step)
    {
        evolve_time_step(s, cfg.time_step_s);
        const CirSnapshot snap = snapshot(s, pdp_only_opts());
        const double sum = tap_power_sum(snap);
        REQUIRE(sum <= 1.0 + 1e-9);
        if (snap.ramping)
            saw_ramping = true;
        else
            REQUIRE(sum == Catch::Approx(1.0).margin(1e-9));
    }
    REQUIRE(saw_ramping);
    REQUIRE_FALSE(s.clusters.empty());
}

TEST_CASE("snapshot in pdp_only mode skips tap assembly")
{
    ChannelState s = init_state(small_config(), 7);
    const CirSnapshot snap = snapshot(s, pdp_only_opts());

    REQUIRE(snap.taps.empty());
    REQUIRE_FALSE(snap.ray_powers.empty());
    REQUIRE_THROWS_AS(snap.pair(0, 0), std::logic_error);
}

TEST_CASE("snapshot restricted to requested pairs")
{
    ChannelState s = init_state(small_config(), 7);

    SnapshotOptions opts;
    opts.pairs = {{1, 0}};
    const CirSnapshot snap = snapshot(s, opts);

    REQUIRE_FALSE(snap.pair(1, 0).empty());
    REQUIRE(snap.pair(0, 0).empty());
    REQUIRE(snap.pair(0, 1).empty());
    REQUIRE_THROWS_AS(snap.pair(2, 0), std::out_of_range);

    SnapshotOptions bad;
    bad.pairs = {{5, 0}};
    REQUIRE_THROWS_AS(snapshot(s, bad), std::out_of_range);
}

TEST_CASE("tap gains scale with the square root of the ray weight")
{
    ChannelState s = init_state(small_config(), 11);
    s.clusters.clear();

    Cluster c = manual_cluster(1, s.rx.center(0.0) + Vec3{3.0, 12.0, 2.0},
                               Vec3{-4.0, 6.0, 1.0}, 2, 2, 1.0e-8);
    c.rays[0].phase_vv = 0.4;
    c.rays[0].phase_hh = 1.9;
    const ClusterVectors cv = cluster_vectors(s, c, 0.0);

    const cdouble g1 = nlos_gain(s, c, cv, 0, 0, 0, 0.01);
    const cdouble g4 = nlos_gain(s, c, cv, 0, 0, 0, 0.04);
    REQUIRE(std::abs(g1) > 0.0);
    REQUIRE(std::abs(g4) / std::abs(g1) == Catch::Approx(2.0).margin(1e-12));

    SECTION("invisible cluster contributes exactly zero")
    {
        c.rx_visible[0] = 0;
        const cdouble g = nlos_gain(s, c, cv, 0, 0, 0, 0.01);
        REQUIRE(g.real() == 0.0);
        REQUIRE(g.imag() == 0.0);

        c.rx_visible[0] = 1;
        c.tx_visible[1] = 0;
        const cdouble gt = nlos_gain(s, c, cv, 0, 0, 1, 0.01);
        REQUIRE(gt.real() == 0.0);
        REQUIRE(gt.imag() == 0.0);
    }
}

TEST_CASE("rician factor injects a line of sight tap")
{
    ScenarioConfig cfg = small_config();
    cfg.rician_k = 4.0;
    ChannelState s = init_state(cfg, 13);

    const CirSnapshot snap = snapshot(s);
    const double w_los = 0.8944271909999159; // sqrt(K / (K + 1)), K = 4

    for (std::size_t q = 0; q < 2; ++q)
        for (std::size_t p = 0; p < 2; ++p)
        {
            const std::vector<Tap> &taps = snap.pair(q, p);
            REQUIRE_FALSE(taps.empty());
            REQUIRE(taps.front().cluster_id == LOS_TAP_ID);
            REQUIRE(taps.front().delay == Catch::Approx(1.6678204759907602e-07).margin(1e-20));

            const cdouble expect = w_los * los_gain(s, q, p);
            REQUIRE(taps.front().gain.real() == Catch::Approx(expect.real()).margin(1e-15));
            REQUIRE(taps.front().gain.imag() == Catch::Approx(expect.imag()).margin(1e-15));
        }

    // The delay table covers scattered rays only; it stays normalized.
    REQUIRE(tap_power_sum(snap) == Catch::Approx(1.0).margin(1e-9));
    for (const RayPower &rp : snap.ray_powers)
        REQUIRE(rp.cluster_id != LOS_TAP_ID);

    SECTION("no line of sight tap without a rician factor")
    {
        ChannelState nlos = init_state(small_config(), 13);
        const CirSnapshot snap2 = snapshot(nlos);
        for (const Tap &tap : snap2.pair(0, 0))
            REQUIRE(tap.cluster_id != LOS_TAP_ID);
    }
}

TEST_CASE("visibility gating removes invisible clusters from the tap list")
{
    ChannelState s = init_state(small_config(), 17);
    s.clusters.clear();

    Cluster a = manual_cluster(10, s.rx.center(0.0) + Vec3{0.0, 15.0, 0.0},
                               Vec3{0.0, -8.0, 3.0}, 2, 2, 1.0e-8);
    Cluster b = manual_cluster(20, s.rx.center(0.0) + Vec3{5.0, -9.0, 1.0},
                               Vec3{2.0, 7.0, -1.0}, 2, 2, 2.0e-8);
    b.rx_visible[1] = 0;
    s.clusters = {a, b};

    const CirSnapshot snap = snapshot(s);

    std::set<uint32_t> ids_q0;
    for (const Tap &tap : snap.pair(0, 0))
        ids_q0.insert(tap.cluster_id);
    REQUIRE(ids_q0 == std::set<uint32_t>{10, 20});

    std::set<uint32_t> ids_q1;
    for (const Tap &tap : snap.pair(1, 0))
        ids_q1.insert(tap.cluster_id);
    REQUIRE(ids_q1 == std::set<uint32_t>{10});
    REQUIRE(snap.pair(1, 0).size() == 1);

    // The delay table still lists both clusters: power is a global quantity.
    std::set<uint32_t> pdp_ids;
    for (const RayPower &rp : snap.ray_powers)
        pdp_ids.insert(rp.cluster_id);
    REQUIRE(pdp_ids == std::set<uint32_t>{10, 20});
}

TEST_CASE("structure and phase streams are independent")
{
    const ScenarioConfig cfg = small_config();
    ChannelState a = init_state(cfg, 7, 100);
    ChannelState b = init_state(cfg, 7, 200);
    ChannelState c = init_state(cfg, 8, 100);

    SECTION("same structure seed pins the geometry")
    {
        REQUIRE(a.clusters.size() == b.clusters.size());
        for (std::size_t i = 0; i < a.clusters.size(); ++i)
        {
            REQUIRE(a.clusters[i].virtual_delay == b.clusters[i].virtual_delay);
            REQUIRE(a.clusters[i].rx_bounce_birth.x == b.clusters[i].rx_bounce_birth.x);
            REQUIRE(a.clusters[i].tx_bounce_birth.z == b.clusters[i].tx_bounce_birth.z);
            REQUIRE(a.clusters[i].rays.size() == b.clusters[i].rays.size());
            for (std::size_t m = 0; m < a.clusters[i].rays.size(); ++m)
            {
                REQUIRE(a.clusters[i].rays[m].relative_delay ==
                        b.clusters[i].rays[m].relative_delay);
                REQUIRE(a.clusters[i].rays[m].power == b.clusters[i].rays[m].power);
            }
            REQUIRE(a.clusters[i].rx_visible == b.clusters[i].rx_visible);
        }

        const CirSnapshot sa = snapshot(a);
        const CirSnapshot sb = snapshot(b);
        for (std::size_t i = 0; i < sa.ray_powers.size(); ++i)
        {
            REQUIRE(sa.ray_powers[i].power == sb.ray_powers[i].power);
            REQUIRE(sa.ray_powers[i].delay == sb.ray_powers[i].delay);
        }
        REQUIRE(sa.pair(0, 0).front().gain != sb.pair(0, 0).front().gain);
    }
    SECTION("different structure seed moves the clusters")
    {
        bool any_differs = a.clusters.size() != c.clusters.size();
        for (std::size_t i = 0; !any_differs && i < a.clusters.size(); ++i)
            any_differs = a.clusters[i].virtual_delay != c.clusters[i].virtual_delay;
        REQUIRE(any_differs);
    }
}

TEST_CASE("phase reseeding preserves the power delay profile under evolution")
{
    ScenarioConfig cfg = small_config();
    cfg.evolution.mean_relative_speed_rx = 10.0;
    cfg.evolution.mean_relative_speed_tx = 10.0;
    cfg.evolution.space_coherence_m = 10.0;

    ChannelState a = init_state(cfg, 21, 500);
    ChannelState b = init_state(cfg, 21, 501);

    for (int step = 0; step < 5; ++step)
    {
        evolve_time_step(a, cfg.time_step_s);
        evolve_time_step(b, cfg.time_step_s);
    }

    REQUIRE(a.clusters.size() == b.clusters.size());
    const CirSnapshot sa = snapshot(a, pdp_only_opts());
    const CirSnapshot sb = snapshot(b, pdp_only_opts());
    REQUIRE(sa.ray_powers.size() == sb.ray_powers.size());
    for (std::size_t i = 0; i < sa.ray_powers.size(); ++i)
    {
        REQUIRE(sa.ray_powers[i].delay == sb.ray_powers[i].delay);
        REQUIRE(sa.ray_powers[i].power == sb.ray_powers[i].power);
        REQUIRE(sa.ray_powers[i].cluster_id == sb.ray_powers[i].cluster_id);
    }
}

TEST_CASE("doppler phase advance matches the projected frequencies")
{
    ScenarioConfig cfg = small_config();
    cfg.tx_array.count = 1;
    cfg.rx_array.count = 1;
    cfg.rx_array.velocity = {8.0, 0.0, 0.0};
    cfg.tx_array.velocity = {0.0, 3.0, 0.0};
    cfg.evolution.initial_cluster_count = 0;

    ChannelState s = init_state(cfg, 23);
    Cluster c = manual_cluster(1, s.rx.center(0.0) + Vec3{4.0, 18.0, 2.0},
                               Vec3{-6.0, 9.0, 1.0}, 1, 1, 5.0e-8);
    // Equal co-polar phases collapse the polarization sum onto one phasor, so
    // the tap argument advances purely by the accumulated Doppler phases.
    c.rays[0].phase_vv = 0.3;
    c.rays[0].phase_hh = 0.3;
    s.clusters.push_back(c);

    const double lam = cfg.wavelength();
    const double f_rx = doppler_frequency(c.rx_bounce_birth - s.rx.element_position(0, 0.0),
                                          cfg.rx_array.velocity, {}, lam);
    const double f_tx = doppler_frequency(c.tx_bounce_birth - s.tx.element_position(0, 0.0),
                                          cfg.tx_array.velocity, {}, lam);
    REQUIRE(std::abs(f_rx) > 1.0);

    const cdouble g0 = snapshot(s).pair(0, 0).front().gain;
    const double dt = 1.0e-3;
    evolve_time_step(s, dt);
    const cdouble g1 = snapshot(s).pair(0, 0).front().gain;

    const double advance = std::arg(g1 * std::conj(g0));
    const double predicted = wrap_angle(2.0 * GBSM_PI * (f_rx + f_tx) * dt);
    REQUIRE(advance == Catch::Approx(predicted).margin(1e-9));
}

TEST_CASE("static world leaves gains unchanged")
{
    ScenarioConfig cfg = small_config();
    cfg.evolution.virtual_link_coherence_s = 1.0e12;

    ChannelState s = init_state(cfg, 29);
    const CirSnapshot before = snapshot(s);
    for (int step = 0; step < 5; ++step)
        evolve_time_step(s, cfg.time_step_s);
    const CirSnapshot after = snapshot(s);

    REQUIRE(before.ray_powers.size() == after.ray_powers.size());
    for (std::size_t q = 0; q < 2; ++q)
        for (std::size_t p = 0; p < 2; ++p)
        {
            const std::vector<Tap> &ta = before.pair(q, p);
            const std::vector<Tap> &tb = after.pair(q, p);
            REQUIRE(ta.size() == tb.size());
            for (std::size_t i = 0; i < ta.size(); ++i)
            {
                REQUIRE(tb[i].gain.real() == Catch::Approx(ta[i].gain.real()).margin(1e-9));
                REQUIRE(tb[i].gain.imag() == Catch::Approx(ta[i].gain.imag()).margin(1e-9));
                REQUIRE(tb[i].delay == Catch::Approx(ta[i].delay).margin(1e-15));
            }
        }
}

TEST_CASE("visibility sets intersect per link")
{
    ChannelState s = init_state(small_config(), 31);
    s.clusters.clear();

    Cluster a = manual_cluster(10, s.rx.center(0.0) + Vec3{0.0, 10.0, 0.0},
                               Vec3{0.0, -5.0, 0.0}, 2, 2, 0.0);
    a.rx_visible = {1, 0};
    a.tx_visible = {1, 1};
    Cluster b = manual_cluster(20, s.rx.center(0.0) + Vec3{0.0, -10.0, 0.0},
                               Vec3{0.0, 5.0, 0.0}, 2, 2, 0.0);
    b.rx_visible = {1, 1};
    b.tx_visible = {0, 1};
    s.clusters = {a, b};

    const VisibilitySet v = visibility_set(s);
    REQUIRE(v.rx_sets[0] == std::vector<uint64_t>{10, 20});
    REQUIRE(v.rx_sets[1] == std::vector<uint64_t>{20});
    REQUIRE(v.tx_sets[0] == std::vector<uint64_t>{10});
    REQUIRE(v.tx_sets[1] == std::vector<uint64_t>{10, 20});

    REQUIRE(v.pair_set(0, 0) == std::vector<uint64_t>{10});
    REQUIRE(v.pair_set(0, 1) == std::vector<uint64_t>{10, 20});
    REQUIRE(v.pair_set(1, 0).empty());
    REQUIRE(v.pair_set(1, 1) == std::vector<uint64_t>{20});
    REQUIRE(v.observable_count() == 2);
}

TEST_CASE("snapshot count rounds to the nearest step")
{
    REQUIRE(snapshot_count(0.1, 0.001) == 100);
    REQUIRE(snapshot_count(1.0, 0.3) == 3);
    REQUIRE(snapshot_count(0.0014, 0.001) == 1);
    REQUIRE_THROWS_AS(snapshot_count(0.0, 0.001), ConfigError);
    REQUIRE_THROWS_AS(snapshot_count(0.1, 0.0), ConfigError);
    REQUIRE_THROWS_AS(snapshot_count(0.0004, 0.001), ConfigError);
}

TEST_CASE("run realization emits the configured snapshot sequence")
{
    const ScenarioConfig cfg = small_config();
    const std::vector<CirSnapshot> snaps = run_realization(cfg, 37);

    REQUIRE(snaps.size() == 10);
    for (std::size_t i = 0; i < snaps.size(); ++i)
        REQUIRE(snaps[i].time == Catch::Approx(1.0e-3 * static_cast<double>(i)).margin(1e-12));

    SECTION("sink form sees the same sequence")
    {
        std::size_t count = 0;
        run_realization(cfg, 37, {}, [&](const CirSnapshot &snap) {
            REQUIRE(snap.time == snaps[count].time);
            ++count;
        });
        REQUIRE(count == snaps.size());
    }
    SECTION("repeat runs are bitwise identical")
    {
        const std::vector<CirSnapshot> again = run_realization(cfg, 37);
        const Tap &x = snaps.back().pair(1, 1).back();
        const Tap &y = again.back().pair(1, 1).back();
        REQUIRE(x.gain.real() == y.gain.real());
        REQUIRE(x.gain.imag() == y.gain.imag());
        REQUIRE(x.delay == y.delay);
    }
}
