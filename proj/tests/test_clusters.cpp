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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "gbsm/cluster.hpp"

using namespace gbsm;

TEST_CASE("per-step survival probability")
{
    EvolutionParams p;
    p.mean_relative_speed_rx = 2.0;
    p.mean_relative_speed_tx = 3.0;

    REQUIRE(survival_probability(p, 1e-3) ==
            Catch::Approx(0.99994000179996401).margin(1e-15));
    REQUIRE(survival_probability(p, 0.0) == 1.0);

    p.mean_relative_speed_rx = 0.0;
    p.mean_relative_speed_tx = 0.0;
    REQUIRE(survival_probability(p, 10.0) == 1.0);

    REQUIRE_THROWS_AS(survival_probability(p, -1.0), std::invalid_argument);
}

TEST_CASE("expected new clusters per step")
{
    EvolutionParams p;
    p.mean_relative_speed_rx = 5.0;
    p.mean_relative_speed_tx = 5.0;

    REQUIRE(expected_new_clusters(p, 1e-3) ==
            Catch::Approx(0.0023998560057592044).margin(1e-15));
    REQUIRE(expected_new_clusters(p, 0.0) == 0.0);
}

TEST_CASE("virtual delay draw")
{
    RandomStream rng(1);
    REQUIRE(generate_virtual_delay(2.3, 1e-7, rng) ==
            Catch::Approx(4.6249238811931215e-07).margin(1e-20));

    RandomStream stat(3);
    const int n = 100000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        sum += generate_virtual_delay(2.3, 1e-7, stat);
    REQUIRE(sum / n == Catch::Approx(2.3e-7).epsilon(0.02));

    REQUIRE_THROWS_AS(generate_virtual_delay(1.0, 1e-7, rng), std::invalid_argument);
    REQUIRE_THROWS_AS(generate_virtual_delay(2.3, 0.0, rng), std::invalid_argument);
}

TEST_CASE("cluster power from virtual delay and shadowing")
{
    RandomStream rng(1);
    REQUIRE(generate_cluster_power(200e-9, 2.3, 100e-9, 0.0, rng) ==
            Catch::Approx(0.32289283770834964).margin(1e-15));
    REQUIRE(generate_cluster_power(0.0, 2.3, 100e-9, 0.0, rng) == 1.0);
    REQUIRE(generate_cluster_power(500e-9, 2.3, 100e-9, 3.0, rng) > 0.0);
}

TEST_CASE("wrapped gaussian cluster angles")
{
    AngleParams p;
    p.aoa_azimuth = {4.0, 0.0}; // wraps past pi
    p.aoa_elevation = {0.5, 0.0};
    p.aod_azimuth = {-0.3, 0.0};
    p.aod_elevation = {0.0, 0.0};

    RandomStream rng(5);
    const ClusterAngles a = generate_cluster_angles(p, rng);
    REQUIRE(a.aoa_azimuth == Catch::Approx(-2.2831853071795862).margin(1e-12));
    REQUIRE(a.aoa_elevation == Catch::Approx(0.5).margin(1e-12));
    REQUIRE(a.aod_azimuth == Catch::Approx(-0.3).margin(1e-12));
    REQUIRE(a.aod_elevation == Catch::Approx(0.0).margin(1e-12));

    p.aoa_azimuth = {0.78, 0.2};
    RandomStream stat(7);
    const int n = 50000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i)
    {
        const double az = generate_cluster_angles(p, stat).aoa_azimuth;
        sum += az;
        sq += az * az;
    }
    const double mean = sum / n;
    REQUIRE(mean == Catch::Approx(0.78).margin(0.005));
    REQUIRE(std::sqrt(sq / n - mean * mean) == Catch::Approx(0.2).epsilon(0.03));
}

TEST_CASE("ray set with a fixed count")
{
    EvolutionParams p;
    p.ray_count_mean = 20.0;
    p.ray_count_std = 0.0;
    p.ray_delay_mean_s = 0.0;
    p.shadowing_std_db = 0.0;

    RandomStream rng(9);
    const std::vector<Ray> rays = generate_ray_set(p, rng);
    REQUIRE(rays.size() == 20);
    for (const Ray &r : rays)
    {
        REQUIRE(r.relative_delay == 0.0);
        REQUIRE(r.power == 1.0);
        REQUIRE(r.phase_vv == 0.0); // phases belong to the caller
    }

    p.ray_count_mean = 0.4; // clamps to the minimum of one ray
    REQUIRE(generate_ray_set(p, rng).size() == 1);
}

TEST_CASE("ray set with poisson count and exponential delays")
{
    EvolutionParams p;
    p.ray_count_mean = 15.0;
    p.ray_count_std = 3.87;
    p.ray_delay_mean_s = 3e-9;
    p.shadowing_std_db = 0.0;
    p.delay_scalar = 2.3;

    RandomStream rng(11);
    double count_sum = 0.0, delay_sum = 0.0;
    std::size_t total = 0;
    const int n = 3000;
    for (int i = 0; i < n; ++i)
    {
        const std::vector<Ray> rays = generate_ray_set(p, rng);
        REQUIRE(!rays.empty());
        count_sum += static_cast<double>(rays.size());
        for (const Ray &r : rays)
        {
            REQUIRE(r.relative_delay >= 0.0);
            // with zero shadowing the power is an exact function of the delay
            REQUIRE(r.power ==
                    Catch::Approx(std::exp(-r.relative_delay * 1.3 / 3e-9)).margin(1e-12));
            delay_sum += r.relative_delay;
            ++total;
        }
    }
    REQUIRE(count_sum / n == Catch::Approx(15.0).epsilon(0.02));
    REQUIRE(delay_sum / static_cast<double>(total) == Catch::Approx(3e-9).epsilon(0.03));
}

TEST_CASE("ray angle offsets follow the configured laplace spread")
{
    EvolutionParams p;
    p.ray_count_mean = 50.0;
    p.ray_count_std = 0.0;
    p.ray_offset_std_rad = 0.017;

    RandomStream rng(13);
    double sq = 0.0;
    std::size_t total = 0;
    for (int i = 0; i < 1000; ++i)
        for (const Ray &r : generate_ray_set(p, rng))
        {
            sq += r.aoa_az_offset * r.aoa_az_offset;
            ++total;
        }
    REQUIRE(std::sqrt(sq / static_cast<double>(total)) == Catch::Approx(0.017).epsilon(0.05));
}

TEST_CASE("ray power rescaling")
{
    std::vector<Ray> rays(4);
    rays[0].power = 1.0;
    rays[1].power = 2.0;
    rays[2].power = 3.0;
    rays[3].power = 4.0;

    scale_ray_powers(0.5, rays);
    double sum = 0.0;
    for (const Ray &r : rays)
        sum += r.power;
    REQUIRE(sum == Catch::Approx(0.5).margin(1e-15));
    REQUIRE(rays[3].power == Catch::Approx(0.2).margin(1e-15));

    std::vector<Ray> dead(2);
    REQUIRE_THROWS_AS(scale_ray_powers(1.0, dead), std::invalid_argument);
}

TEST_CASE("antenna visibility ball")
{
    const AntennaArray arr = make_linear_array(64, 0.075, {0, 0, 0}, {0, 1, 0});

    RandomStream rng(17);
    for (int i = 0; i < 200; ++i)
    {
        const std::vector<uint8_t> vis = assign_visibility(arr, 0.0, 4.0, 30.0, rng);
        REQUIRE(vis.size() == 64);

        std::size_t count = 0;
        for (uint8_t v : vis)
            count += v;
        REQUIRE(count >= 1);

        // a ball on a linear array marks a contiguous index range
        std::size_t first = 64, last = 0;
        for (std::size_t k = 0; k < 64; ++k)
            if (vis[k])
            {
                first = std::min(first, k);
                last = std::max(last, k);
            }
        REQUIRE(last - first + 1 == count);
    }

    RandomStream wide(19);
    const std::vector<uint8_t> all = assign_visibility(arr, 0.0, 4.0, 1e9, wide);
    std::size_t count = 0;
    for (uint8_t v : all)
        count += v;
    REQUIRE(count == 64);

    RandomStream tight(21);
    const std::vector<uint8_t> only = assign_visibility(arr, 0.0, 4.0, 1e-12, tight);
    count = 0;
    for (uint8_t v : only)
        count += v;
    REQUIRE(count == 1);
}

TEST_CASE("moving cluster speed calibration")
{
    REQUIRE(moving_cluster_speed(5.0, 0.0, 0.3, false) == 0.0);
    REQUIRE_THROWS_AS(moving_cluster_speed(5.0, 3.0, 0.0, false), std::invalid_argument);

    // static array: mean relative speed equals the bounce speed itself
    REQUIRE(moving_cluster_speed(0.0, 3.0, 0.3, false) ==
            Catch::Approx(10.0).margin(1e-9));

    // infeasible target falls back to target / moving_fraction
    REQUIRE(moving_cluster_speed(10.0, 3.0, 0.3, false) ==
            Catch::Approx(10.0).margin(1e-9));

    // feasible target: P_F * E||v - s u|| + (1 - P_F) * ||v|| == target
    const double a = 5.0, target = 7.0, pf = 0.3;
    const double s = moving_cluster_speed(a, target, pf, false);
    const double hi = a + s, lo = std::fabs(a - s);
    const double mean_rel = (hi * hi * hi - lo * lo * lo) / (6.0 * a * s);
    REQUIRE(pf * mean_rel + (1.0 - pf) * a == Catch::Approx(target).margin(1e-6));
}

TEST_CASE("bounce velocity draw")
{
    RandomStream rng(23);
    int zeros = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i)
    {
        const Vec3 v = draw_bounce_velocity(4.0, 0.3, false, rng);
        if (v.norm() == 0.0)
            ++zeros;
        else
            REQUIRE(v.norm() == Catch::Approx(4.0).margin(1e-12));
    }
    REQUIRE(static_cast<double>(zeros) / n == Catch::Approx(0.7).margin(0.02));

    for (int i = 0; i < 1000; ++i)
        REQUIRE(draw_bounce_velocity(4.0, 1.0, true, rng).z == 0.0);
}

TEST_CASE("ray power evolution factor")
{
    REQUIRE(power_evolution(1.0, 100e-9, 101e-9, 5e-9, 2.0) ==
            Catch::Approx(0.9809523809523808).margin(1e-15));
    REQUIRE(power_evolution(0.5, 100e-9, 100e-9, 5e-9, 2.0) ==
            Catch::Approx(0.5).margin(1e-15));

    // a large delay jump drives the factor negative and clamps to zero
    REQUIRE(power_evolution(1.0, 100e-9, 200e-9, 5e-9, 2.0) == 0.0);

    REQUIRE_THROWS_AS(power_evolution(1.0, 0.0, 1e-9, 0.0, 2.0), std::invalid_argument);
}

TEST_CASE("appearance and disappearance ramps")
{
    Cluster c;
    c.lifecycle = Lifecycle::Active;
    REQUIRE(c.ramp(123.0, 1e-3) == 1.0);

    c.lifecycle = Lifecycle::FadingIn;
    c.phase_change_time = 0.01;
    REQUIRE(c.ramp(0.01, 1e-3) == 0.0);
    REQUIRE(c.ramp(0.0105, 1e-3) == Catch::Approx(0.5).margin(1e-12));
    REQUIRE(c.ramp(0.011, 1e-3) == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(c.ramp(0.02, 1e-3) == 1.0);
    REQUIRE(c.ramp(0.02, 0.0) == 1.0);

    c.lifecycle = Lifecycle::FadingOut;
    c.fade_out_scale = 0.8;
    REQUIRE(c.ramp(0.01, 1e-3) == Catch::Approx(0.8).margin(1e-12));
    REQUIRE(c.ramp(0.0105, 1e-3) == Catch::Approx(0.4).margin(1e-12));
    REQUIRE(c.ramp(0.011, 1e-3) == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(c.ramp(0.02, 0.0) == 0.0);
}

TEST_CASE("total cluster power sums the rays")
{
    Cluster c;
    c.rays.resize(3);
    c.rays[0].power = 0.1;
    c.rays[1].power = 0.2;
    c.rays[2].power = 0.3;
    REQUIRE(c.total_power() == Catch::Approx(0.6).margin(1e-15));
}
