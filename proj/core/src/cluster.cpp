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

#include "gbsm/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gbsm
{

double Cluster::ramp(double t, double ramp_duration) const
{
    if (lifecycle == Lifecycle::Active)
        return 1.0;
    if (ramp_duration <= 0.0)
        return lifecycle == Lifecycle::FadingIn ? 1.0 : 0.0;
    const double frac = (t - phase_change_time) / ramp_duration;
    if (lifecycle == Lifecycle::FadingIn)
        return std::clamp(frac, 0.0, 1.0);
    return fade_out_scale * std::clamp(1.0 - frac, 0.0, 1.0);
}

double Cluster::total_power() const
{
    double s = 0.0;
    for (const Ray &r : rays)
        s += r.power;
    return s;
}

double survival_probability(const EvolutionParams &p, double dt)
{
    if (dt < 0.0)
        throw std::invalid_argument("survival_probability: dt must be non-negative");
    const double dv = p.mean_relative_speed_rx + p.mean_relative_speed_tx;
    return std::exp(-p.recombination_rate_per_m * p.moving_cluster_fraction * dv * dt /
                    p.space_coherence_m);
}

double expected_new_clusters(const EvolutionParams &p, double dt)
{
    return p.generation_rate_per_m / p.recombination_rate_per_m *
           (1.0 - survival_probability(p, dt));
}

double generate_virtual_delay(double r_tau, double sigma_tau, RandomStream &rng)
{
    if (r_tau <= 1.0 || sigma_tau <= 0.0)
        throw std::invalid_argument("generate_virtual_delay: need r_tau > 1 and sigma_tau > 0");
    return rng.exponential(r_tau * sigma_tau);
}

double generate_cluster_power(double virtual_delay, double r_tau, double sigma_tau,
                              double shadow_std_db, RandomStream &rng)
{
    const double z = shadow_std_db * rng.normal();
    return std::exp(-virtual_delay * (r_tau - 1.0) / (r_tau * sigma_tau)) *
           std::pow(10.0, -z / 10.0);
}

ClusterAngles generate_cluster_angles(const AngleParams &p, RandomStream &rng)
{
    const auto draw = [&rng](const AngleSpread &s) {
        return wrap_angle(s.mean_rad + s.std_rad * rng.normal());
    };
    ClusterAngles a{};
    a.aoa_azimuth = draw(p.aoa_azimuth);
    a.aoa_elevation = draw(p.aoa_elevation);
    a.aod_azimuth = draw(p.aod_azimuth);
    a.aod_elevation = draw(p.aod_elevation);
    return a;
}

std::vector<Ray> generate_ray_set(const EvolutionParams &p, RandomStream &rng)
{
    std::size_t count;
    if (p.ray_count_std > 0.0)
        count = static_cast<std::size_t>(std::max<uint64_t>(rng.poisson(p.ray_count_mean), 1));
    else
        count = static_cast<std::size_t>(std::max<long long>(std::llround(p.ray_count_mean), 1));

    std::vector<Ray> rays(count);
    for (Ray &r : rays)
    {
        if (p.ray_delay_mean_s > 0.0)
        {
            r.relative_delay = rng.exponential(p.ray_delay_mean_s);
            r.power = std::exp(-r.relative_delay * (p.delay_scalar - 1.0) / p.ray_delay_mean_s);
        }
        else
        {
            // Degenerate intra-cluster profile: all mass at the cluster delay.
            r.relative_delay = 0.0;
            r.power = 1.0;
        }
        r.power *= std::pow(10.0, -p.shadowing_std_db * rng.normal() / 10.0);

        r.aoa_az_offset = rng.laplace(p.ray_offset_std_rad);
        r.aoa_el_offset = rng.laplace(p.ray_offset_std_rad);
        r.aod_az_offset = rng.laplace(p.ray_offset_std_rad);
        r.aod_el_offset = rng.laplace(p.ray_offset_std_rad);
    }
    return rays;
}

void scale_ray_powers(double cluster_power, std::vector<Ray> &rays)
{
    double sum = 0.0;
    for (const Ray &r : rays)
        sum += r.power;
    if (sum <= 0.0)
        throw std::invalid_argument("scale_ray_powers: unscaled ray powers sum to zero");
    const double f = cluster_power / sum;
    for (Ray &r : rays)
        r.power *= f;
}

std::vector<uint8_t> assign_visibility(const AntennaArray &array, double t,
                                       double recombination_rate_per_m,
                                       double array_coherence_m, RandomStream &rng)
{
    const std::size_t n = array.size();
    const uint64_t anchor = rng.uniform_index(n);
    const double radius = rng.exponential(array_coherence_m / recombination_rate_per_m);

    std::vector<uint8_t> vis(n, 0);
    const Vec3 a = array.element_position(anchor, t);
    for (std::size_t i = 0; i < n; ++i)
        vis[i] = (array.element_position(i, t) - a).norm() <= radius ? 1 : 0;
    vis[anchor] = 1;
    return vis;
}

// Mean of ||v - s*u|| over uniform directions u, closed form on the sphere,
// quadrature on the circle.
static double mean_relative_speed(double a, double s, bool two_d)
{
    if (s <= 0.0)
        return a;
    if (a <= 0.0)
        return s;
    if (!two_d)
    {
        const double hi = a + s;
        const double lo = std::fabs(a - s);
        return (hi * hi * hi - lo * lo * lo) / (6.0 * a * s);
    }
    const int n = 512;
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
    {
        const double th = 2.0 * GBSM_PI * (i + 0.5) / n;
        acc += std::sqrt(a * a + s * s - 2.0 * a * s * std::cos(th));
    }
    return acc / n;
}

double moving_cluster_speed(double array_speed, double mean_relative_speed_target,
                            double moving_fraction, bool two_d)
{
    if (mean_relative_speed_target <= 0.0)
        return 0.0;
    if (moving_fraction <= 0.0)
        throw std::invalid_argument("moving_cluster_speed: moving fraction must be positive");

    const double fallback = mean_relative_speed_target / moving_fraction;
    // Over all clusters: P_F * E||v - s*u|| + (1 - P_F) * ||v|| = target.
    const double needed = (mean_relative_speed_target -
                           (1.0 - moving_fraction) * array_speed) / moving_fraction;
    if (needed < array_speed)
        return fallback; // E||v - s*u|| >= ||v||, target unreachable

    double lo = 0.0, hi = std::max(4.0 * needed, 4.0 * array_speed) + 1.0;
    while (mean_relative_speed(array_speed, hi, two_d) < needed)
        hi *= 2.0;
    for (int it = 0; it < 200; ++it)
    {
        const double mid = 0.5 * (lo + hi);
        if (mean_relative_speed(array_speed, mid, two_d) < needed)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

Vec3 draw_bounce_velocity(double speed, double moving_fraction, bool two_d, RandomStream &rng)
{
    const bool moving = rng.uniform() < moving_fraction;
    const Vec3 dir = two_d ? rng.unit_circle_xy() : rng.unit_sphere();
    return moving ? dir * speed : Vec3{};
}

double power_evolution(double power, double tau_old, double tau_new, double ray_delay,
                       double eta)
{
    const double denom = tau_old + ray_delay;
    if (denom <= 0.0)
        throw std::invalid_argument("power_evolution: non-positive combined delay");
    const double factor = ((eta + 1.0) * tau_old - eta * tau_new + ray_delay) / denom;
    return std::max(0.0, power * factor);
}

} // namespace gbsm
