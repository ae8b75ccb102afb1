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

#include "gbsm/channel.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace gbsm
{

const std::vector<Tap> &CirSnapshot::pair(std::size_t q, std::size_t p) const
{
    if (q >= n_rx || p >= n_tx)
        throw std::out_of_range("CirSnapshot::pair: antenna index out of range");
    if (taps.empty())
        throw std::logic_error("CirSnapshot::pair: snapshot was taken in pdp_only mode");
    return taps[q * n_tx + p];
}

Vec3 los_distance(const ChannelState &s, std::size_t q, std::size_t p)
{
    return s.rx.element_position(q, s.time) - s.tx.element_position(p, s.time);
}

ClusterVectors cluster_vectors(const ChannelState &s, const Cluster &c, double t)
{
    ClusterVectors cv;
    cv.rx_bounce = c.rx_bounce(t);
    cv.tx_bounce = c.tx_bounce(t);

    const Vec3 rx_rel = cv.rx_bounce - s.rx.center(t);
    const Vec3 tx_rel = cv.tx_bounce - s.tx.center(t);
    cv.rx_distance = rx_rel.norm();
    cv.tx_distance = tx_rel.norm();
    cv.aoa_azimuth = std::atan2(rx_rel.y, rx_rel.x);
    cv.aoa_elevation = std::atan2(rx_rel.z, std::hypot(rx_rel.x, rx_rel.y));
    cv.aod_azimuth = std::atan2(tx_rel.y, tx_rel.x);
    cv.aod_elevation = std::atan2(tx_rel.z, std::hypot(tx_rel.x, tx_rel.y));
    return cv;
}

Vec3 ray_rx_bounce(const ChannelState &s, const ClusterVectors &cv, const Ray &r, double t)
{
    return s.rx.center(t) + cv.rx_distance * unit_from_angles(cv.aoa_azimuth + r.aoa_az_offset,
                                                              cv.aoa_elevation + r.aoa_el_offset);
}

Vec3 ray_tx_bounce(const ChannelState &s, const ClusterVectors &cv, const Ray &r, double t)
{
    return s.tx.center(t) + cv.tx_distance * unit_from_angles(cv.aod_azimuth + r.aod_az_offset,
                                                              cv.aod_elevation + r.aod_el_offset);
}

double doppler_frequency(const Vec3 &leg, const Vec3 &v_array, const Vec3 &v_bounce,
                         double wavelength)
{
    const double n = leg.norm();
    if (n <= 0.0)
        throw std::invalid_argument("doppler_frequency: zero-length propagation leg");
    return leg.dot(v_array - v_bounce) / (wavelength * n);
}

double doppler_los(const ChannelState &s, std::size_t q, std::size_t p)
{
    // Single leg, relative end-point motion projected once.
    const Vec3 d = los_distance(s, q, p);
    return doppler_frequency(d, s.rx.velocity, s.tx.velocity, s.config.wavelength());
}

double nlos_delay(const ChannelState &s, const Cluster &c)
{
    const ClusterVectors cv = cluster_vectors(s, c, s.time);
    return (cv.rx_distance + cv.tx_distance) / SPEED_OF_LIGHT + c.virtual_delay;
}

cdouble los_gain(const ChannelState &s, std::size_t q, std::size_t p)
{
    const Vec3 aq = s.rx.element_position(q, s.time);
    const Vec3 ap = s.tx.element_position(p, s.time);

    const PolarizedField ft = field_pattern(s.tx.pattern, aq, ap, s.tx.rotation);
    const PolarizedField fr = field_pattern(s.rx.pattern, ap, aq, s.rx.rotation);

    const cdouble e = std::polar(1.0, s.los_phase);
    // [f_v, f_h] * diag(e, -e) * [f_v, f_h]^T
    cdouble g = e * (ft.f_vertical * fr.f_vertical - ft.f_horizontal * fr.f_horizontal);
    g *= std::polar(1.0, s.los_phase_acc[q * s.tx.size() + p]);
    return g;
}

cdouble nlos_gain(const ChannelState &s, const Cluster &c, const ClusterVectors &cv,
                  std::size_t ray_index, std::size_t q, std::size_t p, double weight)
{
    if (!c.rx_visible[q] || !c.tx_visible[p])
        return {0.0, 0.0};

    const Ray &r = c.rays[ray_index];
    const double t = s.time;
    const Vec3 bounce_rx = ray_rx_bounce(s, cv, r, t);
    const Vec3 bounce_tx = ray_tx_bounce(s, cv, r, t);

    const PolarizedField ft =
        field_pattern(s.tx.pattern, bounce_tx, s.tx.element_position(p, t), s.tx.rotation);
    const PolarizedField fr =
        field_pattern(s.rx.pattern, bounce_rx, s.rx.element_position(q, t), s.rx.rotation);

    const double sk = std::sqrt(s.config.cross_polarization);
    const cdouble evv = std::polar(1.0, r.phase_vv);
    const cdouble evh = std::polar(sk, r.phase_vh);
    const cdouble ehv = std::polar(sk, r.phase_hv);
    const cdouble ehh = std::polar(1.0, r.phase_hh);

    cdouble g = ft.f_vertical * (evv * fr.f_vertical + evh * fr.f_horizontal) +
                ft.f_horizontal * (ehv * fr.f_vertical + ehh * fr.f_horizontal);
    g *= std::sqrt(weight);
    g *= std::polar(1.0, c.rx_phase[q * c.rays.size() + ray_index] +
                             c.tx_phase[p * c.rays.size() + ray_index]);
    return g;
}

CirSnapshot snapshot(const ChannelState &s, const SnapshotOptions &opts)
{
    CirSnapshot snap;
    snap.time = s.time;
    snap.n_rx = static_cast<uint32_t>(s.rx.size());
    snap.n_tx = static_cast<uint32_t>(s.tx.size());

    // Global power normalization over every live ray, ramps excluded so that
    // a ramp-free snapshot sums to exactly one.
    double total = 0.0;
    for (const Cluster &c : s.clusters)
        total += c.total_power();

    const double ramp_dur = s.config.evolution.fade_ramp_s;
    std::vector<double> cluster_ramp(s.clusters.size(), 1.0);
    std::vector<ClusterVectors> geo(s.clusters.size());
    for (std::size_t i = 0; i < s.clusters.size(); ++i)
    {
        cluster_ramp[i] = s.clusters[i].ramp(s.time, ramp_dur);
        geo[i] = cluster_vectors(s, s.clusters[i], s.time);
        if (s.clusters[i].lifecycle != Lifecycle::Active)
            snap.ramping = true;
    }

    for (std::size_t i = 0; i < s.clusters.size(); ++i)
    {
        const Cluster &c = s.clusters[i];
        const double tau_c =
            (geo[i].rx_distance + geo[i].tx_distance) / SPEED_OF_LIGHT + c.virtual_delay;
        for (std::size_t m = 0; m < c.rays.size(); ++m)
        {
            RayPower rp;
            rp.cluster_id = static_cast<uint32_t>(c.id);
            rp.ray_index = static_cast<uint32_t>(m);
            rp.delay = tau_c + c.rays[m].relative_delay;
            rp.power = total > 0.0 ? c.rays[m].power / total * cluster_ramp[i] : 0.0;
            snap.ray_powers.push_back(rp);
        }
    }

    if (opts.pdp_only)
        return snap;

    std::vector<std::pair<uint32_t, uint32_t>> pairs = opts.pairs;
    if (pairs.empty())
        for (uint32_t q = 0; q < snap.n_rx; ++q)
            for (uint32_t p = 0; p < snap.n_tx; ++p)
                pairs.emplace_back(q, p);

    snap.taps.assign(static_cast<std::size_t>(snap.n_rx) * snap.n_tx, {});

    const double k = s.config.rician_k;
    const double w_los = std::sqrt(k / (k + 1.0));
    const double w_nlos = 1.0 / (k + 1.0); // applied inside sqrt(weight)

    for (const auto &[q, p] : pairs)
    {
        if (q >= snap.n_rx || p >= snap.n_tx)
            throw std::out_of_range("snapshot: requested pair out of range");
        std::vector<Tap> &list = snap.taps[static_cast<std::size_t>(q) * snap.n_tx + p];

        if (k > 0.0)
        {
            Tap tap;
            tap.delay = (s.rx.center(s.time) - s.tx.center(s.time)).norm() / SPEED_OF_LIGHT;
            tap.gain = w_los * los_gain(s, q, p);
            tap.cluster_id = LOS_TAP_ID;
            list.push_back(tap);
        }

        std::size_t ray_row = 0;
        for (std::size_t i = 0; i < s.clusters.size(); ++i)
        {
            const Cluster &c = s.clusters[i];
            if (!c.rx_visible[q] || !c.tx_visible[p])
            {
                ray_row += c.rays.size();
                continue;
            }
            for (std::size_t m = 0; m < c.rays.size(); ++m, ++ray_row)
            {
                const RayPower &rp = snap.ray_powers[ray_row];
                Tap tap;
                tap.delay = rp.delay;
                tap.gain = nlos_gain(s, c, geo[i], m, q, p, rp.power * w_nlos);
                tap.cluster_id = rp.cluster_id;
                tap.ray_index = rp.ray_index;
                list.push_back(tap);
            }
        }
    }
    return snap;
}

std::vector<uint64_t> VisibilitySet::pair_set(std::size_t q, std::size_t p) const
{
    std::vector<uint64_t> out;
    const std::vector<uint64_t> &a = rx_sets.at(q);
    const std::vector<uint64_t> &b = tx_sets.at(p);
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::size_t VisibilitySet::observable_count() const
{
    std::set<uint64_t> all;
    for (std::size_t q = 0; q < rx_sets.size(); ++q)
        for (std::size_t p = 0; p < tx_sets.size(); ++p)
            for (uint64_t id : pair_set(q, p))
                all.insert(id);
    return all.size();
}

VisibilitySet visibility_set(const ChannelState &s)
{
    VisibilitySet v;
    v.rx_sets.resize(s.rx.size());
    v.tx_sets.resize(s.tx.size());
    for (const Cluster &c : s.clusters)
    {
        for (std::size_t q = 0; q < s.rx.size(); ++q)
            if (c.rx_visible[q])
                v.rx_sets[q].push_back(c.id);
        for (std::size_t p = 0; p < s.tx.size(); ++p)
            if (c.tx_visible[p])
                v.tx_sets[p].push_back(c.id);
    }
    return v;
}

} // namespace gbsm
