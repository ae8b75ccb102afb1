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

#include "gbsm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace gbsm
{

double Pdp::total_power() const
{
    double sum = 0.0;
    for (double p : power)
        sum += p;
    return sum;
}

Pdp pdp(const CirSnapshot &snap)
{
    std::vector<RayPower> rays = snap.ray_powers;
    std::sort(rays.begin(), rays.end(), [](const RayPower &a, const RayPower &b) {
        if (a.delay != b.delay)
            return a.delay < b.delay;
        if (a.cluster_id != b.cluster_id)
            return a.cluster_id < b.cluster_id;
        return a.ray_index < b.ray_index;
    });

    Pdp out;
    out.time = snap.time;
    out.delay.reserve(rays.size());
    out.power.reserve(rays.size());
    for (const RayPower &r : rays)
    {
        out.delay.push_back(r.delay);
        out.power.push_back(r.power);
    }
    return out;
}

double pdp_acf(const Pdp &a, const Pdp &b, double bin_s)
{
    if (bin_s <= 0.0)
        throw std::invalid_argument("pdp_acf: bin width must be positive");

    std::map<long long, std::pair<double, double>> bins;
    for (std::size_t i = 0; i < a.delay.size(); ++i)
        bins[std::llround(a.delay[i] / bin_s)].first += a.power[i];
    for (std::size_t i = 0; i < b.delay.size(); ++i)
        bins[std::llround(b.delay[i] / bin_s)].second += b.power[i];

    double cross = 0.0;
    double energy_a = 0.0;
    double energy_b = 0.0;
    for (const auto &[bin, powers] : bins)
    {
        cross += powers.first * powers.second;
        energy_a += powers.first * powers.first;
        energy_b += powers.second * powers.second;
    }
    if (energy_a <= 0.0 || energy_b <= 0.0)
        throw std::invalid_argument("pdp_acf: zero-energy profile");
    return cross / std::max(energy_a, energy_b);
}

StationaryInterval stationary_interval(const std::vector<Pdp> &seq, std::size_t t_index,
                                       double threshold, double bin_s)
{
    if (t_index >= seq.size())
        throw std::out_of_range("stationary_interval: start index outside sequence");

    for (std::size_t k = t_index + 1; k < seq.size(); ++k)
    {
        if (pdp_acf(seq[t_index], seq[k], bin_s) <= threshold)
            return {seq[k].time - seq[t_index].time, false};
    }
    return {seq.back().time - seq[t_index].time, true};
}

std::vector<cdouble> transfer_function(const CirSnapshot &snap, std::size_t q, std::size_t p,
                                       const std::vector<double> &freq_offsets_hz)
{
    const std::vector<Tap> &taps = snap.pair(q, p);
    std::vector<cdouble> out(freq_offsets_hz.size(), cdouble{0.0, 0.0});
    for (std::size_t f = 0; f < freq_offsets_hz.size(); ++f)
    {
        cdouble sum{0.0, 0.0};
        for (const Tap &tap : taps)
        {
            const double phase = -2.0 * GBSM_PI * freq_offsets_hz[f] * tap.delay;
            sum += tap.gain * cdouble{std::cos(phase), std::sin(phase)};
        }
        out[f] = sum;
    }
    return out;
}

cdouble TransferGrid::at(std::size_t t_index, std::size_t f_index, std::size_t q,
                         std::size_t p) const
{
    if (t_index >= time_s.size() || f_index >= frequency_hz.size() || q >= n_rx || p >= n_tx)
        throw std::out_of_range("TransferGrid::at: index outside grid");
    return values[((t_index * frequency_hz.size() + f_index) * n_rx + q) * n_tx + p];
}

TransferGrid transfer_grid(const std::vector<CirSnapshot> &snaps,
                           const std::vector<double> &freq_offsets_hz,
                           const std::vector<std::pair<uint32_t, uint32_t>> &pairs)
{
    if (snaps.empty())
        throw std::invalid_argument("transfer_grid: empty snapshot sequence");
    if (freq_offsets_hz.empty())
        throw std::invalid_argument("transfer_grid: empty frequency grid");

    TransferGrid grid;
    grid.n_rx = snaps.front().n_rx;
    grid.n_tx = snaps.front().n_tx;
    grid.frequency_hz = freq_offsets_hz;
    grid.time_s.reserve(snaps.size());

    std::vector<std::pair<uint32_t, uint32_t>> wanted = pairs;
    if (wanted.empty())
    {
        for (uint32_t q = 0; q < grid.n_rx; ++q)
            for (uint32_t p = 0; p < grid.n_tx; ++p)
                wanted.emplace_back(q, p);
    }

    const std::size_t nf = freq_offsets_hz.size();
    grid.values.assign(snaps.size() * nf * grid.n_rx * grid.n_tx, cdouble{0.0, 0.0});
    for (std::size_t t = 0; t < snaps.size(); ++t)
    {
        grid.time_s.push_back(snaps[t].time);
        for (const auto &[q, p] : wanted)
        {
            const std::vector<cdouble> tf = transfer_function(snaps[t], q, p, freq_offsets_hz);
            for (std::size_t f = 0; f < nf; ++f)
                grid.values[((t * nf + f) * grid.n_rx + q) * grid.n_tx + p] = tf[f];
        }
    }
    return grid;
}

cdouble stfcf(const std::vector<TransferGrid> &ensemble, std::size_t q, std::size_t p,
              std::size_t q2, std::size_t p2, std::size_t t_index, std::size_t f_index,
              std::size_t dt_steps, std::size_t df_steps)
{
    if (ensemble.empty())
        throw std::invalid_argument("stfcf: empty ensemble");

    cdouble sum{0.0, 0.0};
    for (const TransferGrid &g : ensemble)
    {
        const cdouble a = g.at(t_index, f_index, q, p);
        const cdouble b = g.at(t_index + dt_steps, f_index + df_steps, q2, p2);
        sum += std::conj(a) * b;
    }
    return sum / static_cast<double>(ensemble.size());
}

std::vector<cdouble> acf_curve(const std::vector<TransferGrid> &ensemble, std::size_t q,
                               std::size_t p, std::size_t t_index, std::size_t f_index,
                               std::size_t max_lag_steps)
{
    std::vector<cdouble> out;
    out.reserve(max_lag_steps + 1);
    for (std::size_t lag = 0; lag <= max_lag_steps; ++lag)
        out.push_back(stfcf(ensemble, q, p, q, p, t_index, f_index, lag, 0));
    return out;
}

std::vector<cdouble> fcf_curve(const std::vector<TransferGrid> &ensemble, std::size_t q,
                               std::size_t p, std::size_t t_index, std::size_t f_index,
                               std::size_t max_df_steps)
{
    std::vector<cdouble> out;
    out.reserve(max_df_steps + 1);
    for (std::size_t df = 0; df <= max_df_steps; ++df)
        out.push_back(stfcf(ensemble, q, p, q, p, t_index, f_index, 0, df));
    return out;
}

cdouble space_ccf_rx(const std::vector<TransferGrid> &ensemble, std::size_t q, std::size_t q2,
                     std::size_t p, std::size_t t_index, std::size_t f_index)
{
    return stfcf(ensemble, q, p, q2, p, t_index, f_index, 0, 0);
}

cdouble space_ccf_tx(const std::vector<TransferGrid> &ensemble, std::size_t p, std::size_t p2,
                     std::size_t q, std::size_t t_index, std::size_t f_index)
{
    return stfcf(ensemble, q, p, q, p2, t_index, f_index, 0, 0);
}

std::vector<cdouble> snapshot_fcf(const TransferGrid &grid, std::size_t t_index, std::size_t q,
                                  std::size_t p, std::size_t max_df_steps)
{
    const std::size_t nf = grid.frequency_hz.size();
    if (max_df_steps >= nf)
        throw std::out_of_range("snapshot_fcf: frequency lag outside grid");

    std::vector<cdouble> out;
    out.reserve(max_df_steps + 1);
    for (std::size_t df = 0; df <= max_df_steps; ++df)
    {
        cdouble sum{0.0, 0.0};
        const std::size_t count = nf - df;
        for (std::size_t f = 0; f < count; ++f)
            sum += std::conj(grid.at(t_index, f, q, p)) * grid.at(t_index, f + df, q, p);
        out.push_back(sum / static_cast<double>(count));
    }
    return out;
}

CoherenceBandwidth coherence_bandwidth_90(const std::vector<cdouble> &fcf, double df_hz,
                                          double threshold)
{
    if (fcf.empty())
        throw std::invalid_argument("coherence_bandwidth_90: empty correlation curve");
    if (df_hz <= 0.0)
        throw std::invalid_argument("coherence_bandwidth_90: frequency step must be positive");

    const double base = std::abs(fcf.front());
    if (base <= 0.0)
        throw std::invalid_argument("coherence_bandwidth_90: zero correlation at zero lag");

    double prev = 1.0;
    for (std::size_t k = 1; k < fcf.size(); ++k)
    {
        const double cur = std::abs(fcf[k]) / base;
        if (cur < threshold)
        {
            const double frac = (prev - threshold) / (prev - cur);
            return {(static_cast<double>(k - 1) + frac) * df_hz, false};
        }
        prev = cur;
    }
    return {static_cast<double>(fcf.size() - 1) * df_hz, true};
}

double rms_delay_spread(const Pdp &p)
{
    const double total = p.total_power();
    if (total <= 0.0)
        throw std::invalid_argument("rms_delay_spread: zero total power");

    double mean = 0.0;
    for (std::size_t i = 0; i < p.delay.size(); ++i)
        mean += p.power[i] * p.delay[i];
    mean /= total;

    double var = 0.0;
    for (std::size_t i = 0; i < p.delay.size(); ++i)
    {
        const double d = p.delay[i] - mean;
        var += p.power[i] * d * d;
    }
    return std::sqrt(var / total);
}

// --- eigendecomposition ------------------------------------------------------

namespace
{

// One complex Jacobi rotation zeroing A(p, q); A stays Hermitian. V
// accumulates the rotations so that A_input = V * diag * V^H at convergence.
void jacobi_rotate(std::vector<cdouble> &a, std::vector<cdouble> &v, std::size_t n,
                   std::size_t p, std::size_t q)
{
    const cdouble apq = a[p * n + q];
    const double b = std::abs(apq);
    if (b == 0.0)
        return;

    const cdouble u = apq / b; // phase of the pivot
    const double app = a[p * n + p].real();
    const double aqq = a[q * n + q].real();
    const double tau = (aqq - app) / (2.0 * b);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    for (std::size_t k = 0; k < n; ++k)
    {
        if (k == p || k == q)
            continue;
        const cdouble akp = a[k * n + p];
        const cdouble akq = a[k * n + q];
        a[k * n + p] = c * akp - s * std::conj(u) * akq;
        a[k * n + q] = s * u * akp + c * akq;
        a[p * n + k] = std::conj(a[k * n + p]);
        a[q * n + k] = std::conj(a[k * n + q]);
    }

    a[p * n + p] = cdouble{c * c * app - 2.0 * c * s * b + s * s * aqq, 0.0};
    a[q * n + q] = cdouble{s * s * app + 2.0 * c * s * b + c * c * aqq, 0.0};
    a[p * n + q] = cdouble{0.0, 0.0};
    a[q * n + p] = cdouble{0.0, 0.0};

    for (std::size_t k = 0; k < n; ++k)
    {
        const cdouble vkp = v[k * n + p];
        const cdouble vkq = v[k * n + q];
        v[k * n + p] = c * vkp - s * std::conj(u) * vkq;
        v[k * n + q] = s * u * vkp + c * vkq;
    }
}

double off_diagonal_norm(const std::vector<cdouble> &a, std::size_t n)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            sum += std::norm(a[i * n + j]);
    return sum;
}

} // namespace

EigenResult hermitian_eigen(std::vector<cdouble> matrix, std::size_t n)
{
    if (matrix.size() != n * n)
        throw std::invalid_argument("hermitian_eigen: matrix size does not match dimension");

    EigenResult result;
    if (n == 0)
        return result;

    std::vector<cdouble> v(n * n, cdouble{0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i)
        v[i * n + i] = cdouble{1.0, 0.0};

    double scale = 0.0;
    for (const cdouble &x : matrix)
        scale += std::norm(x);
    const double tol = scale * 1e-28;

    for (int sweep = 0; sweep < 64; ++sweep)
    {
        if (off_diagonal_norm(matrix, n) <= tol)
            break;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                jacobi_rotate(matrix, v, n, p, q);
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return matrix[i * n + i].real() < matrix[j * n + j].real();
    });

    result.values.resize(n);
    result.vectors.resize(n * n);
    for (std::size_t c = 0; c < n; ++c)
    {
        result.values[c] = matrix[order[c] * n + order[c]].real();
        for (std::size_t r = 0; r < n; ++r)
            result.vectors[r * n + c] = v[r * n + order[c]];
    }
    return result;
}

AngularSpectrum smooth_music_aps(const std::vector<std::vector<cdouble>> &samples,
                                 std::size_t subarray_size, std::size_t signal_dim,
                                 const std::vector<double> &angle_grid_rad)
{
    if (samples.empty())
        throw std::invalid_argument("smooth_music_aps: no spatial samples");
    const std::size_t m = subarray_size;
    const std::size_t n_elements = samples.front().size();
    if (m < 2)
        throw std::invalid_argument("smooth_music_aps: subarray must span at least 2 elements");
    if (n_elements < m)
        throw std::invalid_argument("smooth_music_aps: fewer antennas than the subarray size");
    if (signal_dim == 0 || signal_dim >= m)
        throw std::invalid_argument("smooth_music_aps: signal dimension must be in [1, subarray)");

    for (const auto &snap : samples)
        if (snap.size() != n_elements)
            throw std::invalid_argument("smooth_music_aps: inconsistent sample lengths");

    // Full-array sample covariance.
    std::vector<cdouble> r_full(n_elements * n_elements, cdouble{0.0, 0.0});
    for (const auto &snap : samples)
        for (std::size_t i = 0; i < n_elements; ++i)
            for (std::size_t j = 0; j < n_elements; ++j)
                r_full[i * n_elements + j] += snap[i] * std::conj(snap[j]);
    const double inv_k = 1.0 / static_cast<double>(samples.size());
    for (cdouble &x : r_full)
        x *= inv_k;

    // Forward smoothing: average the covariance over all sliding windows.
    const std::size_t n_windows = n_elements - m + 1;
    std::vector<cdouble> r_s(m * m, cdouble{0.0, 0.0});
    for (std::size_t w = 0; w < n_windows; ++w)
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                r_s[i * m + j] += r_full[(w + i) * n_elements + (w + j)];
    const double inv_w = 1.0 / static_cast<double>(n_windows);
    for (cdouble &x : r_s)
        x *= inv_w;

    const EigenResult eig = hermitian_eigen(r_s, m);
    const std::size_t noise_dim = m - signal_dim;

    AngularSpectrum spec;
    spec.angle_rad = angle_grid_rad;
    spec.power.resize(angle_grid_rad.size());

    double peak = 0.0;
    for (std::size_t g = 0; g < angle_grid_rad.size(); ++g)
    {
        // Steering vector of a half-wavelength uniform linear array.
        std::vector<cdouble> steer(m);
        const double sin_angle = std::sin(angle_grid_rad[g]);
        for (std::size_t i = 0; i < m; ++i)
        {
            const double phase = GBSM_PI * static_cast<double>(i) * sin_angle;
            steer[i] = cdouble{std::cos(phase), std::sin(phase)};
        }

        double denom = 0.0;
        for (std::size_t c = 0; c < noise_dim; ++c)
        {
            cdouble dot{0.0, 0.0};
            for (std::size_t i = 0; i < m; ++i)
                dot += std::conj(eig.vectors[i * m + c]) * steer[i];
            denom += std::norm(dot);
        }
        spec.power[g] = 1.0 / std::max(denom, 1e-300);
        peak = std::max(peak, spec.power[g]);
    }

    if (peak > 0.0)
        for (double &p : spec.power)
            p /= peak;
    return spec;
}

// --- empirical distributions -------------------------------------------------

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples)
    : samples_(std::move(samples))
{
    if (samples_.empty())
        throw std::invalid_argument("EmpiricalDistribution: no samples");
    std::sort(samples_.begin(), samples_.end());
}

double EmpiricalDistribution::cdf(double x) const
{
    const auto it = std::upper_bound(samples_.begin(), samples_.end(), x);
    return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
}

double EmpiricalDistribution::quantile(double p) const
{
    if (p < 0.0 || p > 1.0)
        throw std::invalid_argument("EmpiricalDistribution: quantile level outside [0, 1]");
    const double n = static_cast<double>(samples_.size());
    const std::size_t rank = static_cast<std::size_t>(
        std::max(1.0, std::min(n, std::ceil(p * n))));
    return samples_[rank - 1];
}

} // namespace gbsm
