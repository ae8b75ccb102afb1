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

#ifndef GBSM_STATS_H
#define GBSM_STATS_H

#include <complex>
#include <cstdint>
#include <vector>

#include "gbsm/channel.hpp"

namespace gbsm
{

// --- power delay profile ---------------------------------------------------

// Discrete PDP: normalized ray powers over absolute delay, sorted by delay.
struct Pdp
{
    double time = 0.0;
    std::vector<double> delay;
    std::vector<double> power;

    double total_power() const;
};

Pdp pdp(const CirSnapshot &snap);

// Normalized PDP correlation over a shared delay grid (nearest-bin
// assignment), with the larger self-energy as the normalizer so the result
// stays within [0, 1]. Throws on zero-energy input.
double pdp_acf(const Pdp &a, const Pdp &b, double bin_s = 5e-9);

struct StationaryInterval
{
    double interval_s = 0.0;
    bool censored = false; // correlation never crossed the threshold in-window
};

// Smallest sampled lag from seq[t_index] at which the PDP correlation drops
// to the threshold or below; censored at the remaining window length.
StationaryInterval stationary_interval(const std::vector<Pdp> &seq, std::size_t t_index,
                                       double threshold = 0.8, double bin_s = 5e-9);

// --- transfer function and correlation -------------------------------------

// H(xi) = sum over taps of gain * exp(-j 2 pi xi delay), one value per
// frequency offset.
std::vector<cdouble> transfer_function(const CirSnapshot &snap, std::size_t q, std::size_t p,
                                       const std::vector<double> &freq_offsets_hz);

// Transfer-function samples of one realization on fixed time/frequency grids.
struct TransferGrid
{
    std::vector<double> time_s;
    std::vector<double> frequency_hz; // offsets around the carrier
    uint32_t n_rx = 0;
    uint32_t n_tx = 0;
    std::vector<cdouble> values; // [((t * n_freq + f) * n_rx + q) * n_tx + p]

    cdouble at(std::size_t t_index, std::size_t f_index, std::size_t q, std::size_t p) const;
};

TransferGrid transfer_grid(const std::vector<CirSnapshot> &snaps,
                           const std::vector<double> &freq_offsets_hz,
                           const std::vector<std::pair<uint32_t, uint32_t>> &pairs = {});

// Ensemble-averaged correlation E[conj(H_qp(f, t)) * H_q2p2(f + df, t + dt)]
// with lags expressed in grid steps. Fixed summation order over the ensemble.
cdouble stfcf(const std::vector<TransferGrid> &ensemble, std::size_t q, std::size_t p,
              std::size_t q2, std::size_t p2, std::size_t t_index, std::size_t f_index,
              std::size_t dt_steps, std::size_t df_steps);

// One-dimensional reductions; each value is the stfcf at the corresponding
// fixed-parameter slice.
std::vector<cdouble> acf_curve(const std::vector<TransferGrid> &ensemble, std::size_t q,
                               std::size_t p, std::size_t t_index, std::size_t f_index,
                               std::size_t max_lag_steps);
std::vector<cdouble> fcf_curve(const std::vector<TransferGrid> &ensemble, std::size_t q,
                               std::size_t p, std::size_t t_index, std::size_t f_index,
                               std::size_t max_df_steps);
cdouble space_ccf_rx(const std::vector<TransferGrid> &ensemble, std::size_t q, std::size_t q2,
                     std::size_t p, std::size_t t_index, std::size_t f_index);
cdouble space_ccf_tx(const std::vector<TransferGrid> &ensemble, std::size_t p, std::size_t p2,
                     std::size_t q, std::size_t t_index, std::size_t f_index);

// Frequency-averaged single-snapshot FCF: mean over xi of
// conj(H(xi, t)) * H(xi + df, t), for df = 0 .. max_df_steps.
std::vector<cdouble> snapshot_fcf(const TransferGrid &grid, std::size_t t_index, std::size_t q,
                                  std::size_t p, std::size_t max_df_steps);

struct CoherenceBandwidth
{
    double bandwidth_hz = 0.0;
    bool censored = false; // |FCF| never dropped below the threshold in-grid
};

// Smallest frequency lag at which |FCF| / |FCF(0)| falls below the threshold,
// with linear interpolation between grid points.
CoherenceBandwidth coherence_bandwidth_90(const std::vector<cdouble> &fcf, double df_hz,
                                          double threshold = 0.9);

double rms_delay_spread(const Pdp &p);

// --- eigendecomposition and smooth MUSIC ------------------------------------

// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
// Eigenvalues ascending; vectors[r * n + c] is component r of eigenvector c.
struct EigenResult
{
    std::vector<double> values;
    std::vector<cdouble> vectors;
};

EigenResult hermitian_eigen(std::vector<cdouble> matrix, std::size_t n);

struct AngularSpectrum
{
    std::vector<double> angle_rad;
    std::vector<double> power; // peak-normalized pseudo-spectrum
};

// Forward spatial smoothing over all length-subarray_size sliding windows of
// the element axis, then the MUSIC pseudo-spectrum over steering vectors for
// half-wavelength spacing. samples[k][element] are complex array snapshots.
AngularSpectrum smooth_music_aps(const std::vector<std::vector<cdouble>> &samples,
                                 std::size_t subarray_size, std::size_t signal_dim,
                                 const std::vector<double> &angle_grid_rad);

// --- empirical distributions -------------------------------------------------

class EmpiricalDistribution
{
  public:
    explicit EmpiricalDistribution(std::vector<double> samples);

    double cdf(double x) const;
    double ccdf(double x) const { return 1.0 - cdf(x); }
    // Nearest-rank quantile, p in [0, 1].
    double quantile(double p) const;
    double median() const { return quantile(0.5); }

    const std::vector<double> &sorted_samples() const { return samples_; }

  private:
    std::vector<double> samples_;
};

} // namespace gbsm

#endif
