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

#ifndef GBSM_RNG_H
#define GBSM_RNG_H

#include <cstdint>
#include <random>

#include "gbsm/vec3.hpp"

namespace gbsm
{

// Mixes a base seed with a stream id into an independent-looking engine seed.
uint64_t derive_seed(uint64_t base, uint64_t stream_id);

// Deterministic random stream. The engine (mt19937_64) has standard-specified
// output and every distribution transform below is implemented explicitly, so a
// given seed produces identical draws on every platform and standard library.
// The std:: distribution objects are deliberately not used: their algorithms are
// implementation-defined and would break bit-reproducibility of runs.
class RandomStream
{
  public:
    explicit RandomStream(uint64_t seed) : eng_(seed) {}

    // Uniform on the open interval (0, 1); never returns an endpoint, so
    // log(u) and log(1 - u) are always finite.
    double uniform();

    double uniform(double lo, double hi);

    // Standard normal via Box-Muller (consumes exactly two uniforms).
    double normal();

    // Exponential with the given mean; degenerates to 0 when mean == 0
    // (still consumes one uniform so stream layout is mean-independent).
    double exponential(double mean);

    // Zero-mean Laplace with the given standard deviation.
    double laplace(double stddev);

    // 10^(m + s * N(0,1)), the base-10 lognormal used for large-scale parameters.
    double lognormal10(double log10_mean, double log10_std);

    // Poisson by sequential inversion; valid for mean < 500 (far above any use here).
    uint64_t poisson(double mean);

    // Gamma(shape, scale) via Marsaglia-Tsang squeeze, shape < 1 handled by boosting.
    double gamma(double shape, double scale);

    // Index uniform on {0, ..., n-1}; n must be > 0.
    uint64_t uniform_index(uint64_t n);

    // Uniform unit direction on the sphere (two uniforms) or the xy-circle (one).
    Vec3 unit_sphere();
    Vec3 unit_circle_xy();

  private:
    std::mt19937_64 eng_;
};

} // namespace gbsm

#endif
