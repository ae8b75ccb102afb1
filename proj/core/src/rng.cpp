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

#include "gbsm/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace gbsm
{

static constexpr double PI = 3.141592653589793238462643383279502884;

uint64_t derive_seed(uint64_t base, uint64_t stream_id)
{
    // splitmix64 finalizer over base + golden-ratio stepped stream id
    uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream_id + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double RandomStream::uniform()
{
    // 53-bit mantissa shifted to the cell centers of (0,1)
    const uint64_t bits = eng_() >> 11;
    return (static_cast<double>(bits) + 0.5) * (1.0 / 9007199254740992.0);
}

double RandomStream::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double RandomStream::normal()
{
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * PI * u2);
}

double RandomStream::exponential(double mean)
{
    const double u = uniform();
    return mean <= 0.0 ? 0.0 : -mean * std::log(u);
}

double RandomStream::laplace(double stddev)
{
    const double b = stddev / std::sqrt(2.0);
    const double u = uniform() - 0.5;
    const double s = u < 0.0 ? -1.0 : 1.0;
    return -b * s * std::log(1.0 - 2.0 * std::fabs(u));
}

double RandomStream::lognormal10(double log10_mean, double log10_std)
{
    return std::pow(10.0, log10_mean + log10_std * normal());
}

uint64_t RandomStream::poisson(double mean)
{
    if (mean <= 0.0)
        return 0;
    if (mean >= 500.0)
        throw std::invalid_argument("poisson: mean too large for inversion sampling");
    const double limit = std::exp(-mean);
    double prod = 1.0;
    uint64_t k = 0;
    do
    {
        ++k;
        prod *= uniform();
    } while (prod > limit);
    return k - 1;
}

double RandomStream::gamma(double shape, double scale)
{
    if (shape <= 0.0 || scale <= 0.0)
        throw std::invalid_argument("gamma: shape and scale must be positive");
    if (shape < 1.0)
    {
        const double u = uniform();
        return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;)
    {
        double x, v;
        do
        {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x)
            return d * v * scale;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
            return d * v * scale;
    }
}

uint64_t RandomStream::uniform_index(uint64_t n)
{
    if (n == 0)
        throw std::invalid_argument("uniform_index: n must be positive");
    uint64_t k = static_cast<uint64_t>(uniform() * static_cast<double>(n));
    return k >= n ? n - 1 : k;
}

Vec3 RandomStream::unit_sphere()
{
    const double z = uniform(-1.0, 1.0);
    const double a = 2.0 * PI * uniform();
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(a), r * std::sin(a), z};
}

Vec3 RandomStream::unit_circle_xy()
{
    const double a = 2.0 * PI * uniform();
    return {std::cos(a), std::sin(a), 0.0};
}

} // namespace gbsm
