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

#include "gbsm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gbsm
{

Mat3 Mat3::identity()
{
    Mat3 r;
    r.m = {1, 0, 0, 0, 1, 0, 0, 0, 1};
    return r;
}

Mat3 Mat3::operator*(const Mat3 &o) const
{
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
        {
            double s = 0.0;
            for (int k = 0; k < 3; ++k)
                s += m[3 * i + k] * o.m[3 * k + j];
            r.m[3 * i + j] = s;
        }
    return r;
}

Vec3 Mat3::operator*(const Vec3 &v) const
{
    return {m[0] * v.x + m[1] * v.y + m[2] * v.z, m[3] * v.x + m[4] * v.y + m[5] * v.z,
            m[6] * v.x + m[7] * v.y + m[8] * v.z};
}

Mat3 Mat3::transposed() const
{
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r.m[3 * i + j] = m[3 * j + i];
    return r;
}

Mat3 rotation_matrix(double alpha, double beta, double gamma)
{
    const double ca = std::cos(alpha), sa = std::sin(alpha);
    const double cb = std::cos(beta), sb = std::sin(beta);
    const double cg = std::cos(gamma), sg = std::sin(gamma);

    Mat3 rx, ry, rz;
    rx.m = {1, 0, 0, 0, ca, -sa, 0, sa, ca};
    ry.m = {cb, 0, sb, 0, 1, 0, -sb, 0, cb};
    rz.m = {cg, -sg, 0, sg, cg, 0, 0, 0, 1};
    return rz * ry * rx;
}

LocalAngles to_local_angles(const Vec3 &a, const Vec3 &b, const Mat3 &rot)
{
    const Vec3 d = a - b;
    if (d.norm() <= 0.0)
        throw std::invalid_argument("to_local_angles: coincident points have no direction");
    const Vec3 l = rot * d;
    return {std::atan2(l.y, l.x), std::atan2(l.z, std::hypot(l.x, l.y))};
}

double PatternTable::interpolate(double azimuth, double elevation) const
{
    const auto clamp_cell = [](const std::vector<double> &grid, double v, std::size_t &i0,
                               double &frac) {
        if (v <= grid.front())
        {
            i0 = 0, frac = 0.0;
            return;
        }
        if (v >= grid.back())
        {
            i0 = grid.size() - 2, frac = 1.0;
            return;
        }
        const auto it = std::upper_bound(grid.begin(), grid.end(), v);
        i0 = static_cast<std::size_t>(it - grid.begin()) - 1;
        frac = (v - grid[i0]) / (grid[i0 + 1] - grid[i0]);
    };

    if (azimuth_rad.size() < 2 || elevation_rad.size() < 2)
        throw std::runtime_error("pattern table needs at least a 2x2 grid");

    std::size_t ia, ie;
    double fa, fe;
    clamp_cell(azimuth_rad, azimuth, ia, fa);
    clamp_cell(elevation_rad, elevation, ie, fe);

    const std::size_t na = azimuth_rad.size();
    const double g00 = gain[ie * na + ia];
    const double g01 = gain[ie * na + ia + 1];
    const double g10 = gain[(ie + 1) * na + ia];
    const double g11 = gain[(ie + 1) * na + ia + 1];
    return (1.0 - fe) * ((1.0 - fa) * g00 + fa * g01) + fe * ((1.0 - fa) * g10 + fa * g11);
}

PatternTable load_pattern_table(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open pattern file: " + path);

    std::set<double> az_set, el_set;
    std::map<std::pair<double, double>, double> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        std::istringstream ss(line);
        double az, el, g;
        if (!(ss >> az >> el >> g))
            throw std::runtime_error("pattern file " + path + ": malformed line " +
                                     std::to_string(line_no));
        az_set.insert(az);
        el_set.insert(el);
        entries[{el, az}] = g;
    }
    if (az_set.size() < 2 || el_set.size() < 2)
        throw std::runtime_error("pattern file " + path + ": grid must be at least 2x2");
    if (entries.size() != az_set.size() * el_set.size())
        throw std::runtime_error("pattern file " + path + ": incomplete grid (" +
                                 std::to_string(entries.size()) + " of " +
                                 std::to_string(az_set.size() * el_set.size()) + " points)");

    PatternTable t;
    t.azimuth_rad.assign(az_set.begin(), az_set.end());
    t.elevation_rad.assign(el_set.begin(), el_set.end());
    t.gain.reserve(entries.size());
    for (double el : t.elevation_rad)
        for (double az : t.azimuth_rad)
            t.gain.push_back(entries.at({el, az}));
    return t;
}

double AntennaPattern::gain(double azimuth, double elevation) const
{
    switch (kind)
    {
    case PatternKind::Omnidirectional:
        return 1.0;
    case PatternKind::HalfWaveDipole:
    {
        const double se = std::sin(elevation);
        if (std::fabs(se) < 1e-9)
            return 0.0;
        return std::sqrt(1.64) * std::cos(0.5 * GBSM_PI * std::cos(elevation)) / se;
    }
    case PatternKind::Custom:
        return table.interpolate(azimuth, elevation);
    }
    return 1.0;
}

PolarizedField field_pattern(const AntennaPattern &pattern, const Vec3 &a, const Vec3 &b,
                             const Mat3 &rot)
{
    const LocalAngles ang = to_local_angles(a, b, rot);
    const double g = pattern.gain(ang.azimuth, ang.elevation);
    return {g * std::sin(ang.azimuth), g * std::cos(ang.azimuth)};
}

Vec3 AntennaArray::element_position(std::size_t i, double t) const
{
    if (i >= elements.size())
        throw std::out_of_range("element_position: index out of range");
    return elements[i] + velocity * t;
}

Vec3 AntennaArray::center(double t) const
{
    Vec3 c{};
    for (const Vec3 &e : elements)
        c += e;
    const double n = static_cast<double>(elements.size());
    return c * (1.0 / n) + velocity * t;
}

AntennaArray make_linear_array(std::size_t count, double spacing, const Vec3 &center,
                               const Vec3 &axis)
{
    if (count == 0)
        throw std::invalid_argument("make_linear_array: count must be positive");
    const double an = axis.norm();
    if (an <= 0.0)
        throw std::invalid_argument("make_linear_array: axis must be non-zero");
    const Vec3 u = axis * (1.0 / an);

    AntennaArray arr;
    arr.elements.reserve(count);
    const double half = 0.5 * static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i)
        arr.elements.push_back(center + u * ((static_cast<double>(i) - half) * spacing));
    return arr;
}

double wrap_angle(double a)
{
    double r = std::fmod(a + GBSM_PI, 2.0 * GBSM_PI);
    if (r <= 0.0)
        r += 2.0 * GBSM_PI;
    return r - GBSM_PI;
}

} // namespace gbsm
