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

#ifndef GBSM_GEOMETRY_H
#define GBSM_GEOMETRY_H

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "gbsm/vec3.hpp"

namespace gbsm
{

constexpr double SPEED_OF_LIGHT = 299792458.0; // m/s
constexpr double GBSM_PI = 3.141592653589793238462643383279502884;

// Row-major 3x3 matrix.
struct Mat3
{
    std::array<double, 9> m{};

    static Mat3 identity();
    Mat3 operator*(const Mat3 &o) const;
    Vec3 operator*(const Vec3 &v) const;
    Mat3 transposed() const;
};

// Composite rotation Rz(gamma) * Ry(beta) * Rx(alpha) that maps global
// coordinates into the local (antenna) coordinate system orientation.
Mat3 rotation_matrix(double alpha, double beta, double gamma);

// Direction of a - b expressed in the local coordinate system defined by R:
// azimuth from the local x-axis in the xy-plane, elevation from the xy-plane.
struct LocalAngles
{
    double azimuth;   // atan2(y_local, x_local), in (-pi, pi]
    double elevation; // atan2(z_local, hypot(x_local, y_local)), in [-pi/2, pi/2]
};

// Throws std::invalid_argument when a == b (no direction defined).
LocalAngles to_local_angles(const Vec3 &a, const Vec3 &b, const Mat3 &rot);

enum class PatternKind
{
    Omnidirectional,
    HalfWaveDipole,
    Custom
};

// Tabulated gain over a regular (azimuth, elevation) grid with bilinear
// interpolation; queries outside the grid clamp to the border.
struct PatternTable
{
    std::vector<double> azimuth_rad;   // strictly increasing
    std::vector<double> elevation_rad; // strictly increasing
    std::vector<double> gain;          // row-major [elevation][azimuth]

    double interpolate(double azimuth, double elevation) const;
};

// Loads a pattern table from columnar text: rows of
//   azimuth_rad  elevation_rad  gain
// forming a complete regular grid ('#' lines are comments).
// Throws std::runtime_error with the offending line on malformed input.
PatternTable load_pattern_table(const std::string &path);

struct AntennaPattern
{
    PatternKind kind = PatternKind::Omnidirectional;
    PatternTable table; // used when kind == Custom

    // Total gain for a local direction. The half-wave dipole is
    // sqrt(1.64) * cos(pi/2 * cos(el)) / sin(el) and returns 0 within
    // 1e-9 of the singular sin(el) = 0 direction.
    double gain(double azimuth, double elevation) const;
};

// Field response split into vertical and horizontal polarization,
// f_v = G * sin(az_local), f_h = G * cos(az_local).
struct PolarizedField
{
    double f_vertical;
    double f_horizontal;
};

// Evaluates the pattern for the direction a - b seen through rotation rot.
PolarizedField field_pattern(const AntennaPattern &pattern, const Vec3 &a, const Vec3 &b,
                             const Mat3 &rot);

// Rigid antenna array translating with constant velocity. Element positions
// are stored in global coordinates at t = 0 (transmit-array-center origin).
struct AntennaArray
{
    std::vector<Vec3> elements; // initial global positions
    Vec3 velocity{};
    double broadside_azimuth = 0.0; // psi_A, rad
    double broadside_elevation = 0.0;
    Mat3 rotation = Mat3::identity(); // LCS orientation for pattern lookups
    AntennaPattern pattern;

    std::size_t size() const { return elements.size(); }

    // Position of element i at time t; throws std::out_of_range for bad i.
    Vec3 element_position(std::size_t i, double t) const;

    // Array centroid at time t.
    Vec3 center(double t) const;
};

// Uniformly spaced linear array centered at `center` along unit direction `axis`.
AntennaArray make_linear_array(std::size_t count, double spacing, const Vec3 &center,
                               const Vec3 &axis);

// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

} // namespace gbsm

#endif
