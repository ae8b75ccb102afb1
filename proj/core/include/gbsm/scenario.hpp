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

#ifndef GBSM_SCENARIO_H
#define GBSM_SCENARIO_H

#include <stdexcept>
#include <string>
#include <vector>

#include "gbsm/cluster.hpp"
#include "gbsm/geometry.hpp"

namespace gbsm
{

// Invalid or inconsistent configuration input (CLI exit code 2).
struct ConfigError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

// File system / serialization failure (CLI exit code 3).
struct IoError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct ArrayConfig
{
    std::size_t count = 2;
    double spacing_m = 0.0; // 0 -> half wavelength
    Vec3 axis{0.0, 1.0, 0.0};
    Vec3 velocity{};
    double broadside_azimuth_rad = 0.0;
    double broadside_elevation_rad = 0.0;
    double rotation_rad[3] = {GBSM_PI / 15.0, GBSM_PI / 15.0, GBSM_PI / 15.0};
    std::string pattern = "omni"; // "omni", "dipole" or "file:<path>"
};

// Full scenario description; serializes losslessly to/from JSON text.
struct ScenarioConfig
{
    std::string name = "custom";
    double carrier_frequency_hz = 2.0e9;
    double center_distance_m = 200.0; // initial Tx-center to Rx-center spacing
    bool two_d = false;
    double rician_k = 0.0;             // linear
    double cross_polarization = 0.0;   // kappa, linear
    ArrayConfig tx_array;
    ArrayConfig rx_array;
    EvolutionParams evolution;
    AngleParams angles;
    double duration_s = 0.1;
    double time_step_s = 0.001;

    double wavelength() const { return SPEED_OF_LIGHT / carrier_frequency_hz; }
};

// Named presets (see docs/config.md for the parameter tables):
//   massive_mimo_3d, hst_3d, v2v_2d, mmwave_3d, mmwave_massive_2d
ScenarioConfig preset(const std::string &name);
std::vector<std::string> preset_names();

enum class Simplification
{
    ConventionalMimo, // caps both arrays at 2 elements
    Fixed2Mobile,     // zero transmit velocity
    ScmLike,          // zero intra-cluster excess delays
    Planar2d          // zero elevations everywhere
};

// Applies one model-reduction switch; idempotent, and independent switches
// commute (each touches a disjoint set of fields).
ScenarioConfig apply_simplification(ScenarioConfig cfg, Simplification s);

Simplification simplification_from_string(const std::string &name);

// JSON (de)serialization; from-JSON validates ranges and unknown keys.
std::string to_json(const ScenarioConfig &cfg);
ScenarioConfig from_json(const std::string &text);

ScenarioConfig load_config(const std::string &path);
void save_config(const ScenarioConfig &cfg, const std::string &path);

// Validates cross-field consistency (positive rates, counts, steps, ...).
// Throws ConfigError with a field-specific message.
void validate(const ScenarioConfig &cfg);

// Builds the concrete antenna array (positions at t = 0) for one side.
// tx_side selects the global center: origin for Tx, (D, 0, 0) for Rx.
AntennaArray build_array(const ScenarioConfig &cfg, bool tx_side);

} // namespace gbsm

#endif
