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

#include "gbsm/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace gbsm
{

using nlohmann::json;

std::vector<std::string> preset_names()
{
    return {"massive_mimo_3d", "hst_3d", "v2v_2d", "mmwave_3d", "mmwave_massive_2d"};
}

// Shared defaults: urban NLOS large-scale statistics, 20 fixed rays collapsed
// onto the cluster delay, dipole transmit / omni receive elements.
static ScenarioConfig base_preset()
{
    ScenarioConfig c;
    c.rician_k = 0.0;
    c.cross_polarization = 0.0;
    c.tx_array.pattern = "dipole";
    c.rx_array.pattern = "omni";
    c.tx_array.broadside_azimuth_rad = GBSM_PI / 3.0;
    c.tx_array.broadside_elevation_rad = GBSM_PI / 4.0;
    c.rx_array.broadside_azimuth_rad = GBSM_PI / 4.0;
    c.rx_array.broadside_elevation_rad = GBSM_PI / 4.0;

    EvolutionParams &e = c.evolution;
    e.generation_rate_per_m = 80.0;
    e.recombination_rate_per_m = 4.0;
    e.moving_cluster_fraction = 0.3;
    e.delay_scalar = 2.3;
    e.log10_delay_spread_mean = -6.63;
    e.log10_delay_spread_std = 0.32;
    e.shadowing_std_db = 3.0;
    e.ray_count_mean = 20.0;
    e.ray_count_std = 0.0;
    e.ray_delay_mean_s = 0.0;
    e.ray_offset_std_rad = 0.017;
    e.rx_distance_mean_m = 25.0;
    e.rx_distance_std_m = 15.0;
    e.tx_distance_mean_m = 30.0;
    e.tx_distance_std_m = 10.0;

    c.angles.aoa_azimuth = {0.78, 0.90};
    c.angles.aoa_elevation = {0.78, 0.18};
    c.angles.aod_azimuth = {1.05, 0.54};
    c.angles.aod_elevation = {0.78, 0.11};
    return c;
}

// Indoor-office large-scale statistics used by the 58 GHz presets.
static void apply_mmwave_large_scale(ScenarioConfig &c)
{
    c.carrier_frequency_hz = 58.0e9;
    c.center_distance_m = 6.0;
    EvolutionParams &e = c.evolution;
    e.delay_scalar = 2.4;
    e.log10_delay_spread_mean = -7.60;
    e.log10_delay_spread_std = 0.19;
    e.ray_count_mean = 15.0;
    e.ray_count_std = std::sqrt(15.0);
    e.ray_delay_mean_s = 3.0e-9;
    e.rx_distance_mean_m = 5.0;
    e.rx_distance_std_m = 3.0;
    e.tx_distance_mean_m = 5.0;
    e.tx_distance_std_m = 3.0;
    e.array_coherence_m = 30.0;
    e.space_coherence_m = 100.0;
    e.virtual_link_coherence_s = 7.0;
    c.angles.aoa_azimuth = {0.78, 0.91};
    c.angles.aoa_elevation = {0.78, 0.18};
    c.angles.aod_azimuth = {1.04, 0.53};
    c.angles.aod_elevation = {0.78, 0.11};
}

ScenarioConfig preset(const std::string &name)
{
    ScenarioConfig c = base_preset();
    c.name = name;
    if (name == "massive_mimo_3d")
    {
        c.carrier_frequency_hz = 2.6e9;
        c.center_distance_m = 200.0;
        c.tx_array.count = 32;
        c.rx_array.count = 32;
        c.cross_polarization = std::pow(10.0, -8.0 / 10.0);
        c.evolution.array_coherence_m = 30.0;
        c.evolution.space_coherence_m = 100.0;
        c.evolution.virtual_link_coherence_s = 30.0;
        c.angles.aoa_azimuth = {0.78, 1.15};
        c.duration_s = 0.1;
        c.time_step_s = 0.01;
    }
    else if (name == "hst_3d")
    {
        c.carrier_frequency_hz = 932.0e6;
        c.center_distance_m = 200.0;
        c.tx_array.count = 2;
        c.rx_array.count = 2;
        c.rx_array.velocity = {60.0, 0.0, 0.0};
        c.evolution.mean_relative_speed_rx = 0.5;
        c.evolution.mean_relative_speed_tx = 0.5;
        c.evolution.array_coherence_m = 50.0;
        c.evolution.space_coherence_m = 100.0;
        c.evolution.virtual_link_coherence_s = 7.0;
        c.angles.aoa_azimuth = {0.78, 0.90};
        c.duration_s = 0.3;
        c.time_step_s = 0.001;
    }
    else if (name == "v2v_2d")
    {
        c.two_d = true;
        c.carrier_frequency_hz = 5.9e9;
        c.center_distance_m = 400.0;
        c.tx_array.count = 2;
        c.rx_array.count = 2;
        c.tx_array.velocity = {25.0, 0.0, 0.0};
        c.rx_array.velocity = {25.0, 0.0, 0.0};
        c.evolution.mean_relative_speed_rx = 0.5;
        c.evolution.mean_relative_speed_tx = 0.5;
        c.evolution.array_coherence_m = 30.0;
        c.evolution.space_coherence_m = 10.0;
        c.evolution.virtual_link_coherence_s = 5.0;
        c.angles.aoa_azimuth = {0.78, 0.91};
        c.angles.aoa_elevation = {0.0, 0.0};
        c.angles.aod_azimuth = {1.04, 0.53};
        c.angles.aod_elevation = {0.0, 0.0};
        c.duration_s = 0.2;
        c.time_step_s = 0.005;
    }
    else if (name == "mmwave_3d")
    {
        apply_mmwave_large_scale(c);
        c.tx_array.count = 2;
        c.rx_array.count = 2;
        c.duration_s = 0.05;
        c.time_step_s = 0.005;
    }
    else if (name == "mmwave_massive_2d")
    {
        apply_mmwave_large_scale(c);
        c.two_d = true;
        c.tx_array.count = 2;
        c.rx_array.count = 32;
        c.angles.aoa_elevation = {0.0, 0.0};
        c.angles.aod_elevation = {0.0, 0.0};
        c.duration_s = 0.05;
        c.time_step_s = 0.005;
    }
    else
    {
        throw ConfigError("unknown preset: " + name);
    }
    return c;
}

ScenarioConfig apply_simplification(ScenarioConfig cfg, Simplification s)
{
    switch (s)
    {
    case Simplification::ConventionalMimo:
        cfg.tx_array.count = std::min<std::size_t>(cfg.tx_array.count, 2);
        cfg.rx_array.count = std::min<std::size_t>(cfg.rx_array.count, 2);
        break;
    case Simplification::Fixed2Mobile:
        cfg.tx_array.velocity = {};
        break;
    case Simplification::ScmLike:
        cfg.evolution.ray_delay_mean_s = 0.0;
        break;
    case Simplification::Planar2d:
        cfg.two_d = true;
        cfg.angles.aoa_elevation = {0.0, 0.0};
        cfg.angles.aod_elevation = {0.0, 0.0};
        cfg.tx_array.velocity.z = 0.0;
        cfg.rx_array.velocity.z = 0.0;
        cfg.tx_array.axis.z = 0.0;
        cfg.rx_array.axis.z = 0.0;
        break;
    }
    return cfg;
}

Simplification simplification_from_string(const std::string &name)
{
    if (name == "conventional_mimo")
        return Simplification::ConventionalMimo;
    if (name == "f2m")
        return Simplification::Fixed2Mobile;
    if (name == "scm_like")
        return Simplification::ScmLike;
    if (name == "planar_2d")
        return Simplification::Planar2d;
    throw ConfigError("unknown simplification switch: " + name);
}

// --- JSON mapping ----------------------------------------------------------

static json vec_to_json(const Vec3 &v) { return json::array({v.x, v.y, v.z}); }

static Vec3 vec_from_json(const json &j, const char *field)
{
    if (!j.is_array() || j.size() != 3)
        throw ConfigError(std::string(field) + ": expected an array of 3 numbers");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

static json array_to_json(const ArrayConfig &a)
{
    return json{{"count", a.count},
                {"spacing_m", a.spacing_m},
                {"axis", vec_to_json(a.axis)},
                {"velocity_mps", vec_to_json(a.velocity)},
                {"broadside_azimuth_rad", a.broadside_azimuth_rad},
                {"broadside_elevation_rad", a.broadside_elevation_rad},
                {"rotation_rad",
                 json::array({a.rotation_rad[0], a.rotation_rad[1], a.rotation_rad[2]})},
                {"pattern", a.pattern}};
}

template <typename T>
static void read_field(const json &j, const char *key, T &out)
{
    if (j.contains(key))
        out = j.at(key).get<T>();
}

static ArrayConfig array_from_json(const json &j, const char *side)
{
    ArrayConfig a;
    read_field(j, "count", a.count);
    read_field(j, "spacing_m", a.spacing_m);
    if (j.contains("axis"))
        a.axis = vec_from_json(j.at("axis"), side);
    if (j.contains("velocity_mps"))
        a.velocity = vec_from_json(j.at("velocity_mps"), side);
    read_field(j, "broadside_azimuth_rad", a.broadside_azimuth_rad);
    read_field(j, "broadside_elevation_rad", a.broadside_elevation_rad);
    if (j.contains("rotation_rad"))
    {
        const json &r = j.at("rotation_rad");
        if (!r.is_array() || r.size() != 3)
            throw ConfigError(std::string(side) + ".rotation_rad: expected 3 numbers");
        for (int i = 0; i < 3; ++i)
            a.rotation_rad[i] = r[i].get<double>();
    }
    read_field(j, "pattern", a.pattern);
    return a;
}

static json angles_to_json(const AngleParams &p)
{
    const auto s = [](const AngleSpread &a) {
        return json{{"mean_rad", a.mean_rad}, {"std_rad", a.std_rad}};
    };
    return json{{"aoa_azimuth", s(p.aoa_azimuth)},
                {"aoa_elevation", s(p.aoa_elevation)},
                {"aod_azimuth", s(p.aod_azimuth)},
                {"aod_elevation", s(p.aod_elevation)}};
}

static AngleParams angles_from_json(const json &j)
{
    const auto s = [&j](const char *key, AngleSpread def) {
        if (!j.contains(key))
            return def;
        AngleSpread a = def;
        read_field(j.at(key), "mean_rad", a.mean_rad);
        read_field(j.at(key), "std_rad", a.std_rad);
        return a;
    };
    AngleParams p;
    p.aoa_azimuth = s("aoa_azimuth", p.aoa_azimuth);
    p.aoa_elevation = s("aoa_elevation", p.aoa_elevation);
    p.aod_azimuth = s("aod_azimuth", p.aod_azimuth);
    p.aod_elevation = s("aod_elevation", p.aod_elevation);
    return p;
}

static json evolution_to_json(const EvolutionParams &e)
{
    return json{{"generation_rate_per_m", e.generation_rate_per_m},
                {"recombination_rate_per_m", e.recombination_rate_per_m},
                {"moving_cluster_fraction", e.moving_cluster_fraction},
                {"mean_relative_speed_rx_mps", e.mean_relative_speed_rx},
                {"mean_relative_speed_tx_mps", e.mean_relative_speed_tx},
                {"array_coherence_m", e.array_coherence_m},
                {"space_coherence_m", e.space_coherence_m},
                {"virtual_link_coherence_s", e.virtual_link_coherence_s},
                {"delay_scalar", e.delay_scalar},
                {"log10_delay_spread_mean", e.log10_delay_spread_mean},
                {"log10_delay_spread_std", e.log10_delay_spread_std},
                {"shadowing_std_db", e.shadowing_std_db},
                {"ray_count_mean", e.ray_count_mean},
                {"ray_count_std", e.ray_count_std},
                {"ray_delay_mean_s", e.ray_delay_mean_s},
                {"ray_offset_std_rad", e.ray_offset_std_rad},
                {"rx_distance_mean_m", e.rx_distance_mean_m},
                {"rx_distance_std_m", e.rx_distance_std_m},
                {"tx_distance_mean_m", e.tx_distance_mean_m},
                {"tx_distance_std_m", e.tx_distance_std_m},
                {"fade_ramp_s", e.fade_ramp_s},
                {"power_decay_exponent", e.power_decay_exponent},
                {"array_visibility_evolution", e.array_visibility_evolution},
                {"initial_cluster_count", e.initial_cluster_count}};
}

static EvolutionParams evolution_from_json(const json &j)
{
    EvolutionParams e;
    read_field(j, "generation_rate_per_m", e.generation_rate_per_m);
    read_field(j, "recombination_rate_per_m", e.recombination_rate_per_m);
    read_field(j, "moving_cluster_fraction", e.moving_cluster_fraction);
    read_field(j, "mean_relative_speed_rx_mps", e.mean_relative_speed_rx);
    read_field(j, "mean_relative_speed_tx_mps", e.mean_relative_speed_tx);
    read_field(j, "array_coherence_m", e.array_coherence_m);
    read_field(j, "space_coherence_m", e.space_coherence_m);
    read_field(j, "virtual_link_coherence_s", e.virtual_link_coherence_s);
    read_field(j, "delay_scalar", e.delay_scalar);
    read_field(j, "log10_delay_spread_mean", e.log10_delay_spread_mean);
    read_field(j, "log10_delay_spread_std", e.log10_delay_spread_std);
    read_field(j, "shadowing_std_db", e.shadowing_std_db);
    read_field(j, "ray_count_mean", e.ray_count_mean);
    read_field(j, "ray_count_std", e.ray_count_std);
    read_field(j, "ray_delay_mean_s", e.ray_delay_mean_s);
    read_field(j, "ray_offset_std_rad", e.ray_offset_std_rad);
    read_field(j, "rx_distance_mean_m", e.rx_distance_mean_m);
    read_field(j, "rx_distance_std_m", e.rx_distance_std_m);
    read_field(j, "tx_distance_mean_m", e.tx_distance_mean_m);
    read_field(j, "tx_distance_std_m", e.tx_distance_std_m);
    read_field(j, "fade_ramp_s", e.fade_ramp_s);
    read_field(j, "power_decay_exponent", e.power_decay_exponent);
    read_field(j, "array_visibility_evolution", e.array_visibility_evolution);
    read_field(j, "initial_cluster_count", e.initial_cluster_count);
    return e;
}

std::string to_json(const ScenarioConfig &c)
{
    json j{{"name", c.name},
           {"carrier_frequency_hz", c.carrier_frequency_hz},
           {"center_distance_m", c.center_distance_m},
           {"two_d", c.two_d},
           {"rician_k", c.rician_k},
           {"cross_polarization", c.cross_polarization},
           {"tx_array", array_to_json(c.tx_array)},
           {"rx_array", array_to_json(c.rx_array)},
           {"evolution", evolution_to_json(c.evolution)},
           {"angles", angles_to_json(c.angles)},
           {"duration_s", c.duration_s},
           {"time_step_s", c.time_step_s}};
    return j.dump(2) + "\n";
}

ScenarioConfig from_json(const std::string &text)
{
    json j;
    try
    {
        j = json::parse(text);
    }
    catch (const json::parse_error &e)
    {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object())
        throw ConfigError("config must be a JSON object");

    static const std::set<std::string> known{
        "name",       "carrier_frequency_hz", "center_distance_m", "two_d",
        "rician_k",   "cross_polarization",   "tx_array",          "rx_array",
        "evolution",  "angles",               "duration_s",        "time_step_s"};
    for (const auto &item : j.items())
        if (!known.count(item.key()))
            throw ConfigError("unknown config key: " + item.key());

    ScenarioConfig c;
    try
    {
        read_field(j, "name", c.name);
        read_field(j, "carrier_frequency_hz", c.carrier_frequency_hz);
        read_field(j, "center_distance_m", c.center_distance_m);
        read_field(j, "two_d", c.two_d);
        read_field(j, "rician_k", c.rician_k);
        read_field(j, "cross_polarization", c.cross_polarization);
        if (j.contains("tx_array"))
            c.tx_array = array_from_json(j.at("tx_array"), "tx_array");
        if (j.contains("rx_array"))
            c.rx_array = array_from_json(j.at("rx_array"), "rx_array");
        if (j.contains("evolution"))
            c.evolution = evolution_from_json(j.at("evolution"));
        if (j.contains("angles"))
            c.angles = angles_from_json(j.at("angles"));
        read_field(j, "duration_s", c.duration_s);
        read_field(j, "time_step_s", c.time_step_s);
    }
    catch (const json::exception &e)
    {
        throw ConfigError(std::string("config field error: ") + e.what());
    }
    validate(c);
    return c;
}

ScenarioConfig load_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

void save_config(const ScenarioConfig &cfg, const std::string &path)
{
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write config file: " + path);
    out << to_json(cfg);
}

void validate(const ScenarioConfig &c)
{
    const auto require = [](bool ok, const char *msg) {
        if (!ok)
            throw ConfigError(msg);
    };
    require(c.carrier_frequency_hz > 0.0, "carrier_frequency_hz must be positive");
    require(c.center_distance_m > 0.0, "center_distance_m must be positive");
    require(c.rician_k >= 0.0, "rician_k must be non-negative");
    require(c.cross_polarization >= 0.0, "cross_polarization must be non-negative");
    require(c.tx_array.count >= 1, "tx_array.count must be at least 1");
    require(c.rx_array.count >= 1, "rx_array.count must be at least 1");
    require(c.duration_s > 0.0, "duration_s must be positive");
    require(c.time_step_s > 0.0, "time_step_s must be positive");

    const EvolutionParams &e = c.evolution;
    require(e.generation_rate_per_m > 0.0, "evolution.generation_rate_per_m must be positive");
    require(e.recombination_rate_per_m > 0.0,
            "evolution.recombination_rate_per_m must be positive");
    require(e.moving_cluster_fraction > 0.0 && e.moving_cluster_fraction <= 1.0,
            "evolution.moving_cluster_fraction must be in (0, 1]");
    require(e.mean_relative_speed_rx >= 0.0 && e.mean_relative_speed_tx >= 0.0,
            "evolution mean relative speeds must be non-negative");
    require(e.array_coherence_m > 0.0, "evolution.array_coherence_m must be positive");
    require(e.space_coherence_m > 0.0, "evolution.space_coherence_m must be positive");
    require(e.virtual_link_coherence_s > 0.0,
            "evolution.virtual_link_coherence_s must be positive");
    require(e.delay_scalar > 1.0, "evolution.delay_scalar must exceed 1");
    require(e.shadowing_std_db >= 0.0, "evolution.shadowing_std_db must be non-negative");
    require(e.ray_count_mean >= 1.0, "evolution.ray_count_mean must be at least 1");
    require(e.ray_count_std >= 0.0, "evolution.ray_count_std must be non-negative");
    require(e.ray_delay_mean_s >= 0.0, "evolution.ray_delay_mean_s must be non-negative");
    require(e.ray_offset_std_rad >= 0.0, "evolution.ray_offset_std_rad must be non-negative");
    require(e.rx_distance_mean_m > 0.0 && e.tx_distance_mean_m > 0.0,
            "evolution bounce-distance means must be positive");
    require(e.rx_distance_std_m > 0.0 && e.tx_distance_std_m > 0.0,
            "evolution bounce-distance stds must be positive");
    require(e.fade_ramp_s >= 0.0, "evolution.fade_ramp_s must be non-negative");
    require(e.power_decay_exponent >= 0.0,
            "evolution.power_decay_exponent must be non-negative");
}

AntennaArray build_array(const ScenarioConfig &cfg, bool tx_side)
{
    const ArrayConfig &a = tx_side ? cfg.tx_array : cfg.rx_array;
    const double spacing = a.spacing_m > 0.0 ? a.spacing_m : 0.5 * cfg.wavelength();
    const Vec3 center = tx_side ? Vec3{} : Vec3{cfg.center_distance_m, 0.0, 0.0};

    Vec3 axis = a.axis;
    if (cfg.two_d)
        axis.z = 0.0;
    if (axis.norm() <= 0.0)
        throw ConfigError("array axis must be non-zero (after 2D projection)");

    AntennaArray arr = make_linear_array(a.count, spacing, center, axis);
    arr.velocity = a.velocity;
    if (cfg.two_d)
        arr.velocity.z = 0.0;
    arr.broadside_azimuth = a.broadside_azimuth_rad;
    arr.broadside_elevation = a.broadside_elevation_rad;
    arr.rotation = rotation_matrix(a.rotation_rad[0], a.rotation_rad[1], a.rotation_rad[2]);

    if (a.pattern == "omni")
        arr.pattern.kind = PatternKind::Omnidirectional;
    else if (a.pattern == "dipole")
        arr.pattern.kind = PatternKind::HalfWaveDipole;
    else if (a.pattern.rfind("file:", 0) == 0)
    {
        arr.pattern.kind = PatternKind::Custom;
        try
        {
            arr.pattern.table = load_pattern_table(a.pattern.substr(5));
        }
        catch (const std::runtime_error &e)
        {
            throw ConfigError(e.what());
        }
    }
    else
        throw ConfigError("unknown antenna pattern: " + a.pattern);
    return arr;
}

} // namespace gbsm
