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
//
// Command-line entry point: simulate, stats, fit, reproduce, presets.
// Exit codes: 0 success, 2 configuration error, 3 I/O error,
// 4 fit threshold not met (the report is still emitted).

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gbsm/estimation.hpp"
#include "gbsm/io.hpp"
#include "gbsm/pipelines.hpp"

namespace fs = std::filesystem;

namespace
{

using namespace gbsm;

std::vector<uint64_t> parse_seeds(const std::string &spec)
{
    std::vector<uint64_t> seeds;
    std::size_t pos = 0;
    while (pos <= spec.size())
    {
        const std::size_t comma = spec.find(',', pos);
        const std::string token =
            spec.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (token.empty())
            throw ConfigError("empty token in seed list '" + spec + "'");

        try
        {
            const std::size_t dash = token.find('-');
            if (dash == std::string::npos)
            {
                seeds.push_back(std::stoull(token));
            }
            else
            {
                const uint64_t lo = std::stoull(token.substr(0, dash));
                const uint64_t hi = std::stoull(token.substr(dash + 1));
                if (hi < lo)
                    throw ConfigError("descending seed range '" + token + "'");
                for (uint64_t s = lo; s <= hi; ++s)
                    seeds.push_back(s);
            }
        }
        catch (const std::invalid_argument &)
        {
            throw ConfigError("malformed seed token '" + token + "'");
        }
        catch (const std::out_of_range &)
        {
            throw ConfigError("seed out of range in token '" + token + "'");
        }

        if (comma == std::string::npos)
            break;
        pos = comma + 1;
    }
    if (seeds.empty())
        throw ConfigError("empty seed list");
    return seeds;
}

std::vector<uint64_t> sequential_seeds(uint64_t count)
{
    std::vector<uint64_t> seeds(count);
    for (uint64_t i = 0; i < count; ++i)
        seeds[i] = i + 1;
    return seeds;
}

ScenarioConfig resolve_config(const std::string &preset_name, const std::string &config_path,
                              double duration_s, double time_step_s)
{
    if (preset_name.empty() == config_path.empty())
        throw ConfigError("exactly one of --preset or --config is required");

    ScenarioConfig cfg =
        preset_name.empty() ? load_config(config_path) : preset(preset_name);
    if (duration_s > 0.0)
        cfg.duration_s = duration_s;
    if (time_step_s > 0.0)
        cfg.time_step_s = time_step_s;
    validate(cfg);
    return cfg;
}

void ensure_out_dir(const fs::path &dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

ManifestFile emit_curve(const fs::path &dir, const std::string &filename, const Curve &curve)
{
    const fs::path path = dir / filename;
    save_curve(path.string(), curve);
    return ManifestFile{filename, "curve", fnv1a64_file(path.string())};
}

std::vector<std::pair<std::string, std::string>> base_meta(const ScenarioConfig &cfg,
                                                           const std::vector<uint64_t> &seeds)
{
    std::vector<std::pair<std::string, std::string>> meta;
    meta.emplace_back("scenario", cfg.name);
    if (!seeds.empty())
    {
        std::string list = std::to_string(seeds.front());
        if (seeds.size() > 1)
            list += "..." + std::to_string(seeds.back());
        meta.emplace_back("seeds", list + " (" + std::to_string(seeds.size()) + ")");
    }
    return meta;
}

double sample_median(const std::vector<double> &sorted)
{
    if (sorted.empty())
        throw std::invalid_argument("sample_median: no samples");
    const std::size_t rank = (sorted.size() + 1) / 2; // nearest-rank 50%
    return sorted[rank - 1];
}

// --- simulate ----------------------------------------------------------------

int cmd_simulate(const ScenarioConfig &cfg, const std::vector<uint64_t> &seeds,
                 const fs::path &out, bool text, std::size_t workers)
{
    ensure_out_dir(out);

    std::vector<std::vector<ManifestFile>> slots(seeds.size());
    parallel_for_items(seeds.size(), workers, [&](std::size_t i) {
        const std::string name = "snapshots_seed" + std::to_string(seeds[i]) + ".bin";
        const fs::path path = out / name;
        SnapshotWriter writer(path.string());
        run_realization(cfg, seeds[i], SnapshotOptions{},
                        [&](const CirSnapshot &snap) { writer.write(snap); });
        writer.close();
        slots[i].push_back({name, "snapshots", fnv1a64_file(path.string())});

        if (text)
        {
            const std::string text_name =
                "snapshots_seed" + std::to_string(seeds[i]) + ".txt";
            const fs::path text_path = out / text_name;
            write_snapshots_text(text_path.string(), read_snapshots(path.string()));
            slots[i].push_back({text_name, "snapshots-text", fnv1a64_file(text_path.string())});
        }
    });

    RunManifest manifest;
    manifest.scenario = cfg.name;
    manifest.config_json = to_json(cfg);
    manifest.seeds = seeds;
    manifest.duration_s = cfg.duration_s;
    manifest.time_step_s = cfg.time_step_s;
    manifest.out_dir = out.string();
    for (const auto &slot : slots)
        manifest.files.insert(manifest.files.end(), slot.begin(), slot.end());
    save_manifest((out / "manifest.json").string(), manifest);

    std::cout << "simulate: wrote " << manifest.files.size() << " dump file(s) and manifest to "
              << out.string() << "\n";
    return 0;
}

// --- stats -------------------------------------------------------------------

struct StatsFlags
{
    double freq_step_hz = 1e4;
    std::size_t n_freq = 501;
    std::size_t max_lag = 200;
    std::size_t stride = 10;
};

std::vector<std::string> split_statistics(const std::string &csv)
{
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= csv.size())
    {
        const std::size_t comma = csv.find(',', pos);
        const std::string token =
            csv.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (!token.empty())
            out.push_back(token);
        if (comma == std::string::npos)
            break;
        pos = comma + 1;
    }
    return out;
}

Curve stats_acf(const std::vector<std::vector<CirSnapshot>> &ensemble, const StatsFlags &flags)
{
    std::vector<TransferGrid> grids;
    grids.reserve(ensemble.size());
    std::size_t min_nt = SIZE_MAX;
    const std::vector<std::pair<uint32_t, uint32_t>> pair = {{0, 0}};
    for (const auto &snaps : ensemble)
    {
        grids.push_back(transfer_grid(snaps, {0.0}, pair));
        min_nt = std::min(min_nt, grids.back().time_s.size());
    }
    if (min_nt < 2)
        throw ConfigError("acf needs at least two snapshots per dump");

    const std::size_t max_lag = std::min(flags.max_lag, min_nt - 1);
    const std::vector<cdouble> rho = acf_curve(grids, 0, 0, 0, 0, max_lag);
    const double base = std::abs(rho[0]);
    if (base <= 0.0)
        throw ConfigError("acf normalization failed: zero power at zero lag");

    Curve curve;
    curve.statistic = "acf";
    for (std::size_t k = 0; k <= max_lag; ++k)
    {
        curve.x.push_back(grids[0].time_s[k] - grids[0].time_s[0]);
        curve.y.push_back(std::abs(rho[k]) / base);
    }
    return curve;
}

Curve stats_space_ccf(const std::vector<std::vector<CirSnapshot>> &ensemble)
{
    if (ensemble.empty() || ensemble.front().empty())
        throw ConfigError("space-ccf needs at least one snapshot");
    const CirSnapshot &first = ensemble.front().front();
    if (first.taps.size() != static_cast<std::size_t>(first.n_rx) * first.n_tx ||
        first.n_rx < 2)
        throw ConfigError("space-ccf needs full per-pair dumps of a multi-element receiver");

    const std::size_t n_sep = first.n_rx;
    std::vector<cdouble> num(n_sep, cdouble{0.0, 0.0});
    std::vector<double> den0(n_sep, 0.0);
    std::vector<double> dend(n_sep, 0.0);

    for (const auto &snaps : ensemble)
    {
        const CirSnapshot &snap = snaps.front();
        std::vector<cdouble> h(n_sep, cdouble{0.0, 0.0});
        for (std::size_t d = 0; d < n_sep; ++d)
            for (const Tap &tap : snap.pair(d, 0))
                h[d] += tap.gain;
        for (std::size_t d = 0; d < n_sep; ++d)
        {
            num[d] += std::conj(h[0]) * h[d];
            den0[d] += std::norm(h[0]);
            dend[d] += std::norm(h[d]);
        }
    }

    Curve curve;
    curve.statistic = "space-ccf";
    for (std::size_t d = 0; d < n_sep; ++d)
    {
        const double denom = std::sqrt(den0[d] * dend[d]);
        curve.x.push_back(static_cast<double>(d));
        curve.y.push_back(denom > 0.0 ? std::abs(num[d]) / denom : 0.0);
    }
    return curve;
}

Curve stats_stationary_interval(const std::vector<std::vector<CirSnapshot>> &ensemble,
                                const StatsFlags &flags)
{
    std::vector<double> pooled;
    std::size_t censored = 0;
    for (const auto &snaps : ensemble)
    {
        std::vector<Pdp> pdps;
        pdps.reserve(snaps.size());
        for (const CirSnapshot &snap : snaps)
            pdps.push_back(pdp(snap));
        if (pdps.size() < 2)
            throw ConfigError("stationary-interval-ccdf needs at least two snapshots per dump");

        const double span = pdps.back().time - pdps.front().time;
        const double min_window = std::min(0.1, 0.5 * span);
        for (std::size_t start = 0; start < pdps.size(); start += flags.stride)
        {
            if (pdps.back().time - pdps[start].time < min_window)
                break;
            const StationaryInterval si = stationary_interval(pdps, start);
            pooled.push_back(si.interval_s);
            if (si.censored)
                ++censored;
        }
    }
    if (pooled.empty())
        throw ConfigError("stationary-interval-ccdf: dumps too short for any start index");

    const double fraction = static_cast<double>(censored) / static_cast<double>(pooled.size());
    CurveData data = empirical_ccdf(std::move(pooled));

    Curve curve;
    curve.statistic = "stationary-interval-ccdf";
    curve.meta.emplace_back("censored_fraction", format_double(fraction));
    curve.meta.emplace_back("median_s", format_double(sample_median(data.x)));
    curve.x = std::move(data.x);
    curve.y = std::move(data.y);
    return curve;
}

Curve stats_coherence_bandwidth(const std::vector<std::vector<CirSnapshot>> &ensemble,
                                const StatsFlags &flags)
{
    std::vector<double> freqs(flags.n_freq);
    for (std::size_t f = 0; f < flags.n_freq; ++f)
        freqs[f] = static_cast<double>(f) * flags.freq_step_hz;
    const std::size_t max_lag = std::min(flags.max_lag, flags.n_freq - 1);
    const std::vector<std::pair<uint32_t, uint32_t>> pair = {{0, 0}};

    std::vector<double> pooled;
    std::size_t censored = 0;
    for (const auto &snaps : ensemble)
    {
        std::vector<CirSnapshot> sampled;
        for (std::size_t i = 0; i < snaps.size(); i += flags.stride)
            sampled.push_back(snaps[i]);
        const TransferGrid grid = transfer_grid(sampled, freqs, pair);
        for (std::size_t t = 0; t < sampled.size(); ++t)
        {
            const CoherenceBandwidth bc =
                coherence_bandwidth_90(snapshot_fcf(grid, t, 0, 0, max_lag), flags.freq_step_hz);
            pooled.push_back(bc.bandwidth_hz);
            if (bc.censored)
                ++censored;
        }
    }

    const double fraction = static_cast<double>(censored) / static_cast<double>(pooled.size());
    CurveData data = empirical_cdf(std::move(pooled));

    Curve curve;
    curve.statistic = "coherence-bandwidth-cdf";
    curve.meta.emplace_back("censored_fraction", format_double(fraction));
    curve.meta.emplace_back("median_hz", format_double(sample_median(data.x)));
    curve.x = std::move(data.x);
    curve.y = std::move(data.y);
    return curve;
}

Curve stats_rms_delay(const std::vector<std::vector<CirSnapshot>> &ensemble, std::size_t stride)
{
    std::vector<double> spreads;
    for (const auto &snaps : ensemble)
        for (std::size_t i = 0; i < snaps.size(); i += stride)
        {
            const Pdp profile = pdp(snaps[i]);
            if (profile.total_power() > 0.0)
                spreads.push_back(rms_delay_spread(profile));
        }

    CurveData data = empirical_ccdf(std::move(spreads));
    Curve curve;
    curve.statistic = "rms-delay-ccdf";
    curve.meta.emplace_back("median_s", format_double(sample_median(data.x)));
    curve.x = std::move(data.x);
    curve.y = std::move(data.y);
    return curve;
}

ManifestFile emit_aps(const fs::path &dir, const ScenarioConfig &cfg, uint64_t seed)
{
    ApsOptions opts;
    opts.seed = seed;
    const ApsGrid grid = aps_study(cfg, opts);

    const std::string filename = "aps.txt";
    const fs::path path = dir / filename;
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    out << "# statistic: aps\n";
    out << "# scenario: " << cfg.name << "\n";
    out << "# seed: " << seed << "\n";
    out << "# columns: window_center_element angle_rad power\n";
    for (std::size_t w = 0; w < grid.window_center.size(); ++w)
        for (std::size_t g = 0; g < grid.angle_rad.size(); ++g)
            out << format_double(grid.window_center[w]) << ' '
                << format_double(grid.angle_rad[g]) << ' '
                << format_double(grid.power[w * grid.angle_rad.size() + g]) << '\n';
    if (!out)
        throw IoError("write failed on " + path.string());
    out.close();
    return ManifestFile{filename, "grid", fnv1a64_file(path.string())};
}

int cmd_stats(const std::string &manifest_path, const std::string &stats_csv,
              const std::string &out_override, const StatsFlags &flags)
{
    const RunManifest src = load_manifest(manifest_path);
    const fs::path base_dir = fs::path(manifest_path).parent_path();
    const fs::path out = out_override.empty() ? base_dir : fs::path(out_override);
    ensure_out_dir(out);

    const ScenarioConfig cfg = from_json(src.config_json);
    const std::vector<std::string> wanted = split_statistics(stats_csv);

    std::vector<std::vector<CirSnapshot>> ensemble;
    if (!wanted.empty())
    {
        for (const ManifestFile &f : src.files)
            if (f.kind == "snapshots")
                ensemble.push_back(read_snapshots((base_dir / f.path).string()));
        if (ensemble.empty())
            throw ConfigError("manifest lists no snapshot dumps");
    }

    RunManifest manifest;
    manifest.scenario = src.scenario;
    manifest.config_json = src.config_json;
    manifest.seeds = src.seeds;
    manifest.duration_s = src.duration_s;
    manifest.time_step_s = src.time_step_s;
    manifest.statistics = wanted;
    manifest.out_dir = out.string();

    for (const std::string &name : wanted)
    {
        if (name == "acf")
            manifest.files.push_back(emit_curve(out, "acf.txt", stats_acf(ensemble, flags)));
        else if (name == "space-ccf")
            manifest.files.push_back(emit_curve(out, "space_ccf.txt", stats_space_ccf(ensemble)));
        else if (name == "stationary-interval-ccdf")
            manifest.files.push_back(emit_curve(out, "stationary_interval_ccdf.txt",
                                                stats_stationary_interval(ensemble, flags)));
        else if (name == "coherence-bandwidth-cdf")
            manifest.files.push_back(emit_curve(out, "coherence_bandwidth_cdf.txt",
                                                stats_coherence_bandwidth(ensemble, flags)));
        else if (name == "rms-delay-ccdf")
            manifest.files.push_back(
                emit_curve(out, "rms_delay_spread_ccdf.txt",
                           stats_rms_delay(ensemble, flags.stride)));
        else if (name == "aps")
            manifest.files.push_back(emit_aps(out, cfg, src.seeds.empty() ? 1 : src.seeds.front()));
        else
            throw ConfigError("unknown statistic '" + name + "'");
    }

    save_manifest((out / "stats_manifest.json").string(), manifest);
    std::cout << "stats: wrote " << manifest.files.size() << " curve file(s) and manifest to "
              << out.string() << "\n";
    return 0;
}

// --- fit ----------------------------------------------------------------------

int cmd_fit(const std::string &target_path, const std::string &grid_path,
            const ScenarioConfig &base, const std::string &seeds_spec, const fs::path &out,
            std::size_t workers)
{
    const TargetCurve target = load_target(target_path);

    std::ifstream grid_in(grid_path);
    if (!grid_in)
        throw IoError("cannot open " + grid_path);
    nlohmann::json gj;
    try
    {
        grid_in >> gj;
    }
    catch (const nlohmann::json::exception &e)
    {
        throw IoError(grid_path + ": " + e.what());
    }

    ParameterGrid grid;
    grid.base = base;
    try
    {
        grid.epsilon_threshold = gj.at("epsilon_threshold").get<double>();
        for (const auto &[key, value] : gj.at("parameters").items())
        {
            grid.names.push_back(key);
            grid.candidates.push_back(value.get<std::vector<double>>());
        }
        if (!seeds_spec.empty())
            grid.seeds = parse_seeds(seeds_spec);
        else if (gj.contains("seeds"))
            grid.seeds = gj.at("seeds").get<std::vector<uint64_t>>();
        else if (gj.contains("realizations"))
            grid.seeds = sequential_seeds(gj.at("realizations").get<uint64_t>());
        else
            grid.seeds = sequential_seeds(8);
    }
    catch (const nlohmann::json::exception &e)
    {
        throw ConfigError(grid_path + ": " + e.what());
    }
    grid.options.stationary.workers = workers;
    grid.options.coherence.workers = workers;
    grid.options.delay_spread.workers = workers;
    grid.options.space.workers = workers;

    const FitResult result = grid_search(grid, target);

    ensure_out_dir(out);
    const fs::path report_path = out / "fit_report.txt";
    {
        std::ofstream report(report_path, std::ios::trunc);
        if (!report)
            throw IoError("cannot open " + report_path.string() + " for writing");
        report << "# statistic: " << to_string(target.kind) << '\n';
        report << "# target: " << target.source << '\n';
        report << "# epsilon_threshold: " << format_double(grid.epsilon_threshold) << '\n';
        report << "# best_epsilon: " << format_double(result.best_epsilon) << '\n';
        report << "# threshold_met: " << (result.threshold_met ? "yes" : "no") << '\n';
        report << "# parameters:";
        for (const std::string &name : result.names)
            report << ' ' << name;
        report << '\n';
        report << "# best:";
        for (double v : result.best)
            report << ' ' << format_double(v);
        report << '\n';
        report << "# columns:";
        for (const std::string &name : result.names)
            report << ' ' << name;
        report << " epsilon\n";
        for (const FitRow &row : result.table)
        {
            for (double v : row.values)
                report << format_double(v) << ' ';
            report << format_double(row.epsilon) << '\n';
        }
        if (!report)
            throw IoError("write failed on " + report_path.string());
    }

    RunManifest manifest;
    manifest.scenario = base.name;
    manifest.config_json = to_json(base);
    manifest.seeds = grid.seeds;
    manifest.duration_s = base.duration_s;
    manifest.time_step_s = base.time_step_s;
    manifest.statistics = {to_string(target.kind)};
    manifest.out_dir = out.string();
    manifest.files.push_back(
        {"fit_report.txt", "report", fnv1a64_file(report_path.string())});
    save_manifest((out / "fit_manifest.json").string(), manifest);

    std::cout << "fit: best epsilon " << format_double(result.best_epsilon) << " at";
    for (std::size_t i = 0; i < result.names.size(); ++i)
        std::cout << ' ' << result.names[i] << '=' << format_double(result.best[i]);
    std::cout << (result.threshold_met ? " (threshold met)" : " (threshold NOT met)") << "\n";
    return result.threshold_met ? 0 : 4;
}

// --- reproduce ------------------------------------------------------------------

RunManifest reproduce_manifest(const ScenarioConfig &cfg, const std::vector<uint64_t> &seeds,
                               const std::string &statistic, const fs::path &out)
{
    RunManifest manifest;
    manifest.scenario = cfg.name;
    manifest.config_json = to_json(cfg);
    manifest.seeds = seeds;
    manifest.duration_s = cfg.duration_s;
    manifest.time_step_s = cfg.time_step_s;
    manifest.statistics = {statistic};
    manifest.out_dir = out.string();
    return manifest;
}

int cmd_reproduce(const std::string &figure, const fs::path &out,
                  const std::string &seeds_spec, std::size_t workers)
{
    ensure_out_dir(out);

    if (figure == "fig4")
    {
        const ScenarioConfig cfg = acf_reference_config();
        AcfStudyOptions opts;
        if (!seeds_spec.empty())
            opts.seed = parse_seeds(seeds_spec).front();
        const AcfStudyResult res = acf_study(cfg, opts);

        RunManifest manifest = reproduce_manifest(cfg, {opts.seed}, "acf-per-cluster", out);
        for (std::size_t ci = 0; ci < res.cluster_ids.size(); ++ci)
        {
            for (const bool analytical : {true, false})
            {
                Curve curve;
                curve.statistic = "acf-per-cluster";
                curve.meta.emplace_back("scenario", cfg.name);
                curve.meta.emplace_back("cluster", std::to_string(ci + 1));
                curve.meta.emplace_back("kind", analytical ? "analytical" : "simulated");
                curve.meta.emplace_back("seed", std::to_string(opts.seed));
                curve.meta.emplace_back("members", std::to_string(opts.members));
                curve.x = res.lag_s;
                curve.y = analytical ? res.analytical[ci] : res.simulated[ci];
                const std::string filename = "acf_cluster" + std::to_string(ci + 1) +
                                             (analytical ? "_analytical" : "_simulated") +
                                             ".txt";
                manifest.files.push_back(emit_curve(out, filename, curve));
            }
        }
        save_manifest((out / "manifest.json").string(), manifest);
        std::cout << "reproduce fig4: " << res.cluster_ids.size()
                  << " cluster(s), curves written to " << out.string() << "\n";
        return 0;
    }

    if (figure == "fig5")
    {
        const ScenarioConfig cfg = preset("hst_3d");
        const std::vector<uint64_t> seeds =
            seeds_spec.empty() ? sequential_seeds(200) : parse_seeds(seeds_spec);
        StationaryIntervalOptions opts;
        opts.workers = workers;
        const CurveData data = stationary_interval_ccdf(cfg, seeds, opts);

        Curve curve;
        curve.statistic = "stationary-interval-ccdf";
        curve.meta = base_meta(cfg, seeds);
        curve.meta.emplace_back("censored_fraction", format_double(data.censored_fraction));
        curve.meta.emplace_back("median_s", format_double(sample_median(data.x)));
        curve.x = data.x;
        curve.y = data.y;

        RunManifest manifest = reproduce_manifest(cfg, seeds, curve.statistic, out);
        manifest.files.push_back(emit_curve(out, "stationary_interval_ccdf.txt", curve));
        save_manifest((out / "manifest.json").string(), manifest);
        std::cout << "reproduce fig5: median interval "
                  << format_double(sample_median(data.x)) << " s over " << data.x.size()
                  << " samples\n";
        return 0;
    }

    if (figure == "fig6")
    {
        const ScenarioConfig cfg = preset("v2v_2d");
        const std::vector<uint64_t> seeds =
            seeds_spec.empty() ? sequential_seeds(100) : parse_seeds(seeds_spec);
        CoherenceBandwidthOptions opts;
        opts.workers = workers;
        const CurveData data = coherence_bandwidth_cdf(cfg, seeds, opts);

        Curve curve;
        curve.statistic = "coherence-bandwidth-cdf";
        curve.meta = base_meta(cfg, seeds);
        curve.meta.emplace_back("censored_fraction", format_double(data.censored_fraction));
        curve.meta.emplace_back("median_hz", format_double(sample_median(data.x)));
        curve.x = data.x;
        curve.y = data.y;

        RunManifest manifest = reproduce_manifest(cfg, seeds, curve.statistic, out);
        manifest.files.push_back(emit_curve(out, "coherence_bandwidth_cdf.txt", curve));
        save_manifest((out / "manifest.json").string(), manifest);
        std::cout << "reproduce fig6: median coherence bandwidth "
                  << format_double(sample_median(data.x)) << " Hz over " << data.x.size()
                  << " samples\n";
        return 0;
    }

    if (figure == "fig8")
    {
        const ScenarioConfig cfg = preset("mmwave_3d");
        const std::vector<uint64_t> seeds =
            seeds_spec.empty() ? sequential_seeds(400) : parse_seeds(seeds_spec);
        DelaySpreadOptions opts;
        opts.workers = workers;
        const CurveData data = rms_delay_spread_ccdf(cfg, seeds, opts);

        Curve curve;
        curve.statistic = "rms-delay-ccdf";
        curve.meta = base_meta(cfg, seeds);
        curve.meta.emplace_back("median_s", format_double(sample_median(data.x)));
        curve.x = data.x;
        curve.y = data.y;

        RunManifest manifest = reproduce_manifest(cfg, seeds, curve.statistic, out);
        manifest.files.push_back(emit_curve(out, "rms_delay_spread_ccdf.txt", curve));
        save_manifest((out / "manifest.json").string(), manifest);
        std::cout << "reproduce fig8: median RMS delay spread "
                  << format_double(sample_median(data.x)) << " s over " << data.x.size()
                  << " samples\n";
        return 0;
    }

    throw ConfigError("unknown figure '" + figure + "' (expected fig4, fig5, fig6 or fig8)");
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"gbsm: 3D non-stationary geometry-based stochastic channel simulator"};
    app.require_subcommand(1);

    std::string preset_name;
    std::string config_path;
    std::string seeds_spec;
    std::string out_dir = "out";
    std::string stats_csv;
    std::string manifest_path;
    std::string target_path;
    std::string grid_path;
    std::string figure;
    double duration_s = 0.0;
    double time_step_s = 0.0;
    std::size_t workers = 1;
    bool text_dump = false;
    StatsFlags stats_flags;

    CLI::App *sim = app.add_subcommand("simulate", "Run realizations and dump snapshots");
    sim->add_option("--preset", preset_name, "Scenario preset name");
    sim->add_option("--config", config_path, "Scenario config file (JSON)");
    sim->add_option("--seeds", seeds_spec, "Seed list, e.g. 1,2,5-8 (default 1)");
    sim->add_option("--duration", duration_s, "Override duration, s");
    sim->add_option("--dt", time_step_s, "Override time step, s");
    sim->add_option("--out", out_dir, "Output directory (default ./out)");
    sim->add_option("--workers", workers, "Worker threads across realizations");
    sim->add_flag("--text", text_dump, "Also write columnar text dumps");

    CLI::App *stats = app.add_subcommand("stats", "Compute statistics from snapshot dumps");
    stats->add_option("--manifest", manifest_path, "manifest.json of a simulate run")
        ->required();
    stats->add_option("--stats", stats_csv,
                      "Comma list: acf, space-ccf, stationary-interval-ccdf, "
                      "coherence-bandwidth-cdf, rms-delay-ccdf, aps");
    stats->add_option("--out", out_dir, "Output directory (default: manifest directory)");
    stats->add_option("--df", stats_flags.freq_step_hz, "Frequency grid step, Hz");
    stats->add_option("--nfreq", stats_flags.n_freq, "Frequency grid size");
    stats->add_option("--max-lag", stats_flags.max_lag, "Maximum lag in grid steps");
    stats->add_option("--stride", stats_flags.stride, "Snapshot stride for pooled statistics");

    CLI::App *fit = app.add_subcommand("fit", "Grid-search parameters against a target curve");
    fit->add_option("--target", target_path, "Target curve file")->required();
    fit->add_option("--grid", grid_path, "Grid spec JSON")->required();
    fit->add_option("--preset", preset_name, "Base scenario preset");
    fit->add_option("--config", config_path, "Base scenario config file");
    fit->add_option("--seeds", seeds_spec, "Common seeds (overrides grid spec)");
    fit->add_option("--out", out_dir, "Output directory (default ./out)");
    fit->add_option("--workers", workers, "Worker threads across realizations");

    CLI::App *rep = app.add_subcommand("reproduce", "Regenerate a bundled reference study");
    rep->add_option("figure", figure, "One of: fig4, fig5, fig6, fig8")->required();
    rep->add_option("--seeds", seeds_spec, "Seed list override");
    rep->add_option("--out", out_dir, "Output directory (default ./out)");
    rep->add_option("--workers", workers, "Worker threads across realizations");

    CLI::App *presets = app.add_subcommand("presets", "List scenario presets");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try
    {
        if (presets->parsed())
        {
            for (const std::string &name : gbsm::preset_names())
                std::cout << name << "\n";
            return 0;
        }
        if (sim->parsed())
        {
            const gbsm::ScenarioConfig cfg =
                resolve_config(preset_name, config_path, duration_s, time_step_s);
            const std::vector<uint64_t> seeds =
                seeds_spec.empty() ? std::vector<uint64_t>{1} : parse_seeds(seeds_spec);
            return cmd_simulate(cfg, seeds, fs::path(out_dir), text_dump, workers);
        }
        if (stats->parsed())
        {
            const std::string out_override =
                stats->count("--out") != 0 ? out_dir : std::string{};
            return cmd_stats(manifest_path, stats_csv, out_override, stats_flags);
        }
        if (fit->parsed())
        {
            const gbsm::ScenarioConfig base =
                resolve_config(preset_name, config_path, duration_s, time_step_s);
            return cmd_fit(target_path, grid_path, base, seeds_spec, fs::path(out_dir), workers);
        }
        if (rep->parsed())
            return cmd_reproduce(figure, fs::path(out_dir), seeds_spec, workers);

        throw gbsm::ConfigError("no command given");
    }
    catch (const gbsm::ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    catch (const gbsm::IoError &e)
    {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 3;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
