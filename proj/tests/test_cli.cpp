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

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "gbsm/io.hpp"

using namespace gbsm;
using Catch::Matchers::ContainsSubstring;

namespace fs = std::filesystem;

namespace
{

struct CliResult
{
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path &path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempDir
{
    fs::path path;

    explicit TempDir(const std::string &name) : path(fs::temp_directory_path() / name)
    {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir()
    {
        std::error_code ec;
        fs::remove_all(path, ec);
    }

    std::string str() const { return path.string(); }
    fs::path operator/(const std::string &leaf) const { return path / leaf; }
};

CliResult run_cli(const std::string &args)
{
    static int invocation = 0;
    const fs::path out_file =
        fs::temp_directory_path() / ("gbsm_cli_out" + std::to_string(invocation));
    const fs::path err_file =
        fs::temp_directory_path() / ("gbsm_cli_err" + std::to_string(invocation));
    ++invocation;

    const std::string cmd = std::string(GBSM_CLI_PATH) + " " + args + " > " +
                            out_file.string() + " 2> " + err_file.string();
    const int raw = std::system(cmd.c_str());

    CliResult result;
    result.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    result.out = slurp(out_file);
    result.err = slurp(err_file);
    fs::remove(out_file);
    fs::remove(err_file);
    return result;
}

void write_file(const fs::path &path, const std::string &content)
{
    std::ofstream out(path, std::ios::trunc);
    out << content;
}

} // namespace

TEST_CASE("presets subcommand lists the catalogue")
{
    const CliResult res = run_cli("presets");
    REQUIRE(res.code == 0);
    REQUIRE(res.out == "massive_mimo_3d\n"
                       "hst_3d\n"
                       "v2v_2d\n"
                       "mmwave_3d\n"
                       "mmwave_massive_2d\n");
}

TEST_CASE("help requests succeed")
{
    REQUIRE(run_cli("--help").code == 0);
    REQUIRE(run_cli("simulate --help").code == 0);
}

TEST_CASE("invalid invocations exit with the configuration code")
{
    SECTION("no subcommand") { REQUIRE(run_cli("").code == 2); }
    SECTION("unknown subcommand") { REQUIRE(run_cli("frobnicate").code == 2); }
    SECTION("unknown preset")
    {
        const CliResult res = run_cli("simulate --preset nope");
        REQUIRE(res.code == 2);
        REQUIRE_THAT(res.err, ContainsSubstring("unknown preset"));
    }
    SECTION("preset and config are mutually exclusive")
    {
        const CliResult res = run_cli("simulate --preset v2v_2d --config x.json");
        REQUIRE(res.code == 2);
        REQUIRE_THAT(res.err, ContainsSubstring("exactly one of --preset or --config"));
    }
    SECTION("neither preset nor config") { REQUIRE(run_cli("simulate").code == 2); }
    SECTION("malformed seed list")
    {
        REQUIRE(run_cli("simulate --preset v2v_2d --seeds abc").code == 2);
        REQUIRE(run_cli("simulate --preset v2v_2d --seeds 5-2").code == 2);
        REQUIRE(run_cli("simulate --preset v2v_2d --seeds 1,,2").code == 2);
    }
    SECTION("stats requires a manifest") { REQUIRE(run_cli("stats").code == 2); }
    SECTION("reproduce requires a figure") { REQUIRE(run_cli("reproduce").code == 2); }
    SECTION("unknown figure")
    {
        const CliResult res = run_cli("reproduce fig7");
        REQUIRE(res.code == 2);
        REQUIRE_THAT(res.err, ContainsSubstring("unknown figure"));
    }
}

TEST_CASE("simulate writes verifiable dumps and a manifest")
{
    const TempDir dir("gbsm_cli_simulate");

    const CliResult res = run_cli("simulate --preset v2v_2d --duration 0.02 --dt 0.005 "
                                  "--seeds 1,2 --text --out " +
                                  dir.str());
    INFO(res.err);
    REQUIRE(res.code == 0);

    const RunManifest manifest = load_manifest((dir / "manifest.json").string());
    REQUIRE(manifest.scenario == "v2v_2d");
    REQUIRE(manifest.seeds == std::vector<uint64_t>{1, 2});
    REQUIRE(manifest.duration_s == 0.02);
    REQUIRE(manifest.time_step_s == 0.005);
    REQUIRE(manifest.files.size() == 4); // one binary and one text dump per seed

    std::size_t binary_dumps = 0;
    for (const ManifestFile &f : manifest.files)
    {
        const fs::path path = dir / f.path;
        REQUIRE(fs::exists(path));
        REQUIRE(fnv1a64_file(path.string()) == f.digest);
        if (f.kind != "snapshots")
        {
            REQUIRE(f.kind == "snapshots-text");
            continue;
        }
        ++binary_dumps;
        const std::vector<CirSnapshot> snaps = read_snapshots(path.string());
        REQUIRE(snaps.size() == 4); // round(duration / dt) snapshots from t = 0
        REQUIRE(snaps.front().time == 0.0);
        REQUIRE(snaps.back().time == Catch::Approx(0.015).margin(1e-12));
        REQUIRE(snaps.front().n_rx == 2);
        REQUIRE(snaps.front().n_tx == 2);
        REQUIRE(snaps.front().taps.size() == 4);
    }
    REQUIRE(binary_dumps == 2);

    SECTION("a rerun produces identical dump bytes")
    {
        const TempDir redo("gbsm_cli_simulate_redo");
        const CliResult again = run_cli("simulate --preset v2v_2d --duration 0.02 --dt 0.005 "
                                        "--seeds 1,2 --text --out " +
                                        redo.str());
        REQUIRE(again.code == 0);
        const RunManifest other = load_manifest((redo / "manifest.json").string());
        REQUIRE(other.files.size() == manifest.files.size());
        for (std::size_t i = 0; i < manifest.files.size(); ++i)
        {
            REQUIRE(other.files[i].path == manifest.files[i].path);
            REQUIRE(other.files[i].digest == manifest.files[i].digest);
        }
    }
}

TEST_CASE("stats derives curves from a simulate run")
{
    const TempDir dir("gbsm_cli_stats");
    const CliResult sim = run_cli("simulate --preset v2v_2d --duration 0.05 --dt 0.005 "
                                  "--seeds 1-3 --out " +
                                  dir.str());
    INFO(sim.err);
    REQUIRE(sim.code == 0);
    const std::string manifest_arg = " --manifest " + (dir / "manifest.json").string();

    SECTION("curves land next to the manifest")
    {
        const CliResult res = run_cli(
            "stats" + manifest_arg +
            " --stats acf,space-ccf,rms-delay-ccdf,coherence-bandwidth-cdf");
        INFO(res.err);
        REQUIRE(res.code == 0);

        const RunManifest out = load_manifest((dir / "stats_manifest.json").string());
        REQUIRE(out.statistics == std::vector<std::string>{"acf", "space-ccf", "rms-delay-ccdf",
                                                           "coherence-bandwidth-cdf"});
        REQUIRE(out.files.size() == 4);

        const Curve acf = load_curve((dir / "acf.txt").string());
        REQUIRE(acf.statistic == "acf");
        REQUIRE(acf.x.size() == 10); // nine lags fit into ten snapshots
        REQUIRE(acf.x.front() == 0.0);
        REQUIRE(acf.y.front() == 1.0);
        for (double v : acf.y)
        {
            REQUIRE(v >= 0.0);
            REQUIRE(v <= 1.0 + 1e-12);
        }

        const Curve sccf = load_curve((dir / "space_ccf.txt").string());
        REQUIRE(sccf.statistic == "space-ccf");
        REQUIRE(sccf.x == std::vector<double>{0.0, 1.0});
        REQUIRE(sccf.y.front() == Catch::Approx(1.0).margin(1e-12));
        REQUIRE(sccf.y[1] >= 0.0);
        REQUIRE(sccf.y[1] <= 1.0 + 1e-12);

        const Curve rms = load_curve((dir / "rms_delay_spread_ccdf.txt").string());
        REQUIRE(rms.statistic == "rms-delay-ccdf");
        REQUIRE(rms.x.size() == 3); // stride 10 pools one snapshot per dump
        REQUIRE(rms.y.back() == 0.0);
        REQUIRE(std::is_sorted(rms.x.begin(), rms.x.end()));

        const Curve bc = load_curve((dir / "coherence_bandwidth_cdf.txt").string());
        REQUIRE(bc.statistic == "coherence-bandwidth-cdf");
        REQUIRE(bc.x.size() == 3); // stride 10 samples one snapshot per dump
        REQUIRE(bc.y.back() == 1.0);
    }
    SECTION("an output override redirects the curves")
    {
        const TempDir other("gbsm_cli_stats_out");
        const CliResult res =
            run_cli("stats" + manifest_arg + " --stats acf --out " + other.str());
        REQUIRE(res.code == 0);
        REQUIRE(fs::exists(other / "acf.txt"));
        REQUIRE(fs::exists(other / "stats_manifest.json"));
        REQUIRE_FALSE(fs::exists(dir / "acf.txt"));
    }
    SECTION("unknown statistic names are rejected")
    {
        const CliResult res = run_cli("stats" + manifest_arg + " --stats pdp");
        REQUIRE(res.code == 2);
        REQUIRE_THAT(res.err, ContainsSubstring("unknown statistic"));
    }
    SECTION("a missing manifest is an i/o error")
    {
        REQUIRE(run_cli("stats --manifest /nonexistent/manifest.json --stats acf").code == 3);
    }
}

TEST_CASE("fit reports grid results and signals unmet thresholds")
{
    const TempDir dir("gbsm_cli_fit");
    const fs::path target = dir / "target.txt";
    write_file(target, "# statistic: rms-delay-ccdf\n"
                       "0 1\n"
                       "1e-07 0.5\n"
                       "2e-07 0\n");

    SECTION("an unreachable threshold exits with the fit code")
    {
        const fs::path grid = dir / "grid.json";
        write_file(grid, "{\"epsilon_threshold\": 1e-30,"
                         "\"parameters\": {\"aoa_azimuth_std\": [0.9]},"
                         "\"seeds\": [1]}");
        const CliResult res = run_cli("fit --target " + target.string() + " --grid " +
                                      grid.string() + " --preset v2v_2d --out " + dir.str());
        INFO(res.err);
        REQUIRE(res.code == 4);
        REQUIRE_THAT(res.out, ContainsSubstring("threshold NOT met"));

        const std::string report = slurp(dir / "fit_report.txt");
        REQUIRE_THAT(report, ContainsSubstring("# statistic: rms-delay-ccdf"));
        REQUIRE_THAT(report, ContainsSubstring("# threshold_met: no"));
        REQUIRE_THAT(report, ContainsSubstring("# columns: aoa_azimuth_std epsilon"));

        const RunManifest manifest = load_manifest((dir / "fit_manifest.json").string());
        REQUIRE(manifest.statistics == std::vector<std::string>{"rms-delay-ccdf"});
        REQUIRE(manifest.files.size() == 1);
        REQUIRE(manifest.files[0].path == "fit_report.txt");
        REQUIRE(fnv1a64_file((dir / "fit_report.txt").string()) == manifest.files[0].digest);
    }
    SECTION("a generous threshold succeeds")
    {
        const fs::path grid = dir / "grid.json";
        write_file(grid, "{\"epsilon_threshold\": 1e9,"
                         "\"parameters\": {\"aoa_azimuth_std\": [0.9]},"
                         "\"seeds\": [1]}");
        const CliResult res = run_cli("fit --target " + target.string() + " --grid " +
                                      grid.string() + " --preset v2v_2d --out " + dir.str());
        INFO(res.err);
        REQUIRE(res.code == 0);
        REQUIRE_THAT(slurp(dir / "fit_report.txt"), ContainsSubstring("# threshold_met: yes"));
    }
    SECTION("a missing target file is an i/o error")
    {
        const fs::path grid = dir / "grid.json";
        write_file(grid, "{\"epsilon_threshold\": 1.0,"
                         "\"parameters\": {\"aoa_azimuth_std\": [0.9]}}");
        REQUIRE(run_cli("fit --target /nonexistent/t.txt --grid " + grid.string() +
                        " --preset v2v_2d --out " + dir.str())
                    .code == 3);
    }
    SECTION("a grid spec without a threshold is a configuration error")
    {
        const fs::path grid = dir / "grid.json";
        write_file(grid, "{\"parameters\": {\"aoa_azimuth_std\": [0.9]}}");
        REQUIRE(run_cli("fit --target " + target.string() + " --grid " + grid.string() +
                        " --preset v2v_2d --out " + dir.str())
                    .code == 2);
    }
    SECTION("malformed grid json is an i/o error")
    {
        const fs::path grid = dir / "grid.json";
        write_file(grid, "{nope");
        REQUIRE(run_cli("fit --target " + target.string() + " --grid " + grid.string() +
                        " --preset v2v_2d --out " + dir.str())
                    .code == 3);
    }
}

TEST_CASE("reproduce regenerates identical study files")
{
    SECTION("fig5 is byte-identical across runs and worker counts")
    {
        const TempDir a("gbsm_cli_fig5_a");
        const TempDir b("gbsm_cli_fig5_b");

        const CliResult first = run_cli("reproduce fig5 --seeds 1-5 --out " + a.str());
        INFO(first.err);
        REQUIRE(first.code == 0);
        const CliResult second =
            run_cli("reproduce fig5 --seeds 1-5 --workers 2 --out " + b.str());
        REQUIRE(second.code == 0);

        const std::string curve_a = slurp(a / "stationary_interval_ccdf.txt");
        const std::string curve_b = slurp(b / "stationary_interval_ccdf.txt");
        REQUIRE_FALSE(curve_a.empty());
        REQUIRE(curve_a == curve_b);

        const Curve curve = load_curve((a / "stationary_interval_ccdf.txt").string());
        REQUIRE(curve.statistic == "stationary-interval-ccdf");
        REQUIRE_FALSE(curve.x.empty());
        REQUIRE(load_manifest((a / "manifest.json").string()).scenario == "hst_3d");
    }
    SECTION("fig6 emits a coherence bandwidth cdf")
    {
        const TempDir dir("gbsm_cli_fig6");
        const CliResult res = run_cli("reproduce fig6 --seeds 1-3 --out " + dir.str());
        INFO(res.err);
        REQUIRE(res.code == 0);
        const Curve curve = load_curve((dir / "coherence_bandwidth_cdf.txt").string());
        REQUIRE(curve.statistic == "coherence-bandwidth-cdf");
        REQUIRE_FALSE(curve.x.empty());
    }
    SECTION("fig8 emits an rms delay spread ccdf")
    {
        const TempDir dir("gbsm_cli_fig8");
        const CliResult res = run_cli("reproduce fig8 --seeds 1-3 --out " + dir.str());
        INFO(res.err);
        REQUIRE(res.code == 0);
        const Curve curve = load_curve((dir / "rms_delay_spread_ccdf.txt").string());
        REQUIRE(curve.statistic == "rms-delay-ccdf");
        REQUIRE(curve.x.size() == 30); // ten snapshots pooled from each of three runs
    }
}
