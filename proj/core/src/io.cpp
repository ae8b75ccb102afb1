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

#include "gbsm/io.hpp"

#include <cstdio>
#include <cstring>
#include <sstream>

#include <json.hpp>

#include "gbsm/scenario.hpp"

namespace gbsm
{

namespace
{

constexpr char SNAPSHOT_MAGIC[8] = {'G', 'B', 'S', 'M', 'C', 'I', 'R', '1'};

void append_u32(std::string &buf, uint32_t v)
{
    for (int i = 0; i < 4; ++i)
        buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

void append_u64(std::string &buf, uint64_t v)
{
    for (int i = 0; i < 8; ++i)
        buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

void append_f64(std::string &buf, double v)
{
    uint64_t bits = 0;
    std::memcpy(&bits, &v, sizeof bits);
    append_u64(buf, bits);
}

class Reader
{
  public:
    Reader(const std::string &data, const std::string &path) : data_(data), path_(path) {}

    uint32_t u32()
    {
        check(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<uint32_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
        pos_ += 4;
        return v;
    }

    uint64_t u64()
    {
        check(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
        pos_ += 8;
        return v;
    }

    double f64()
    {
        const uint64_t bits = u64();
        double v = 0.0;
        std::memcpy(&v, &bits, sizeof v);
        return v;
    }

    bool done() const { return pos_ >= data_.size(); }
    std::size_t position() const { return pos_; }

  private:
    void check(std::size_t n) const
    {
        if (pos_ + n > data_.size())
            throw IoError(path_ + ": truncated snapshot record at byte " +
                          std::to_string(pos_));
    }

    const std::string &data_;
    const std::string &path_;
    std::size_t pos_ = 0;
};

} // namespace

uint64_t fnv1a64(const void *data, std::size_t size)
{
    const auto *bytes = static_cast<const unsigned char *>(data);
    uint64_t hash = 14695981039346656037ULL;
    for (std::size_t i = 0; i < size; ++i)
    {
        hash ^= bytes[i];
        hash *= 1099511628211ULL;
    }
    return hash;
}

uint64_t fnv1a64_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path);

    uint64_t hash = 14695981039346656037ULL;
    char buf[1 << 16];
    while (in)
    {
        in.read(buf, sizeof buf);
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i)
        {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 1099511628211ULL;
        }
    }
    return hash;
}

std::string format_double(double value)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string hex64(uint64_t value)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

// --- snapshot dumps -----------------------------------------------------------

SnapshotWriter::SnapshotWriter(const std::string &path) : path_(path)
{
    out_.open(path, std::ios::binary | std::ios::trunc);
    if (!out_)
        throw IoError("cannot open " + path + " for writing");
    out_.write(SNAPSHOT_MAGIC, sizeof SNAPSHOT_MAGIC);
}

SnapshotWriter::~SnapshotWriter()
{
    if (out_.is_open())
        out_.close();
}

void SnapshotWriter::write(const CirSnapshot &snap)
{
    std::string payload;
    append_f64(payload, snap.time);
    append_u32(payload, snap.n_rx);
    append_u32(payload, snap.n_tx);
    append_u32(payload, snap.ramping ? 1u : 0u);

    append_u32(payload, static_cast<uint32_t>(snap.taps.size()));
    for (std::size_t i = 0; i < snap.taps.size(); ++i)
    {
        append_u32(payload, static_cast<uint32_t>(i / snap.n_tx));
        append_u32(payload, static_cast<uint32_t>(i % snap.n_tx));
        append_u32(payload, static_cast<uint32_t>(snap.taps[i].size()));
        for (const Tap &tap : snap.taps[i])
        {
            append_f64(payload, tap.delay);
            append_f64(payload, tap.gain.real());
            append_f64(payload, tap.gain.imag());
            append_u32(payload, tap.cluster_id);
            append_u32(payload, tap.ray_index);
        }
    }

    append_u32(payload, static_cast<uint32_t>(snap.ray_powers.size()));
    for (const RayPower &rp : snap.ray_powers)
    {
        append_u32(payload, rp.cluster_id);
        append_u32(payload, rp.ray_index);
        append_f64(payload, rp.delay);
        append_f64(payload, rp.power);
    }

    std::string header;
    append_u64(header, payload.size());
    out_.write(header.data(), static_cast<std::streamsize>(header.size()));
    out_.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!out_)
        throw IoError("write failed on " + path_);
}

void SnapshotWriter::close()
{
    if (!out_.is_open())
        return;
    out_.close();
    if (out_.fail())
        throw IoError("close failed on " + path_);
}

std::vector<CirSnapshot> read_snapshots(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path);

    std::ostringstream raw;
    raw << in.rdbuf();
    const std::string data = raw.str();

    if (data.size() < sizeof SNAPSHOT_MAGIC ||
        std::memcmp(data.data(), SNAPSHOT_MAGIC, sizeof SNAPSHOT_MAGIC) != 0)
        throw IoError(path + ": not a snapshot dump (bad magic)");

    const std::string body = data.substr(sizeof SNAPSHOT_MAGIC);
    Reader reader(body, path);

    std::vector<CirSnapshot> out;
    while (!reader.done())
    {
        const uint64_t length = reader.u64();
        const std::size_t record_start = reader.position();

        CirSnapshot snap;
        snap.time = reader.f64();
        snap.n_rx = reader.u32();
        snap.n_tx = reader.u32();
        snap.ramping = reader.u32() != 0;

        const uint32_t n_pairs = reader.u32();
        if (n_pairs != 0 && n_pairs != snap.n_rx * snap.n_tx)
            throw IoError(path + ": inconsistent pair count in snapshot record");
        snap.taps.resize(n_pairs);
        for (uint32_t i = 0; i < n_pairs; ++i)
        {
            const uint32_t q = reader.u32();
            const uint32_t p = reader.u32();
            if (q >= snap.n_rx || p >= snap.n_tx)
                throw IoError(path + ": antenna index outside the array in snapshot record");
            std::vector<Tap> &taps = snap.taps[q * snap.n_tx + p];
            const uint32_t n_taps = reader.u32();
            taps.resize(n_taps);
            for (uint32_t k = 0; k < n_taps; ++k)
            {
                taps[k].delay = reader.f64();
                const double re = reader.f64();
                const double im = reader.f64();
                taps[k].gain = cdouble{re, im};
                taps[k].cluster_id = reader.u32();
                taps[k].ray_index = reader.u32();
            }
        }

        const uint32_t n_rays = reader.u32();
        snap.ray_powers.resize(n_rays);
        for (uint32_t k = 0; k < n_rays; ++k)
        {
            snap.ray_powers[k].cluster_id = reader.u32();
            snap.ray_powers[k].ray_index = reader.u32();
            snap.ray_powers[k].delay = reader.f64();
            snap.ray_powers[k].power = reader.f64();
        }

        if (reader.position() - record_start != length)
            throw IoError(path + ": snapshot record length mismatch");
        out.push_back(std::move(snap));
    }
    return out;
}

void write_snapshots_text(const std::string &path, const std::vector<CirSnapshot> &snaps)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw IoError("cannot open " + path + " for writing");

    out << "# columns: time_s q p delay_s re_gain im_gain cluster_id ray_index\n";
    for (const CirSnapshot &snap : snaps)
    {
        for (std::size_t i = 0; i < snap.taps.size(); ++i)
        {
            const std::size_t q = i / snap.n_tx;
            const std::size_t p = i % snap.n_tx;
            for (const Tap &tap : snap.taps[i])
            {
                out << format_double(snap.time) << ' ' << q << ' ' << p << ' '
                    << format_double(tap.delay) << ' ' << format_double(tap.gain.real()) << ' '
                    << format_double(tap.gain.imag()) << ' ' << tap.cluster_id << ' '
                    << tap.ray_index << '\n';
            }
        }
    }
    if (!out)
        throw IoError("write failed on " + path);
}

// --- statistic curve files ------------------------------------------------------

void save_curve(const std::string &path, const Curve &curve)
{
    if (curve.x.size() != curve.y.size())
        throw std::invalid_argument("save_curve: x/y size mismatch");

    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw IoError("cannot open " + path + " for writing");

    out << "# statistic: " << curve.statistic << '\n';
    for (const auto &[key, value] : curve.meta)
        out << "# " << key << ": " << value << '\n';
    out << "# columns: x y\n";
    for (std::size_t i = 0; i < curve.x.size(); ++i)
        out << format_double(curve.x[i]) << ' ' << format_double(curve.y[i]) << '\n';
    if (!out)
        throw IoError("write failed on " + path);
}

Curve load_curve(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path);

    Curve curve;
    bool have_statistic = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        if (line.empty())
            continue;
        if (line[0] == '#')
        {
            std::string body = line.substr(1);
            const std::size_t colon = body.find(':');
            if (colon == std::string::npos)
                continue;
            std::string key = body.substr(0, colon);
            std::string value = body.substr(colon + 1);
            const auto trim = [](std::string &s) {
                const std::size_t first = s.find_first_not_of(" \t");
                const std::size_t last = s.find_last_not_of(" \t\r");
                s = first == std::string::npos ? "" : s.substr(first, last - first + 1);
            };
            trim(key);
            trim(value);
            if (key == "statistic")
            {
                curve.statistic = value;
                have_statistic = true;
            }
            else if (key != "columns")
            {
                curve.meta.emplace_back(key, value);
            }
            continue;
        }

        if (!have_statistic)
            throw IoError(path + ":" + std::to_string(line_no) +
                          ": expected '# statistic:' header before data");

        std::istringstream row(line);
        double x = 0.0;
        double y = 0.0;
        if (!(row >> x >> y))
            throw IoError(path + ":" + std::to_string(line_no) + ": malformed data row");
        std::string extra;
        if (row >> extra)
            throw IoError(path + ":" + std::to_string(line_no) + ": trailing data in row");
        curve.x.push_back(x);
        curve.y.push_back(y);
    }

    if (!have_statistic)
        throw IoError(path + ": missing '# statistic:' header");
    return curve;
}

// --- run manifests ---------------------------------------------------------------

void save_manifest(const std::string &path, const RunManifest &manifest)
{
    nlohmann::json j;
    j["scenario"] = manifest.scenario;
    j["config"] = nlohmann::json::parse(manifest.config_json);
    j["seeds"] = manifest.seeds;
    j["duration_s"] = manifest.duration_s;
    j["time_step_s"] = manifest.time_step_s;
    j["statistics"] = manifest.statistics;
    j["out_dir"] = manifest.out_dir;

    nlohmann::json files = nlohmann::json::array();
    for (const ManifestFile &f : manifest.files)
    {
        nlohmann::json entry;
        entry["path"] = f.path;
        entry["kind"] = f.kind;
        entry["digest"] = "fnv1a64:" + hex64(f.digest);
        files.push_back(entry);
    }
    j["files"] = files;

    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw IoError("cannot open " + path + " for writing");
    out << j.dump(2) << '\n';
    if (!out)
        throw IoError("write failed on " + path);
}

RunManifest load_manifest(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path);

    nlohmann::json j;
    try
    {
        in >> j;
    }
    catch (const nlohmann::json::exception &e)
    {
        throw IoError(path + ": " + e.what());
    }

    RunManifest manifest;
    try
    {
        manifest.scenario = j.at("scenario").get<std::string>();
        manifest.config_json = j.at("config").dump();
        manifest.seeds = j.at("seeds").get<std::vector<uint64_t>>();
        manifest.duration_s = j.at("duration_s").get<double>();
        manifest.time_step_s = j.at("time_step_s").get<double>();
        manifest.statistics = j.at("statistics").get<std::vector<std::string>>();
        manifest.out_dir = j.at("out_dir").get<std::string>();
        for (const auto &entry : j.at("files"))
        {
            ManifestFile f;
            f.path = entry.at("path").get<std::string>();
            f.kind = entry.at("kind").get<std::string>();
            std::string digest = entry.at("digest").get<std::string>();
            const std::string prefix = "fnv1a64:";
            if (digest.rfind(prefix, 0) != 0)
                throw IoError(path + ": unsupported digest format '" + digest + "'");
            f.digest = std::stoull(digest.substr(prefix.size()), nullptr, 16);
            manifest.files.push_back(std::move(f));
        }
    }
    catch (const nlohmann::json::exception &e)
    {
        throw IoError(path + ": " + e.what());
    }
    return manifest;
}

} // namespace gbsm
