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

#ifndef GBSM_IO_H
#define GBSM_IO_H

#include <cstdint>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "gbsm/channel.hpp"

namespace gbsm
{

// --- digests and text formatting ---------------------------------------------

uint64_t fnv1a64(const void *data, std::size_t size);
uint64_t fnv1a64_file(const std::string &path);

// Shortest round-trippable decimal representation (%.17g).
std::string format_double(double value);
std::string hex64(uint64_t value);

// --- snapshot dumps -----------------------------------------------------------

// Binary snapshot stream: an 8-byte magic, then one length-prefixed
// little-endian record per snapshot. The layout is documented in
// docs/formats.md.
class SnapshotWriter
{
  public:
    explicit SnapshotWriter(const std::string &path);
    ~SnapshotWriter();

    SnapshotWriter(const SnapshotWriter &) = delete;
    SnapshotWriter &operator=(const SnapshotWriter &) = delete;

    void write(const CirSnapshot &snap);
    void close();

  private:
    std::ofstream out_;
    std::string path_;
};

std::vector<CirSnapshot> read_snapshots(const std::string &path);

// Columnar text export: one row per tap,
// "time_s q p delay_s re_gain im_gain cluster_id ray_index".
void write_snapshots_text(const std::string &path, const std::vector<CirSnapshot> &snaps);

// --- statistic curve files ------------------------------------------------------

// Two-column statistic curve with ordered header metadata. Serialized as
//   # statistic: <kind>
//   # <key>: <value>
//   # columns: x y
//   <x> <y> ...
struct Curve
{
    std::string statistic;
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<double> x;
    std::vector<double> y;
};

void save_curve(const std::string &path, const Curve &curve);
Curve load_curve(const std::string &path);

// --- run manifests ---------------------------------------------------------------

struct ManifestFile
{
    std::string path; // relative to the manifest's directory
    std::string kind; // "snapshots", "snapshots-text", "curve", "grid" or "report"
    uint64_t digest = 0;
};

// Inventory that fully determines a run's outputs: the inline configuration,
// seed list and every emitted file with its content digest. Contains no
// timestamps so reruns are byte-identical.
struct RunManifest
{
    std::string scenario;
    std::string config_json; // full inline configuration
    std::vector<uint64_t> seeds;
    double duration_s = 0.0;
    double time_step_s = 0.0;
    std::vector<std::string> statistics;
    std::string out_dir;
    std::vector<ManifestFile> files;
};

void save_manifest(const std::string &path, const RunManifest &manifest);
RunManifest load_manifest(const std::string &path);

} // namespace gbsm

#endif
