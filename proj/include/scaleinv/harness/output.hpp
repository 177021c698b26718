/* Copyright 2026 The scaleinv Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scaleinv/harness/config.hpp"
#include "scaleinv/harness/results.hpp"
#include "scaleinv/harness/sweep.hpp"

namespace scaleinv::harness {

enum class OutputFormat { Tsv, Json };
std::string_view to_string(OutputFormat format) noexcept;
OutputFormat parse_output_format(std::string_view text);

struct ManifestFamily {
  InitialFamily family = InitialFamily::BasisLocalized;
  double P_bar = 0.0;
  double P_bar_err = 0.0;
  double P_inf = 0.0;
  std::optional<FitResult> power_fit;
  friend bool operator==(const ManifestFamily&, const ManifestFamily&) = default;
};

struct ManifestPoint {
  std::string label;
  std::vector<std::pair<std::string, double>> params;
  std::size_t dim = 0;
  int n_requested = 0;
  int n_used = 0;
  int n_failed = 0;
  bool valid = true;
  bool complete = true;
  double t_H_typ = 0.0;
  std::optional<double> r_bar;
  double r_bar_err = 0.0;
  std::vector<ManifestFamily> families;
  friend bool operator==(const ManifestPoint&, const ManifestPoint&) = default;
};

/// Everything needed to interpret the emitted tables: configuration, seed
/// policy, per-point constants and the fits.
struct Manifest {
  std::string software;
  std::string version;
  std::string config_hash;
  SweepConfig config;
  std::string seed_policy;
  bool complete = true;
  std::vector<ManifestPoint> points;
  std::vector<GroupResult> groups;
  std::optional<CollapseResult> collapse;
  std::vector<std::string> notes;
  std::vector<std::string> files;  // relative to the output directory
  friend bool operator==(const Manifest&, const Manifest&) = default;
};

Manifest make_manifest(const ResultSet& results, const SweepConfig& config);
json to_json(const Manifest& manifest);
Manifest manifest_from_json(const json& j);
Manifest parse_manifest(const std::filesystem::path& path);

struct EmitOptions {
  OutputFormat format = OutputFormat::Tsv;
  /// Overwrite files left by an earlier run.
  bool force = false;
  /// Also write the GOE form factor on the SFF grid.
  bool reference_curves = true;
};

/// Writes results.json, manifest.json, timing.json (when `timing` is given)
/// and the curve tables into `dir`. Tables are tab-separated with '#' header
/// lines (format tsv) or collected in curves.json (format json). Refuses to
/// overwrite an existing file unless options.force. Returns the written paths.
std::vector<std::filesystem::path> emit_outputs(const ResultSet& results,
                                                const SweepConfig& config,
                                                const std::filesystem::path& dir,
                                                const EmitOptions& options = {},
                                                const Timing* timing = nullptr);

/// A table read back from a tsv file: the last '#' line names the columns.
struct TableData {
  std::vector<std::string> header;  // '#' lines without the marker
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  /// Throws InvalidArgument when the column is missing.
  std::vector<double> column(std::string_view name) const;
};
TableData read_table(const std::filesystem::path& path);

/// File-name stem of a point or group label, e.g. "L14_W16.5".
std::string file_stem(const std::vector<std::pair<std::string, double>>& params);

}  // namespace scaleinv::harness
