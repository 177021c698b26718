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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "scaleinv/analysis.hpp"
#include "scaleinv/dynamics.hpp"
#include "scaleinv/models.hpp"
#include "scaleinv/quench.hpp"
#include "scaleinv/spectral.hpp"

namespace scaleinv::harness {

using json = nlohmann::json;

enum class Task { Survival, SFF, RStat, IPR, Heisenberg };
std::string_view to_string(Task task) noexcept;
Task parse_task(std::string_view text);

/// How P_inf in the scaled survival probability is chosen.
enum class PinfMode {
  Zero,   // P_inf = 0
  Fixed,  // P_inf = value
  Fit,    // P_inf from the free-asymptote fractal fit across sizes
};
std::string_view to_string(PinfMode mode) noexcept;
PinfMode parse_pinf_mode(std::string_view text);

struct ScanAxis {
  std::string param;  // L, N, lambda, W, alpha, J, g0, beta_goe
  std::vector<double> values;
  friend bool operator==(const ScanAxis&, const ScanAxis&) = default;
};

struct GridSpec {
  double t_min = 1e-4;
  double t_max = 1e2;
  int points_per_decade = 40;
  TimeScale scale = TimeScale::HeisenbergScaled;
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct PinfSpec {
  PinfMode mode = PinfMode::Zero;
  double value = 0.0;
  friend bool operator==(const PinfSpec&, const PinfSpec&) = default;
};

/// Levels used for the gap ratio: `count` mid-spectrum levels when nonzero,
/// otherwise the central `fraction` of the spectrum.
struct RStatSpec {
  double fraction = 0.5;
  std::size_t count = 0;
  friend bool operator==(const RStatSpec&, const RStatSpec&) = default;
};

struct CollapseSpec {
  FitWindow alpha_range{0.6, 0.85};
  FitWindow mu_range{0.2, 1.5};
  std::size_t grid = 50;
  friend bool operator==(const CollapseSpec&, const CollapseSpec&) = default;
};

struct SweepConfig {
  std::string name = "sweep";
  ModelConfig model;
  std::vector<ScanAxis> scan;
  int realizations = 500;
  std::map<int, int> realizations_by_size;  // L -> count
  std::uint64_t master_seed = 1;
  GridSpec grid;
  std::vector<Task> tasks = {Task::Survival, Task::IPR, Task::Heisenberg};
  std::vector<InitialFamily> initial_states = {InitialFamily::BasisLocalized};
  PinfSpec p_inf;
  std::optional<FitWindow> power_window;
  RStatSpec rstat;
  std::optional<CollapseSpec> collapse;
  int sff_running_window = 7;
  double spacing_floor = 1e-12;
  SpacingPooling heisenberg_pooling = SpacingPooling::Pooled;
  double memory_budget_mb = 4096.0;

  bool has_task(Task t) const;
  friend bool operator==(const SweepConfig&, const SweepConfig&) = default;
};

/// Checks every field; throws InvalidArgument naming the offending entry.
void validate(const SweepConfig& config);

/// Parameter names that may appear in a scan.
bool is_scan_parameter(std::string_view name) noexcept;
/// config with `name` set to `value`.
ModelConfig with_parameter(ModelConfig config, std::string_view name, double value);
double get_parameter(const ModelConfig& config, std::string_view name);

/// One point of the scan: parameter values in axis order and the model.
struct ScanPoint {
  std::vector<std::pair<std::string, double>> params;
  ModelConfig model;
  int realizations = 0;
};
/// Cartesian product of the scan axes, first axis outermost. An empty scan
/// gives the single base point.
std::vector<ScanPoint> expand_scan(const SweepConfig& config);

TimeGrid make_grid(const GridSpec& spec);

json to_json(const ModelConfig& model);
ModelConfig model_from_json(const json& j);
json to_json(const SweepConfig& config);
/// Missing keys take their defaults; unknown keys are rejected.
SweepConfig config_from_json(const json& j);
SweepConfig load_config(const std::filesystem::path& path);

/// FNV-1a 64 of the canonical JSON form, as 16 hex digits.
std::string config_hash(const SweepConfig& config);

}  // namespace scaleinv::harness
