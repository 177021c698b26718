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

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scaleinv/analysis.hpp"
#include "scaleinv/dynamics.hpp"
#include "scaleinv/harness/config.hpp"
#include "scaleinv/quench.hpp"

namespace scaleinv::harness {

/// Per-family statistics of one scan point.
struct FamilyResult {
  InitialFamily family = InitialFamily::BasisLocalized;
  double P_bar = 0.0;
  double P_bar_err = 0.0;
  double P_inf = 0.0;  // value used for the scaled curve
  std::optional<CurveEnsemble> survival_raw;
  std::optional<CurveEnsemble> survival_scaled;
  std::optional<FitResult> power_fit;
  std::string note;
  friend bool operator==(const FamilyResult&, const FamilyResult&) = default;
};

struct PointResult {
  std::vector<std::pair<std::string, double>> params;
  ModelConfig model;
  std::size_t dim = 0;
  int n_requested = 0;
  int n_used = 0;
  int n_failed = 0;
  bool valid = true;
  bool complete = true;
  std::vector<std::string> failures;
  // spectrum-only statistics
  double t_H_typ = 0.0;
  double delta_typ = 0.0;
  std::size_t n_spacings_retained = 0;
  std::size_t n_spacings_discarded = 0;
  std::optional<double> r_bar;
  double r_bar_err = 0.0;
  std::size_t r_dropped = 0;
  std::optional<CurveEnsemble> sff;
  std::vector<FamilyResult> families;
  friend bool operator==(const PointResult&, const PointResult&) = default;
};

struct GroupFamilyResult {
  InitialFamily family = InitialFamily::BasisLocalized;
  std::optional<FitResult> fractal_zero;  // P_inf fixed at 0
  std::optional<FitResult> fractal_free;
  std::optional<FitResult> fractal_fixed;  // P_inf from the config, mode fixed
  double P_inf_used = 0.0;
  std::optional<double> beta_prediction;  // gamma / n with the P_inf mode in use
  std::vector<std::string> notes;
  friend bool operator==(const GroupFamilyResult&, const GroupFamilyResult&) = default;
};

/// Points that differ only in system size.
struct GroupResult {
  std::vector<std::pair<std::string, double>> params;  // non-size parameters
  std::vector<std::size_t> points;                      // indices, ascending D
  std::vector<double> dims;
  std::vector<double> t_H;
  std::optional<FitResult> heisenberg;
  std::vector<GroupFamilyResult> families;
  std::vector<std::string> notes;
  friend bool operator==(const GroupResult&, const GroupResult&) = default;
};

struct ResultSet {
  std::string software = "scaleinv";
  std::string version;
  std::string config_hash;
  bool complete = true;
  std::vector<PointResult> points;
  std::vector<GroupResult> groups;
  std::optional<CollapseResult> collapse;
  friend bool operator==(const ResultSet&, const ResultSet&) = default;
};

json to_json(const TimeGrid& grid);
TimeGrid time_grid_from_json(const json& j);
json to_json(const CurveEnsemble& curve);
CurveEnsemble curve_from_json(const json& j);
json to_json(const FitResult& fit);
FitResult fit_from_json(const json& j);
json to_json(const CollapseResult& c);
CollapseResult collapse_from_json(const json& j);
json group_to_json(const GroupResult& group);
GroupResult group_from_json(const json& j);
json to_json(const ResultSet& results);
ResultSet results_from_json(const json& j);

/// Doubles as JSON; non-finite values become "nan", "inf" or "-inf".
json json_number(double v);
double number_from_json(const json& j);

/// Human-readable label such as "L=14,W=16.5".
std::string point_label(const std::vector<std::pair<std::string, double>>& params);

}  // namespace scaleinv::harness
