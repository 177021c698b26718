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

#include "scaleinv/harness/presets.hpp"

#include "scaleinv/error.hpp"

namespace scaleinv::harness {

namespace {

// Off-transition points are not pinned by the figures; these sit well inside
// each phase.
constexpr double kAaDelocalized = 1.0, kAaCritical = 2.0, kAaLocalized = 3.0;
constexpr double kAndersonDiffusive = 10.0, kAndersonCritical = 16.5, kAndersonLocalized = 25.0;
constexpr double kAvalancheErgodic = 0.85, kAvalancheCritical = 0.716, kAvalancheLocalized = 0.6;

SweepConfig base(std::string name, ModelConfig model, std::vector<ScanAxis> scan, int realizations,
                 std::vector<Task> tasks) {
  SweepConfig c;
  c.name = std::move(name);
  c.model = model;
  c.scan = std::move(scan);
  c.realizations = realizations;
  c.tasks = std::move(tasks);
  return c;
}

SweepConfig aubry_andre(std::string name, std::vector<double> lambdas, std::vector<Task> tasks) {
  return base(std::move(name), ModelConfig::aubry_andre(250, kAaCritical),
              {{"lambda", std::move(lambdas)}, {"L", {250, 500, 1000, 2000}}}, 100, std::move(tasks));
}

SweepConfig anderson(std::string name, std::vector<double> ws, std::vector<Task> tasks) {
  auto c = base(std::move(name), ModelConfig::anderson3d(8, kAndersonCritical),
                {{"W", std::move(ws)}, {"L", {6, 8, 10, 12}}}, 50, std::move(tasks));
  c.realizations_by_size = {{12, 20}};
  return c;
}

SweepConfig avalanche(std::string name, std::vector<double> alphas, std::vector<Task> tasks) {
  auto c = base(std::move(name), ModelConfig::avalanche(5, 5, kAvalancheCritical),
                {{"alpha", std::move(alphas)}, {"L", {5, 6, 7}}}, 50, std::move(tasks));
  c.realizations_by_size = {{7, 20}};
  return c;
}

const std::vector<Task> kSurvival = {Task::Survival, Task::IPR, Task::Heisenberg};
const std::vector<Task> kSurvivalSff = {Task::Survival, Task::IPR, Task::Heisenberg, Task::SFF};

}  // namespace

std::vector<std::string> preset_ids() {
  return {"fig1", "fig2", "fig3", "figS1", "figS2", "figS3", "figS4", "figS5", "figS6"};
}

Preset make_preset(std::string_view id) {
  Preset p;
  p.id = std::string(id);
  const std::vector<double> aa = {kAaDelocalized, kAaCritical, kAaLocalized};
  const std::vector<double> an = {kAndersonDiffusive, kAndersonCritical, kAndersonLocalized};
  const std::vector<double> av = {kAvalancheErgodic, kAvalancheCritical, kAvalancheLocalized};

  if (id == "fig1") {
    p.description = "scaled survival probability across sizes, below, at and above each transition";
    p.sweeps = {aubry_andre("aubry_andre", aa, kSurvival), anderson("anderson", an, kSurvival),
                avalanche("avalanche", av, kSurvival)};
  } else if (id == "fig2") {
    p.description = "scale-invariant power-law decay at the three transitions, with fits";
    auto a = aubry_andre("aubry_andre", {kAaCritical}, kSurvival);
    a.power_window = FitWindow{3e-3, 3e-2};
    auto b = anderson("anderson", {kAndersonCritical}, kSurvival);
    b.p_inf.mode = PinfMode::Fit;
    b.power_window = FitWindow{1e-2, 1e-1};
    auto c = avalanche("avalanche", {kAvalancheCritical}, kSurvival);
    c.power_window = FitWindow{1e-2, 1e-1};
    p.sweeps = {a, b, c};
  } else if (id == "fig3") {
    p.description = "size scaling of P_bar (fractal dimension) and t_H_typ (exponent n)";
    const std::vector<Task> t = {Task::IPR, Task::Heisenberg};
    auto a = aubry_andre("aubry_andre", aa, t);
    auto b = anderson("anderson", an, t);
    b.p_inf.mode = PinfMode::Fit;
    auto c = avalanche("avalanche", av, t);
    c.scan[1].values = {5, 6, 7, 8};
    c.realizations_by_size = {{7, 20}, {8, 10}};
    c.p_inf.mode = PinfMode::Fit;
    p.sweeps = {a, b, c};
  } else if (id == "figS1") {
    p.description = "mean gap ratio of the avalanche model versus alpha and its scaling collapse";
    std::vector<double> alphas;
    for (int k = 0; k <= 16; ++k) alphas.push_back(0.55 + 0.025 * k);
    auto c = base("avalanche_rstat", ModelConfig::avalanche(5, 5, kAvalancheCritical),
                  {{"alpha", alphas}, {"L", {5, 6, 7}}}, 100, {Task::RStat});
    c.realizations_by_size = {{7, 30}};
    c.collapse = CollapseSpec{};
    p.sweeps = {c};
  } else if (id == "figS2") {
    p.description = "raw spectral form factor and survival probability, Aubry-Andre model";
    p.sweeps = {aubry_andre("aubry_andre", aa, kSurvivalSff)};
  } else if (id == "figS3") {
    p.description = "raw spectral form factor and survival probability, 3D Anderson model";
    p.sweeps = {anderson("anderson", an, kSurvivalSff)};
  } else if (id == "figS4") {
    p.description = "raw spectral form factor and survival probability, avalanche model";
    p.sweeps = {avalanche("avalanche", av, kSurvivalSff)};
  } else if (id == "figS5") {
    p.description = "plane-wave quenches in the Aubry-Andre model with the raw SFF";
    auto a = aubry_andre("aubry_andre_plane_wave", aa, kSurvivalSff);
    a.initial_states = {InitialFamily::PlaneWave, InitialFamily::BasisLocalized};
    a.power_window = FitWindow{3e-3, 3e-2};
    p.sweeps = {a};
  } else if (id == "figS6") {
    p.description = "plane-wave quenches in the avalanche model compared with the raw SFF";
    auto c = avalanche("avalanche_plane_wave", av, kSurvivalSff);
    c.initial_states = {InitialFamily::PlaneWave, InitialFamily::InfiniteTemperature};
    p.sweeps = {c};
  } else {
    std::string known;
    for (const auto& k : preset_ids()) known += (known.empty() ? "" : ", ") + k;
    detail::throw_invalid("unknown figure id '" + std::string(id) + "' (known: " + known + ")");
  }
  for (const auto& s : p.sweeps) validate(s);
  return p;
}

}  // namespace scaleinv::harness
