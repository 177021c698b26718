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

#include "scaleinv/harness/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "scaleinv/error.hpp"

namespace scaleinv::harness {

namespace {

struct TaskName {
  Task task;
  const char* name;
};
constexpr TaskName kTasks[] = {{Task::Survival, "survival"},
                               {Task::SFF, "sff"},
                               {Task::RStat, "rstat"},
                               {Task::IPR, "ipr"},
                               {Task::Heisenberg, "heisenberg"}};

constexpr const char* kScanParameters[] = {"L", "N", "lambda", "W", "alpha", "J", "g0", "beta_goe"};

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  if (!j.is_object()) detail::throw_invalid(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* a) { return key == a; });
    if (!known) detail::throw_invalid(where + ": unknown key '" + key + "'");
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    detail::throw_invalid(std::string("config key '") + key + "': " + e.what());
  }
}

int as_integer(double v, std::string_view name) {
  if (!(std::isfinite(v) && v == std::floor(v) && std::abs(v) < 1e9)) {
    detail::throw_invalid("parameter " + std::string(name) + " must be an integer");
  }
  return static_cast<int>(v);
}

FitWindow window_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) detail::throw_invalid(where + ": expected [lo, hi]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json window_to_json(FitWindow w) { return json::array({w.lo, w.hi}); }

}  // namespace

std::string_view to_string(Task task) noexcept {
  for (const auto& t : kTasks)
    if (t.task == task) return t.name;
  return "unknown";
}

Task parse_task(std::string_view text) {
  for (const auto& t : kTasks)
    if (text == t.name) return t.task;
  detail::throw_invalid("unknown task '" + std::string(text) + "'");
}

std::string_view to_string(PinfMode mode) noexcept {
  switch (mode) {
    case PinfMode::Zero: return "zero";
    case PinfMode::Fixed: return "fixed";
    case PinfMode::Fit: return "fit";
  }
  return "unknown";
}

PinfMode parse_pinf_mode(std::string_view text) {
  if (text == "zero") return PinfMode::Zero;
  if (text == "fixed") return PinfMode::Fixed;
  if (text == "fit") return PinfMode::Fit;
  detail::throw_invalid("unknown p_inf mode '" + std::string(text) + "'");
}

bool SweepConfig::has_task(Task t) const {
  return std::find(tasks.begin(), tasks.end(), t) != tasks.end();
}

bool is_scan_parameter(std::string_view name) noexcept {
  return std::any_of(std::begin(kScanParameters), std::end(kScanParameters),
                     [&](const char* p) { return name == p; });
}

ModelConfig with_parameter(ModelConfig c, std::string_view name, double value) {
  if (name == "L") c.L = as_integer(value, name);
  else if (name == "N") c.N = as_integer(value, name);
  else if (name == "lambda") c.lambda = value;
  else if (name == "W") c.W = value;
  else if (name == "alpha") c.alpha = value;
  else if (name == "J") c.J = value;
  else if (name == "g0") c.g0 = value;
  else if (name == "beta_goe") c.beta_goe = value;
  else detail::throw_invalid("unknown scan parameter '" + std::string(name) + "'");
  return c;
}

double get_parameter(const ModelConfig& c, std::string_view name) {
  if (name == "L") return c.L;
  if (name == "N") return c.N;
  if (name == "lambda") return c.lambda;
  if (name == "W") return c.W;
  if (name == "alpha") return c.alpha;
  if (name == "J") return c.J;
  if (name == "g0") return c.g0;
  if (name == "beta_goe") return c.beta_goe;
  detail::throw_invalid("unknown parameter '" + std::string(name) + "'");
}

std::vector<ScanPoint> expand_scan(const SweepConfig& config) {
  std::vector<ScanPoint> points = {ScanPoint{{}, config.model, 0}};
  for (const auto& axis : config.scan) {
    std::vector<ScanPoint> next;
    for (const auto& p : points) {
      for (double v : axis.values) {
        ScanPoint q = p;
        q.params.emplace_back(axis.param, v);
        q.model = with_parameter(q.model, axis.param, v);
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  for (auto& p : points) {
    const auto it = config.realizations_by_size.find(p.model.L);
    p.realizations = it != config.realizations_by_size.end() ? it->second : config.realizations;
  }
  return points;
}

void validate(const SweepConfig& c) {
  detail::require(c.realizations >= 1, "realizations must be >= 1");
  for (const auto& [size, count] : c.realizations_by_size) {
    detail::require(count >= 1, "realizations for L=" + std::to_string(size) + " must be >= 1");
  }
  std::set<std::string> seen;
  for (const auto& axis : c.scan) {
    detail::require(is_scan_parameter(axis.param), "scan: unknown parameter '" + axis.param + "'");
    detail::require(seen.insert(axis.param).second, "scan: parameter '" + axis.param + "' repeated");
    detail::require(!axis.values.empty(), "scan: parameter '" + axis.param + "' has no values");
    if (c.model.kind != ModelKind::Avalanche) {
      detail::require(axis.param != "N" && axis.param != "alpha" && axis.param != "g0" &&
                          axis.param != "beta_goe",
                      "scan: parameter '" + axis.param + "' does not exist on " +
                          std::string(scaleinv::to_string(c.model.kind)));
    }
    if (c.model.kind != ModelKind::AubryAndre) {
      detail::require(axis.param != "lambda", "scan: lambda exists only on aubry_andre");
    }
    if (c.model.kind != ModelKind::Anderson3D) {
      detail::require(axis.param != "W", "scan: W exists only on anderson3d");
    }
  }
  for (const auto& p : expand_scan(c)) scaleinv::validate(p.model);
  (void)make_grid(c.grid);
  detail::require(!c.tasks.empty(), "tasks must not be empty");
  detail::require(!c.initial_states.empty() || !(c.has_task(Task::Survival) || c.has_task(Task::IPR)),
                  "initial_states must not be empty");
  detail::require(c.sff_running_window >= 1 && c.sff_running_window % 2 == 1,
                  "sff_running_window must be a positive odd integer");
  detail::require(c.spacing_floor >= 0.0 && c.spacing_floor < 1.0,
                  "spacing_floor must lie in [0, 1)");
  detail::require(c.memory_budget_mb > 0.0, "memory_budget_mb must be positive");
  detail::require(c.rstat.fraction > 0.0 && c.rstat.fraction <= 1.0,
                  "rstat.fraction must lie in (0, 1]");
  detail::require(c.p_inf.value >= 0.0, "p_inf.value must be non-negative");
  if (c.power_window) {
    detail::require(c.power_window->lo > 0.0 && c.power_window->lo < c.power_window->hi,
                    "fits.power_window needs 0 < lo < hi");
  }
  if (c.collapse) {
    detail::require(c.collapse->alpha_range.lo > 0.0 &&
                        c.collapse->alpha_range.lo <= c.collapse->alpha_range.hi,
                    "collapse.alpha_range invalid");
    detail::require(c.collapse->mu_range.lo > 0.0 &&
                        c.collapse->mu_range.lo <= c.collapse->mu_range.hi,
                    "collapse.mu_range invalid");
    detail::require(c.collapse->grid >= 1, "collapse.grid must be positive");
  }
}

TimeGrid make_grid(const GridSpec& spec) {
  return make_time_grid_per_decade(spec.t_min, spec.t_max, spec.points_per_decade, spec.scale);
}

json to_json(const ModelConfig& m) {
  return json{{"kind", scaleinv::to_string(m.kind)},
              {"L", m.L},
              {"J", m.J},
              {"lambda", m.lambda},
              {"W", m.W},
              {"N", m.N},
              {"g0", m.g0},
              {"alpha", m.alpha},
              {"beta_goe", m.beta_goe},
              {"boundary", scaleinv::to_string(m.boundary)}};
}

ModelConfig model_from_json(const json& j) {
  reject_unknown_keys(j, {"kind", "L", "J", "lambda", "W", "N", "g0", "alpha", "beta_goe", "boundary"},
                      "model");
  if (!j.contains("kind")) detail::throw_invalid("model: missing 'kind'");
  ModelConfig m;
  const auto kind = parse_model_kind(j.at("kind").get<std::string>());
  switch (kind) {
    case ModelKind::AubryAndre: m = ModelConfig::aubry_andre(2, 0.0); break;
    case ModelKind::Anderson3D: m = ModelConfig::anderson3d(2, 0.0); break;
    case ModelKind::Avalanche: m = ModelConfig::avalanche(5, 1, 1.0); break;
  }
  m.L = get_or(j, "L", m.L);
  m.J = get_or(j, "J", m.J);
  m.lambda = get_or(j, "lambda", m.lambda);
  m.W = get_or(j, "W", m.W);
  m.N = get_or(j, "N", m.N);
  m.g0 = get_or(j, "g0", m.g0);
  m.alpha = get_or(j, "alpha", m.alpha);
  m.beta_goe = get_or(j, "beta_goe", m.beta_goe);
  if (j.contains("boundary")) m.boundary = parse_boundary(j.at("boundary").get<std::string>());
  return m;
}

json to_json(const SweepConfig& c) {
  json scan = json::array();
  for (const auto& a : c.scan) scan.push_back({{"param", a.param}, {"values", a.values}});
  json by_size = json::object();
  for (const auto& [size, count] : c.realizations_by_size) by_size[std::to_string(size)] = count;
  json tasks = json::array();
  for (Task t : c.tasks) tasks.push_back(to_string(t));
  json states = json::array();
  for (auto f : c.initial_states) states.push_back(scaleinv::to_string(f));
  json fits = json::object();
  if (c.power_window) fits["power_window"] = window_to_json(*c.power_window);
  json out{{"name", c.name},
           {"model", to_json(c.model)},
           {"scan", scan},
           {"realizations", {{"default", c.realizations}, {"by_size", by_size}}},
           {"master_seed", c.master_seed},
           {"grid",
            {{"t_min", c.grid.t_min},
             {"t_max", c.grid.t_max},
             {"points_per_decade", c.grid.points_per_decade},
             {"scale", scaleinv::to_string(c.grid.scale)}}},
           {"tasks", tasks},
           {"initial_states", states},
           {"p_inf", {{"mode", to_string(c.p_inf.mode)}, {"value", c.p_inf.value}}},
           {"fits", fits},
           {"rstat", {{"fraction", c.rstat.fraction}, {"count", c.rstat.count}}},
           {"sff_running_window", c.sff_running_window},
           {"spacing_floor", c.spacing_floor},
           {"heisenberg_pooling",
            c.heisenberg_pooling == SpacingPooling::Pooled ? "pooled" : "per_realization"},
           {"memory_budget_mb", c.memory_budget_mb}};
  if (c.collapse) {
    out["collapse"] = {{"alpha_range", window_to_json(c.collapse->alpha_range)},
                       {"mu_range", window_to_json(c.collapse->mu_range)},
                       {"grid", c.collapse->grid}};
  }
  return out;
}

SweepConfig config_from_json(const json& j) {
  reject_unknown_keys(j,
                      {"name", "model", "scan", "realizations", "master_seed", "grid", "tasks",
                       "initial_states", "p_inf", "fits", "rstat", "collapse",
                       "sff_running_window", "spacing_floor", "heisenberg_pooling",
                       "memory_budget_mb"},
                      "config");
  SweepConfig c;
  try {
    c.name = get_or<std::string>(j, "name", c.name);
    if (!j.contains("model")) detail::throw_invalid("config: missing 'model'");
    c.model = model_from_json(j.at("model"));
    if (j.contains("scan")) {
      if (!j.at("scan").is_array()) detail::throw_invalid("scan: expected an array");
      for (const auto& a : j.at("scan")) {
        reject_unknown_keys(a, {"param", "values"}, "scan entry");
        c.scan.push_back({a.at("param").get<std::string>(), a.at("values").get<std::vector<double>>()});
      }
    }
    if (j.contains("realizations")) {
      const auto& r = j.at("realizations");
      if (r.is_number_integer()) {
        c.realizations = r.get<int>();
      } else {
        reject_unknown_keys(r, {"default", "by_size"}, "realizations");
        c.realizations = get_or(r, "default", c.realizations);
        if (r.contains("by_size")) {
          for (const auto& [key, value] : r.at("by_size").items()) {
            c.realizations_by_size[std::stoi(key)] = value.get<int>();
          }
        }
      }
    }
    c.master_seed = get_or<std::uint64_t>(j, "master_seed", c.master_seed);
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      reject_unknown_keys(g, {"t_min", "t_max", "points_per_decade", "scale"}, "grid");
      c.grid.t_min = get_or(g, "t_min", c.grid.t_min);
      c.grid.t_max = get_or(g, "t_max", c.grid.t_max);
      c.grid.points_per_decade = get_or(g, "points_per_decade", c.grid.points_per_decade);
      if (g.contains("scale")) c.grid.scale = parse_time_scale(g.at("scale").get<std::string>());
    }
    if (j.contains("tasks")) {
      c.tasks.clear();
      for (const auto& t : j.at("tasks")) {
        const Task task = parse_task(t.get<std::string>());
        if (!c.has_task(task)) c.tasks.push_back(task);
      }
    }
    if (j.contains("initial_states")) {
      c.initial_states.clear();
      for (const auto& s : j.at("initial_states")) {
        const auto f = parse_initial_family(s.get<std::string>());
        if (std::find(c.initial_states.begin(), c.initial_states.end(), f) == c.initial_states.end())
          c.initial_states.push_back(f);
      }
    }
    if (j.contains("p_inf")) {
      const auto& p = j.at("p_inf");
      if (p.is_string()) {
        c.p_inf.mode = parse_pinf_mode(p.get<std::string>());
      } else {
        reject_unknown_keys(p, {"mode", "value"}, "p_inf");
        c.p_inf.mode = parse_pinf_mode(get_or<std::string>(p, "mode", "zero"));
        c.p_inf.value = get_or(p, "value", 0.0);
      }
    }
    if (j.contains("fits")) {
      const auto& f = j.at("fits");
      reject_unknown_keys(f, {"power_window"}, "fits");
      if (f.contains("power_window")) c.power_window = window_from_json(f.at("power_window"), "fits.power_window");
    }
    if (j.contains("rstat")) {
      const auto& r = j.at("rstat");
      reject_unknown_keys(r, {"fraction", "count"}, "rstat");
      c.rstat.fraction = get_or(r, "fraction", c.rstat.fraction);
      c.rstat.count = get_or<std::size_t>(r, "count", c.rstat.count);
    }
    if (j.contains("collapse")) {
      const auto& k = j.at("collapse");
      reject_unknown_keys(k, {"alpha_range", "mu_range", "grid"}, "collapse");
      CollapseSpec spec;
      if (k.contains("alpha_range")) spec.alpha_range = window_from_json(k.at("alpha_range"), "collapse.alpha_range");
      if (k.contains("mu_range")) spec.mu_range = window_from_json(k.at("mu_range"), "collapse.mu_range");
      spec.grid = get_or<std::size_t>(k, "grid", spec.grid);
      c.collapse = spec;
    }
    c.sff_running_window = get_or(j, "sff_running_window", c.sff_running_window);
    c.spacing_floor = get_or(j, "spacing_floor", c.spacing_floor);
    if (j.contains("heisenberg_pooling")) {
      const auto p = j.at("heisenberg_pooling").get<std::string>();
      if (p == "pooled") c.heisenberg_pooling = SpacingPooling::Pooled;
      else if (p == "per_realization") c.heisenberg_pooling = SpacingPooling::PerRealization;
      else detail::throw_invalid("unknown heisenberg_pooling '" + p + "'");
    }
    c.memory_budget_mb = get_or(j, "memory_budget_mb", c.memory_budget_mb);
  } catch (const json::exception& e) {
    detail::throw_invalid(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    // std::stoi on a non-numeric by_size key
    if (dynamic_cast<const InvalidArgument*>(&e)) throw;
    detail::throw_invalid(std::string("config: ") + e.what());
  }
  validate(c);
  return c;
}

SweepConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    detail::throw_invalid("config '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

std::string config_hash(const SweepConfig& config) {
  const std::string text = to_json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace scaleinv::harness
