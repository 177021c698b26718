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

#include "scaleinv/harness/results.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "scaleinv/error.hpp"

namespace scaleinv::harness {

namespace {

// Non-finite doubles are written as strings so the JSON stays valid.
json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double as_double(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw IoError("results: expected a number, got " + j.dump());
}

json nums(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

std::vector<double> as_doubles(const json& j) {
  std::vector<double> v;
  v.reserve(j.size());
  for (const auto& x : j) v.push_back(as_double(x));
  return v;
}

json params_to_json(const std::vector<std::pair<std::string, double>>& params) {
  json a = json::array();
  for (const auto& [k, v] : params) a.push_back(json::array({k, num(v)}));
  return a;
}

std::vector<std::pair<std::string, double>> params_from_json(const json& j) {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& e : j) out.emplace_back(e.at(0).get<std::string>(), as_double(e.at(1)));
  return out;
}

template <class T, class F>
void put_optional(json& j, const char* key, const std::optional<T>& v, F&& convert) {
  if (v) j[key] = convert(*v);
}

json window_json(FitWindow w) { return json::array({num(w.lo), num(w.hi)}); }
FitWindow window_from(const json& j) { return {as_double(j.at(0)), as_double(j.at(1))}; }

json family_to_json(const FamilyResult& f) {
  json j{{"family", scaleinv::to_string(f.family)},
         {"P_bar", num(f.P_bar)},
         {"P_bar_err", num(f.P_bar_err)},
         {"P_inf", num(f.P_inf)},
         {"note", f.note}};
  put_optional(j, "survival_raw", f.survival_raw, [](const auto& c) { return to_json(c); });
  put_optional(j, "survival_scaled", f.survival_scaled, [](const auto& c) { return to_json(c); });
  put_optional(j, "power_fit", f.power_fit, [](const auto& c) { return to_json(c); });
  return j;
}

FamilyResult family_from_json(const json& j) {
  FamilyResult f;
  f.family = parse_initial_family(j.at("family").get<std::string>());
  f.P_bar = as_double(j.at("P_bar"));
  f.P_bar_err = as_double(j.at("P_bar_err"));
  f.P_inf = as_double(j.at("P_inf"));
  f.note = j.at("note").get<std::string>();
  if (j.contains("survival_raw")) f.survival_raw = curve_from_json(j.at("survival_raw"));
  if (j.contains("survival_scaled")) f.survival_scaled = curve_from_json(j.at("survival_scaled"));
  if (j.contains("power_fit")) f.power_fit = fit_from_json(j.at("power_fit"));
  return f;
}

json point_to_json(const PointResult& p) {
  json fams = json::array();
  for (const auto& f : p.families) fams.push_back(family_to_json(f));
  json j{{"params", params_to_json(p.params)},
         {"model", to_json(p.model)},
         {"dim", p.dim},
         {"n_requested", p.n_requested},
         {"n_used", p.n_used},
         {"n_failed", p.n_failed},
         {"valid", p.valid},
         {"complete", p.complete},
         {"failures", p.failures},
         {"t_H_typ", num(p.t_H_typ)},
         {"delta_typ", num(p.delta_typ)},
         {"n_spacings_retained", p.n_spacings_retained},
         {"n_spacings_discarded", p.n_spacings_discarded},
         {"r_bar_err", num(p.r_bar_err)},
         {"r_dropped", p.r_dropped},
         {"families", fams}};
  put_optional(j, "r_bar", p.r_bar, [](double v) { return num(v); });
  put_optional(j, "sff", p.sff, [](const auto& c) { return to_json(c); });
  return j;
}

PointResult point_from_json(const json& j) {
  PointResult p;
  p.params = params_from_json(j.at("params"));
  p.model = model_from_json(j.at("model"));
  p.dim = j.at("dim").get<std::size_t>();
  p.n_requested = j.at("n_requested").get<int>();
  p.n_used = j.at("n_used").get<int>();
  p.n_failed = j.at("n_failed").get<int>();
  p.valid = j.at("valid").get<bool>();
  p.complete = j.at("complete").get<bool>();
  p.failures = j.at("failures").get<std::vector<std::string>>();
  p.t_H_typ = as_double(j.at("t_H_typ"));
  p.delta_typ = as_double(j.at("delta_typ"));
  p.n_spacings_retained = j.at("n_spacings_retained").get<std::size_t>();
  p.n_spacings_discarded = j.at("n_spacings_discarded").get<std::size_t>();
  p.r_bar_err = as_double(j.at("r_bar_err"));
  p.r_dropped = j.at("r_dropped").get<std::size_t>();
  if (j.contains("r_bar")) p.r_bar = as_double(j.at("r_bar"));
  if (j.contains("sff")) p.sff = curve_from_json(j.at("sff"));
  for (const auto& f : j.at("families")) p.families.push_back(family_from_json(f));
  return p;
}

}  // namespace

json group_to_json(const GroupResult& g) {
  json fams = json::array();
  for (const auto& f : g.families) {
    json jf{{"family", scaleinv::to_string(f.family)},
            {"P_inf_used", num(f.P_inf_used)},
            {"notes", f.notes}};
    put_optional(jf, "fractal_zero", f.fractal_zero, [](const auto& x) { return to_json(x); });
    put_optional(jf, "fractal_free", f.fractal_free, [](const auto& x) { return to_json(x); });
    put_optional(jf, "fractal_fixed", f.fractal_fixed, [](const auto& x) { return to_json(x); });
    put_optional(jf, "beta_prediction", f.beta_prediction, [](double v) { return num(v); });
    fams.push_back(jf);
  }
  json j{{"params", params_to_json(g.params)},
         {"points", g.points},
         {"dims", nums(g.dims)},
         {"t_H", nums(g.t_H)},
         {"families", fams},
         {"notes", g.notes}};
  put_optional(j, "heisenberg", g.heisenberg, [](const auto& x) { return to_json(x); });
  return j;
}

GroupResult group_from_json(const json& j) {
  GroupResult g;
  g.params = params_from_json(j.at("params"));
  g.points = j.at("points").get<std::vector<std::size_t>>();
  g.dims = as_doubles(j.at("dims"));
  g.t_H = as_doubles(j.at("t_H"));
  g.notes = j.at("notes").get<std::vector<std::string>>();
  if (j.contains("heisenberg")) g.heisenberg = fit_from_json(j.at("heisenberg"));
  for (const auto& jf : j.at("families")) {
    GroupFamilyResult f;
    f.family = parse_initial_family(jf.at("family").get<std::string>());
    f.P_inf_used = as_double(jf.at("P_inf_used"));
    f.notes = jf.at("notes").get<std::vector<std::string>>();
    if (jf.contains("fractal_zero")) f.fractal_zero = fit_from_json(jf.at("fractal_zero"));
    if (jf.contains("fractal_free")) f.fractal_free = fit_from_json(jf.at("fractal_free"));
    if (jf.contains("fractal_fixed")) f.fractal_fixed = fit_from_json(jf.at("fractal_fixed"));
    if (jf.contains("beta_prediction")) f.beta_prediction = as_double(jf.at("beta_prediction"));
    g.families.push_back(std::move(f));
  }
  return g;
}

json json_number(double v) { return num(v); }
double number_from_json(const json& j) { return as_double(j); }

json to_json(const TimeGrid& grid) {
  return json{{"scale", scaleinv::to_string(grid.scale)},
              {"t_min", num(grid.t_min)},
              {"t_max", num(grid.t_max)},
              {"values", nums(grid.values)}};
}

TimeGrid time_grid_from_json(const json& j) {
  TimeGrid g;
  g.scale = parse_time_scale(j.at("scale").get<std::string>());
  g.t_min = as_double(j.at("t_min"));
  g.t_max = as_double(j.at("t_max"));
  g.values = as_doubles(j.at("values"));
  return g;
}

json to_json(const CurveEnsemble& c) {
  return json{{"kind", scaleinv::to_string(c.kind)},
              {"grid", to_json(c.grid)},
              {"mean", nums(c.mean)},
              {"std_err", nums(c.std_err)},
              {"n_realizations", c.n_realizations},
              {"n_initial_states", c.n_initial_states},
              {"constants",
               {{"P_bar", num(c.constants.P_bar)},
                {"P_inf", num(c.constants.P_inf)},
                {"t_H_typ", num(c.constants.t_H_typ)},
                {"dim", c.constants.dim}}}};
}

CurveEnsemble curve_from_json(const json& j) {
  CurveEnsemble c;
  c.kind = parse_curve_kind(j.at("kind").get<std::string>());
  c.grid = time_grid_from_json(j.at("grid"));
  c.mean = as_doubles(j.at("mean"));
  c.std_err = as_doubles(j.at("std_err"));
  c.n_realizations = j.at("n_realizations").get<std::size_t>();
  c.n_initial_states = j.at("n_initial_states").get<std::size_t>();
  const auto& k = j.at("constants");
  c.constants.P_bar = as_double(k.at("P_bar"));
  c.constants.P_inf = as_double(k.at("P_inf"));
  c.constants.t_H_typ = as_double(k.at("t_H_typ"));
  c.constants.dim = k.at("dim").get<std::size_t>();
  return c;
}

json to_json(const FitResult& f) {
  json params = json::object();
  for (const auto& [k, v] : f.params) params[k] = num(v);
  return json{{"params", params},
              {"covariance", nums(f.covariance)},
              {"residual", num(f.residual)},
              {"window", window_json(f.window)},
              {"n_points", f.n_points},
              {"warnings", f.warnings}};
}

FitResult fit_from_json(const json& j) {
  FitResult f;
  for (const auto& [k, v] : j.at("params").items()) f.params[k] = as_double(v);
  f.covariance = as_doubles(j.at("covariance"));
  f.residual = as_double(j.at("residual"));
  f.window = window_from(j.at("window"));
  f.n_points = j.at("n_points").get<std::size_t>();
  f.warnings = j.at("warnings").get<std::vector<std::string>>();
  return f;
}

json to_json(const CollapseResult& c) {
  return json{{"alpha_c", num(c.alpha_c)},     {"mu", num(c.mu)},
              {"cost", num(c.cost)},           {"alpha_range", window_json(c.alpha_range)},
              {"mu_range", window_json(c.mu_range)}, {"converged", c.converged},
              {"note", c.note}};
}

CollapseResult collapse_from_json(const json& j) {
  CollapseResult c;
  c.alpha_c = as_double(j.at("alpha_c"));
  c.mu = as_double(j.at("mu"));
  c.cost = as_double(j.at("cost"));
  c.alpha_range = window_from(j.at("alpha_range"));
  c.mu_range = window_from(j.at("mu_range"));
  c.converged = j.at("converged").get<bool>();
  c.note = j.at("note").get<std::string>();
  return c;
}

json to_json(const ResultSet& r) {
  json points = json::array();
  for (const auto& p : r.points) points.push_back(point_to_json(p));
  json groups = json::array();
  for (const auto& g : r.groups) groups.push_back(group_to_json(g));
  json j{{"software", r.software}, {"version", r.version}, {"config_hash", r.config_hash},
         {"complete", r.complete}, {"points", points},     {"groups", groups}};
  put_optional(j, "collapse", r.collapse, [](const auto& c) { return to_json(c); });
  return j;
}

ResultSet results_from_json(const json& j) {
  try {
    ResultSet r;
    r.software = j.at("software").get<std::string>();
    r.version = j.at("version").get<std::string>();
    r.config_hash = j.at("config_hash").get<std::string>();
    r.complete = j.at("complete").get<bool>();
    for (const auto& p : j.at("points")) r.points.push_back(point_from_json(p));
    for (const auto& g : j.at("groups")) r.groups.push_back(group_from_json(g));
    if (j.contains("collapse")) r.collapse = collapse_from_json(j.at("collapse"));
    return r;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed results: ") + e.what());
  }
}

std::string point_label(const std::vector<std::pair<std::string, double>>& params) {
  std::string out;
  for (const auto& [k, v] : params) {
    if (!out.empty()) out += ',';
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s=%g", k.c_str(), v);
    out += buf;
  }
  return out.empty() ? "base" : out;
}

}  // namespace scaleinv::harness
