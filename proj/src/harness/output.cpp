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

#include "scaleinv/harness/output.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "scaleinv/error.hpp"

namespace scaleinv::harness {

namespace fs = std::filesystem;

std::string_view to_string(OutputFormat format) noexcept {
  return format == OutputFormat::Json ? "json" : "tsv";
}

OutputFormat parse_output_format(std::string_view text) {
  if (text == "tsv") return OutputFormat::Tsv;
  if (text == "json") return OutputFormat::Json;
  detail::throw_invalid("unknown output format '" + std::string(text) + "' (expected tsv or json)");
}

std::string file_stem(const std::vector<std::pair<std::string, double>>& params) {
  std::string out;
  for (const auto& [k, v] : params) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%.10g", k.c_str(), v);
    if (!out.empty()) out += '_';
    out += buf;
  }
  return out.empty() ? "base" : out;
}

namespace {

constexpr const char* kSeedPolicy =
    "realization r of every scan point uses seed derive_seed(master_seed, r) "
    "= mix(mix(master_seed ^ 0x5ca1e1e5ca1e1e5) + 0x9e3779b97f4a7c15 * (r + 1)) "
    "with the SplitMix64 finalizer mix; phase, on-site energies, fields, exponents, "
    "partners and the dot matrix draw from counter streams 1..6 of that seed";

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json family_json(const ManifestFamily& f) {
  json j{{"family", scaleinv::to_string(f.family)},
         {"P_bar", json_number(f.P_bar)},
         {"P_bar_err", json_number(f.P_bar_err)},
         {"P_inf", json_number(f.P_inf)}};
  if (f.power_fit) j["power_fit"] = to_json(*f.power_fit);
  return j;
}

ManifestFamily family_from(const json& j) {
  ManifestFamily f;
  f.family = parse_initial_family(j.at("family").get<std::string>());
  f.P_bar = number_from_json(j.at("P_bar"));
  f.P_bar_err = number_from_json(j.at("P_bar_err"));
  f.P_inf = number_from_json(j.at("P_inf"));
  if (j.contains("power_fit")) f.power_fit = fit_from_json(j.at("power_fit"));
  return f;
}

json params_json(const std::vector<std::pair<std::string, double>>& params) {
  json a = json::array();
  for (const auto& [k, v] : params) a.push_back(json::array({k, json_number(v)}));
  return a;
}

std::vector<std::pair<std::string, double>> params_from(const json& j) {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& e : j) out.emplace_back(e.at(0).get<std::string>(), number_from_json(e.at(1)));
  return out;
}

// One table: '#' header lines, then whitespace-separated columns.
struct Table {
  std::string name;  // file stem, without extension
  std::vector<std::string> header;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::string render_tsv(const Table& t) {
  std::ostringstream out;
  for (const auto& h : t.header) out << "# " << h << '\n';
  out << '#';
  for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "\t" : " ") << t.columns[c];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "\t" : "") << fmt(row[c]);
    out << '\n';
  }
  return out.str();
}

json table_json(const Table& t) {
  json rows = json::array();
  for (const auto& row : t.rows) {
    json r = json::array();
    for (double v : row) r.push_back(json_number(v));
    rows.push_back(r);
  }
  return json{{"name", t.name}, {"header", t.header}, {"columns", t.columns}, {"rows", rows}};
}

Table curve_table(std::string name, const CurveEnsemble& c, const std::string& label,
                  std::vector<double> abscissa, const char* abscissa_name) {
  Table t;
  t.name = std::move(name);
  t.header = {std::string("curve ") + std::string(scaleinv::to_string(c.kind)) + " at " + label,
              "D = " + std::to_string(c.constants.dim) +
                  ", realizations = " + std::to_string(c.n_realizations) +
                  ", initial states = " + std::to_string(c.n_initial_states),
              "P_bar = " + fmt(c.constants.P_bar) + ", P_inf = " + fmt(c.constants.P_inf) +
                  ", t_H_typ = " + fmt(c.constants.t_H_typ)};
  t.columns = {abscissa_name, "mean", "std_err"};
  for (std::size_t i = 0; i < c.mean.size(); ++i) {
    t.rows.push_back({abscissa[i], c.mean[i], c.std_err.empty() ? 0.0 : c.std_err[i]});
  }
  return t;
}

std::vector<Table> build_tables(const ResultSet& rs, const SweepConfig& config) {
  std::vector<Table> tables;
  for (const auto& p : rs.points) {
    const std::string stem = file_stem(p.params);
    const std::string label = point_label(p.params);
    for (const auto& f : p.families) {
      const std::string fam(scaleinv::to_string(f.family));
      if (f.survival_raw) {
        const auto& c = *f.survival_raw;
        tables.push_back(curve_table(stem + "_" + fam + "_P", c, label,
                                     evaluation_times(c.grid, c.constants.t_H_typ), "t"));
      }
      if (f.survival_scaled) {
        const auto& c = *f.survival_scaled;
        tables.push_back(curve_table(stem + "_" + fam + "_p", c, label, c.grid.values, "tau"));
      }
    }
    if (p.sff) tables.push_back(curve_table(stem + "_sff", *p.sff, label, p.sff->grid.values, "tau"));
  }

  for (const auto& g : rs.groups) {
    const std::string stem = g.params.empty() ? "scaling" : "scaling_" + file_stem(g.params);
    for (std::size_t f = 0; f < config.initial_states.size(); ++f) {
      Table t;
      t.name = stem + "_" + std::string(scaleinv::to_string(config.initial_states[f]));
      t.header = {"size scaling" + (g.params.empty() ? std::string() : " at " + point_label(g.params)),
                  "family " + std::string(scaleinv::to_string(config.initial_states[f]))};
      t.columns = {"D", "P_bar", "P_bar_err", "t_H_typ"};
      for (auto i : g.points) {
        const auto& p = rs.points[i];
        const bool has = f < p.families.size();
        t.rows.push_back({static_cast<double>(p.dim), has ? p.families[f].P_bar : 0.0,
                          has ? p.families[f].P_bar_err : 0.0, p.t_H_typ});
      }
      tables.push_back(std::move(t));
    }
  }

  if (config.has_task(Task::RStat)) {
    Table t;
    t.name = "rstat";
    t.header = {"mean gap ratio per scan point"};
    if (!rs.points.empty()) {
      for (const auto& kv : rs.points.front().params) t.columns.push_back(kv.first);
    }
    for (const char* c : {"D", "r_bar", "r_bar_err", "realizations"}) t.columns.push_back(c);
    for (const auto& p : rs.points) {
      if (!p.r_bar) continue;
      std::vector<double> row;
      for (const auto& kv : p.params) row.push_back(kv.second);
      row.insert(row.end(), {static_cast<double>(p.dim), *p.r_bar, p.r_bar_err,
                             static_cast<double>(p.n_used)});
      t.rows.push_back(std::move(row));
    }
    tables.push_back(std::move(t));
  }

  if (config.has_task(Task::SFF)) {
    Table t;
    t.name = "goe_sff_reference";
    t.header = {"GOE spectral form factor 2 tau - tau ln(1 + 2 tau), tau <= 1; "
                "2 - tau ln((2 tau + 1) / (2 tau - 1)) beyond"};
    t.columns = {"tau", "K_GOE"};
    for (double tau : make_grid(config.grid).values) t.rows.push_back({tau, goe_sff_reference(tau)});
    tables.push_back(std::move(t));
  }
  return tables;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace

Manifest make_manifest(const ResultSet& rs, const SweepConfig& config) {
  Manifest m;
  m.software = rs.software;
  m.version = rs.version;
  m.config_hash = rs.config_hash;
  m.config = config;
  m.seed_policy = kSeedPolicy;
  m.complete = rs.complete;
  for (const auto& p : rs.points) {
    ManifestPoint mp;
    mp.label = point_label(p.params);
    mp.params = p.params;
    mp.dim = p.dim;
    mp.n_requested = p.n_requested;
    mp.n_used = p.n_used;
    mp.n_failed = p.n_failed;
    mp.valid = p.valid;
    mp.complete = p.complete;
    mp.t_H_typ = p.t_H_typ;
    mp.r_bar = p.r_bar;
    mp.r_bar_err = p.r_bar_err;
    for (const auto& f : p.families) mp.families.push_back({f.family, f.P_bar, f.P_bar_err, f.P_inf, f.power_fit});
    m.points.push_back(std::move(mp));
  }
  m.groups = rs.groups;
  m.collapse = rs.collapse;
  bool plane = false;
  for (auto f : config.initial_states) plane = plane || f == InitialFamily::PlaneWave;
  if (plane && config.model.kind == ModelKind::Avalanche) {
    m.notes.push_back(
        "plane-wave index m runs over Fock basis states in lexicographic tensor-product order: "
        "dot spins are the leading factors, spin j of a block of n spins is bit n-1-j, bit 0 is up");
  }
  if (plane && config.model.kind == ModelKind::Anderson3D) {
    m.notes.push_back("plane waves on the cube use the flattened site index (x L + y) L + z");
  }
  for (const auto& [L, count] : config.realizations_by_size) {
    m.notes.push_back("realizations at L = " + std::to_string(L) + ": " + std::to_string(count));
  }
  return m;
}

json to_json(const Manifest& m) {
  json points = json::array();
  for (const auto& p : m.points) {
    json fams = json::array();
    for (const auto& f : p.families) fams.push_back(family_json(f));
    json jp{{"label", p.label},
            {"params", params_json(p.params)},
            {"D", p.dim},
            {"n_requested", p.n_requested},
            {"n_used", p.n_used},
            {"n_failed", p.n_failed},
            {"valid", p.valid},
            {"complete", p.complete},
            {"t_H_typ", json_number(p.t_H_typ)},
            {"r_bar_err", json_number(p.r_bar_err)},
            {"families", fams}};
    if (p.r_bar) jp["r_bar"] = json_number(*p.r_bar);
    points.push_back(jp);
  }
  json groups = json::array();
  for (const auto& g : m.groups) groups.push_back(group_to_json(g));
  json j{{"software", m.software},
         {"version", m.version},
         {"config_hash", m.config_hash},
         {"config", to_json(m.config)},
         {"master_seed", m.config.master_seed},
         {"seed_policy", m.seed_policy},
         {"complete", m.complete},
         {"points", points},
         {"groups", groups},
         {"notes", m.notes},
         {"files", m.files}};
  if (m.collapse) j["collapse"] = to_json(*m.collapse);
  return j;
}

Manifest manifest_from_json(const json& j) {
  try {
    Manifest m;
    m.software = j.at("software").get<std::string>();
    m.version = j.at("version").get<std::string>();
    m.config_hash = j.at("config_hash").get<std::string>();
    m.config = config_from_json(j.at("config"));
    m.seed_policy = j.at("seed_policy").get<std::string>();
    m.complete = j.at("complete").get<bool>();
    for (const auto& jp : j.at("points")) {
      ManifestPoint p;
      p.label = jp.at("label").get<std::string>();
      p.params = params_from(jp.at("params"));
      p.dim = jp.at("D").get<std::size_t>();
      p.n_requested = jp.at("n_requested").get<int>();
      p.n_used = jp.at("n_used").get<int>();
      p.n_failed = jp.at("n_failed").get<int>();
      p.valid = jp.at("valid").get<bool>();
      p.complete = jp.at("complete").get<bool>();
      p.t_H_typ = number_from_json(jp.at("t_H_typ"));
      p.r_bar_err = number_from_json(jp.at("r_bar_err"));
      if (jp.contains("r_bar")) p.r_bar = number_from_json(jp.at("r_bar"));
      for (const auto& f : jp.at("families")) p.families.push_back(family_from(f));
      m.points.push_back(std::move(p));
    }
    for (const auto& g : j.at("groups")) m.groups.push_back(group_from_json(g));
    if (j.contains("collapse")) m.collapse = collapse_from_json(j.at("collapse"));
    m.notes = j.at("notes").get<std::vector<std::string>>();
    m.files = j.at("files").get<std::vector<std::string>>();
    return m;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed manifest: ") + e.what());
  }
}

Manifest parse_manifest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError("'" + path.string() + "' is not JSON: " + e.what());
  }
  return manifest_from_json(j);
}

std::vector<fs::path> emit_outputs(const ResultSet& results, const SweepConfig& config,
                                   const fs::path& dir, const EmitOptions& options,
                                   const Timing* timing) {
  const auto tables = build_tables(results, config);
  std::vector<std::pair<std::string, std::string>> files;  // name, contents
  if (options.format == OutputFormat::Tsv) {
    for (const auto& t : tables) {
      if (t.name == "goe_sff_reference" && !options.reference_curves) continue;
      files.emplace_back(t.name + ".tsv", render_tsv(t));
    }
  } else {
    json all = json::array();
    for (const auto& t : tables) {
      if (t.name == "goe_sff_reference" && !options.reference_curves) continue;
      all.push_back(table_json(t));
    }
    files.emplace_back("curves.json", json{{"tables", all}}.dump(1) + "\n");
  }
  files.emplace_back("results.json", to_json(results).dump(1) + "\n");
  if (timing) {
    json jt{{"total_seconds", timing->total_seconds},
            {"point_seconds", timing->point_seconds},
            {"point_workers", timing->point_workers}};
    files.emplace_back("timing.json", jt.dump(1) + "\n");
  }
  Manifest manifest = make_manifest(results, config);
  for (const auto& f : files) manifest.files.push_back(f.first);
  manifest.files.push_back("manifest.json");
  files.emplace_back("manifest.json", to_json(manifest).dump(1) + "\n");

  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  if (!options.force) {
    for (const auto& f : files) {
      if (fs::exists(dir / f.first)) {
        throw IoError("'" + (dir / f.first).string() + "' exists; pass --force to overwrite");
      }
    }
  }
  std::vector<fs::path> written;
  for (const auto& [name, text] : files) {
    write_file(dir / name, text);
    written.push_back(dir / name);
  }
  return written;
}

std::vector<double> TableData::column(std::string_view name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) detail::throw_invalid("table has no column '" + std::string(name) + "'");
  const auto c = static_cast<std::size_t>(it - columns.begin());
  std::vector<double> out;
  for (const auto& row : rows) {
    if (c >= row.size()) detail::throw_invalid("short row in table column '" + std::string(name) + "'");
    out.push_back(row[c]);
  }
  return out;
}

TableData read_table(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  TableData t;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string text = line.substr(1);
      if (!text.empty() && text[0] == ' ') text.erase(0, 1);
      t.header.push_back(text);
      continue;
    }
    std::istringstream fields(line);
    std::vector<double> row;
    std::string field;
    while (fields >> field) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(field, &used));
        if (used != field.size()) throw std::invalid_argument(field);
      } catch (const std::exception&) {
        detail::throw_invalid("'" + path.string() + "': not a number: '" + field + "'");
      }
    }
    t.rows.push_back(std::move(row));
  }
  if (!t.header.empty()) {
    std::istringstream names(t.header.back());
    std::string name;
    while (names >> name) t.columns.push_back(name);
  }
  return t;
}

}  // namespace scaleinv::harness
