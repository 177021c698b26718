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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <unistd.h>

#include "doctest.h"
#include "scaleinv/analysis.hpp"
#include "scaleinv/dynamics.hpp"
#include "scaleinv/error.hpp"
#include "scaleinv/harness/config.hpp"
#include "scaleinv/harness/output.hpp"
#include "scaleinv/harness/presets.hpp"
#include "scaleinv/harness/results.hpp"
#include "scaleinv/harness/sweep.hpp"
#include "scaleinv/models.hpp"
#include "scaleinv/quench.hpp"
#include "scaleinv/rng.hpp"
#include "scaleinv/spectral.hpp"

using namespace scaleinv;
using namespace scaleinv::harness;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag)
      : path(fs::temp_directory_path() /
             ("scaleinv_" + tag + "_" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

SweepConfig small_aa() {
  SweepConfig c;
  c.name = "small";
  c.model = ModelConfig::aubry_andre(16, 2.0);
  c.scan = {{"L", {16, 24, 32}}};
  c.realizations = 6;
  c.master_seed = 99;
  c.grid.points_per_decade = 10;
  c.tasks = {Task::Survival, Task::IPR, Task::Heisenberg, Task::SFF, Task::RStat};
  c.initial_states = {InitialFamily::BasisLocalized, InitialFamily::PlaneWave};
  c.power_window = FitWindow{3e-3, 3e-2};
  return c;
}

SweepConfig small_avalanche() {
  SweepConfig c;
  c.model = ModelConfig::avalanche(2, 2, 0.7);
  c.scan = {{"alpha", {0.6, 0.8}}, {"L", {2, 3}}};
  c.realizations = 5;
  c.grid.points_per_decade = 8;
  c.tasks = {Task::Survival, Task::IPR, Task::Heisenberg, Task::SFF, Task::RStat};
  c.initial_states = {InitialFamily::PlaneWave, InitialFamily::BasisLocalized,
                      InitialFamily::InfiniteTemperature};
  return c;
}

std::string dump(const ResultSet& rs) { return to_json(rs).dump(); }

std::size_t count_files(const fs::path& dir) {
  std::size_t n = 0;
  for (const auto& e : fs::recursive_directory_iterator(dir)) n += e.is_regular_file();
  return n;
}

}  // namespace

TEST_CASE("config json round trip and hash") {
  SweepConfig c = small_aa();
  c.realizations_by_size = {{32, 3}};
  c.collapse = CollapseSpec{};
  c.p_inf = {PinfMode::Fixed, 0.01};
  c.heisenberg_pooling = SpacingPooling::PerRealization;
  const SweepConfig back = config_from_json(json::parse(to_json(c).dump()));
  CHECK(back == c);
  CHECK(config_hash(back) == config_hash(c));
  CHECK(config_hash(c).size() == 16);
  SweepConfig edited = c;
  edited.realizations = 7;
  CHECK(config_hash(edited) != config_hash(c));
}

TEST_CASE("config parsing accepts the short forms") {
  const auto j = json::parse(R"({
    "model": {"kind": "anderson3d", "L": 4, "W": 16.5},
    "scan": [{"param": "L", "values": [4, 6]}],
    "realizations": {"default": 10, "by_size": {"6": 4}},
    "p_inf": "fit",
    "tasks": ["ipr", "heisenberg"]
  })");
  const SweepConfig c = config_from_json(j);
  CHECK(c.model.kind == ModelKind::Anderson3D);
  CHECK(c.model.boundary == Boundary::Periodic);
  CHECK(c.p_inf.mode == PinfMode::Fit);
  const auto points = expand_scan(c);
  REQUIRE(points.size() == 2);
  CHECK(points[0].realizations == 10);
  CHECK(points[1].realizations == 4);
  CHECK(points[1].model.L == 6);
}

TEST_CASE("config rejects invalid input") {
  auto base = to_json(small_aa());
  auto bad = base;
  bad["realisations"] = 3;
  CHECK_THROWS_AS(config_from_json(bad), InvalidArgument);
  bad = base;
  bad["realizations"] = 0;
  CHECK_THROWS_AS(config_from_json(bad), InvalidArgument);
  bad = base;
  bad["scan"] = json::array({{{"param", "W"}, {"values", {1.0}}}});
  CHECK_THROWS_AS(config_from_json(bad), InvalidArgument);
  bad = base;
  bad["scan"] = json::array({{{"param", "L"}, {"values", {2.5}}}});
  CHECK_THROWS_AS(config_from_json(bad), InvalidArgument);
  bad = base;
  bad["tasks"] = json::array({"survival", "entropy"});
  CHECK_THROWS_AS(config_from_json(bad), InvalidArgument);
  bad = base;
  bad["model"]["kind"] = "ising";
  CHECK_THROWS_AS(config_from_json(bad), InvalidArgument);
  bad = base;
  bad["sff_running_window"] = 4;
  CHECK_THROWS_AS(config_from_json(bad), InvalidArgument);
  bad = base;
  bad.erase("model");
  CHECK_THROWS_AS(config_from_json(bad), InvalidArgument);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), IoError);
}

TEST_CASE("scan expansion puts the first axis outermost") {
  const auto points = expand_scan(small_avalanche());
  REQUIRE(points.size() == 4);
  CHECK(points[0].model.alpha == 0.6);
  CHECK(points[0].model.L == 2);
  CHECK(points[1].model.alpha == 0.6);
  CHECK(points[1].model.L == 3);
  CHECK(points[2].model.alpha == 0.8);
  CHECK(point_label(points[3].params) == "alpha=0.8,L=3");
  CHECK(file_stem(points[3].params) == "alpha0.8_L3");
}

TEST_CASE("one realization at D = 8 matches direct module calls") {
  SweepConfig c;
  c.model = ModelConfig::aubry_andre(8, 2.0);
  c.realizations = 1;
  c.master_seed = 5;
  c.grid.points_per_decade = 10;
  c.tasks = {Task::Survival, Task::SFF, Task::RStat, Task::IPR, Task::Heisenberg};
  c.initial_states = {InitialFamily::BasisLocalized, InitialFamily::PlaneWave,
                      InitialFamily::InfiniteTemperature};
  const ResultSet rs = run_sweep(c);
  REQUIRE(rs.complete);
  REQUIRE(rs.points.size() == 1);
  const PointResult& p = rs.points[0];
  CHECK(p.dim == 8);
  CHECK(p.n_used == 1);
  CHECK(p.valid);

  const auto real = sample_realization(c.model, derive_seed(c.master_seed, 0));
  const Spectrum spec = eigendecompose(build_hamiltonian(c.model, real));
  // Spectrum statistics come from the eigenvalue-only pass, curves from the
  // full decomposition.
  const auto e = eigendecompose(build_hamiltonian(c.model, real), {.vectors = false}).energies;
  const std::vector<std::vector<double>> sets{level_spacings(e)};
  const auto stats = typical_heisenberg_time(sets, spacing_floor(e, c.spacing_floor));
  CHECK(p.t_H_typ == stats.t_H_typ);

  const auto window = central_window(e.size(), c.rstat.fraction);
  const auto g = gap_ratios(e, window);
  double r = 0.0;
  for (double x : g.ratios) r += x;
  REQUIRE(p.r_bar);
  CHECK(*p.r_bar == doctest::Approx(r / static_cast<double>(g.ratios.size())).epsilon(1e-15));

  const TimeGrid grid = make_grid(c.grid);
  const auto sff = raw_sff(std::vector<std::vector<double>>{e}, grid, stats.t_H_typ,
                           static_cast<std::size_t>(c.sff_running_window));
  REQUIRE(p.sff);
  CHECK(p.sff->mean == sff.mean);

  const auto times = evaluation_times(grid, stats.t_H_typ);
  REQUIRE(p.families.size() == 3);
  for (std::size_t f = 0; f < 3; ++f) {
    const auto w = compute_overlaps(spec, c.initial_states[f]);
    CHECK(p.families[f].P_bar == mean_ipr(w));
    REQUIRE(p.families[f].survival_raw);
    CHECK(p.families[f].survival_raw->mean == survival_probability(spec.energies, w, times));
    REQUIRE(p.families[f].survival_scaled);
    const auto scaled = scaled_survival(*p.families[f].survival_raw, mean_ipr(w), 0.0, stats.t_H_typ);
    CHECK(p.families[f].survival_scaled->mean == scaled.mean);
  }
  // A single size cannot support the size fits.
  REQUIRE(rs.groups.size() == 1);
  CHECK_FALSE(rs.groups[0].heisenberg);
}

TEST_CASE("results do not depend on the worker count") {
  for (const SweepConfig& c : {small_aa(), small_avalanche()}) {
    RunOptions one;
    one.workers = 1;
    RunOptions eight;
    eight.workers = 8;
    const ResultSet a = run_sweep(c, one);
    const ResultSet b = run_sweep(c, eight);
    CHECK(a == b);
    CHECK(dump(a) == dump(b));
  }
}

TEST_CASE("running reduction equals a recomputation over stored realizations") {
  SweepConfig c = small_aa();
  c.scan = {{"L", {20}}};
  c.realizations = 15;
  c.tasks = {Task::IPR, Task::Survival, Task::Heisenberg};
  c.initial_states = {InitialFamily::BasisLocalized};
  const ResultSet rs = run_sweep(c);
  const PointResult& p = rs.points.at(0);

  std::vector<double> ipr;
  std::vector<std::vector<double>> spacing_sets;
  std::vector<Spectrum> spectra;
  for (int r = 0; r < c.realizations; ++r) {
    const auto real = sample_realization(p.model, derive_seed(c.master_seed, static_cast<std::uint64_t>(r)));
    spectra.push_back(eigendecompose(build_hamiltonian(p.model, real)));
    ipr.push_back(mean_ipr(overlaps_basis_localized(spectra.back())));
    spacing_sets.push_back(level_spacings(spectra.back().energies));
  }
  double mean = 0.0;
  for (double x : ipr) mean += x;
  mean /= static_cast<double>(ipr.size());
  double var = 0.0;
  for (double x : ipr) var += (x - mean) * (x - mean);
  var /= static_cast<double>(ipr.size() - 1);
  CHECK(p.families[0].P_bar == doctest::Approx(mean).epsilon(1e-13));
  CHECK(p.families[0].P_bar_err == doctest::Approx(std::sqrt(var / 15.0)).epsilon(1e-10));

  // The spacing floor is relative to each realization's bandwidth, so the
  // pooled t_H is recomputed with the floor of the narrowest spectrum when all
  // spacings clear it.
  const auto stats = typical_heisenberg_time(spacing_sets, 0.0);
  CHECK(p.n_spacings_discarded == 0);
  CHECK(p.t_H_typ == doctest::Approx(stats.t_H_typ).epsilon(1e-13));

  const auto times = evaluation_times(make_grid(c.grid), p.t_H_typ);
  for (std::size_t j = 0; j < times.size(); j += 7) {
    double m = 0.0;
    for (const auto& s : spectra) m += survival_probability(s, overlaps_basis_localized(s), times)[j];
    m /= static_cast<double>(spectra.size());
    CHECK(p.families[0].survival_raw->mean[j] == doctest::Approx(m).epsilon(1e-12));
  }
}

TEST_CASE("size groups carry the fits") {
  const ResultSet rs = run_sweep(small_aa());
  REQUIRE(rs.groups.size() == 1);
  const GroupResult& g = rs.groups[0];
  CHECK(g.dims == std::vector<double>{16, 24, 32});
  REQUIRE(g.heisenberg);
  CHECK(g.heisenberg->at("n") > 1.0);
  REQUIRE(g.families.size() == 2);
  CHECK(g.families[0].fractal_zero);
  CHECK(g.families[0].fractal_free);
  CHECK(g.families[0].beta_prediction);
  for (const auto& p : rs.points) {
    CHECK(p.families[0].power_fit);
    CHECK(p.r_bar);
  }

  SweepConfig av = small_avalanche();
  const ResultSet ra = run_sweep(av);
  REQUIRE(ra.groups.size() == 2);
  CHECK(ra.groups[0].params == std::vector<std::pair<std::string, double>>{{"alpha", 0.6}});
  CHECK(ra.groups[0].points == std::vector<std::size_t>{0, 1});
  CHECK(ra.groups[1].points == std::vector<std::size_t>{2, 3});
  CHECK(ra.groups[0].heisenberg);
  // Two sizes: no fractal fits, with a note saying so.
  CHECK_FALSE(ra.groups[0].families[0].fractal_zero);
  CHECK_FALSE(ra.groups[0].families[0].notes.empty());
}

TEST_CASE("collapse runs on a gap-ratio scan") {
  SweepConfig c;
  c.model = ModelConfig::avalanche(2, 2, 0.7);
  c.scan = {{"alpha", {0.6, 0.7, 0.8, 0.9}}, {"L", {2, 3}}};
  c.realizations = 4;
  c.tasks = {Task::RStat};
  c.collapse = CollapseSpec{{0.5, 1.0}, {0.2, 1.5}, 10};
  const ResultSet rs = run_sweep(c);
  REQUIRE(rs.collapse);
  CHECK(rs.collapse->alpha_c >= 0.5);
  CHECK(rs.collapse->alpha_c <= 1.0);
  CHECK(std::isfinite(rs.collapse->cost));
}

TEST_CASE("interrupted sweep resumes to the straight-through result") {
  TempDir tmp("resume");
  const SweepConfig c = small_avalanche();
  const ResultSet straight = run_sweep(c);

  RunOptions first;
  first.checkpoint_dir = tmp.path / "ckpt";
  first.stop_after = 7;
  const ResultSet partial = run_sweep(c, first);
  CHECK_FALSE(partial.complete);
  CHECK(count_files(tmp.path / "ckpt") == 7 + 2);

  RunOptions again;
  again.checkpoint_dir = tmp.path / "ckpt";
  again.resume = true;
  again.workers = 3;
  const ResultSet resumed = run_sweep(c, again);
  CHECK(resumed.complete);
  CHECK(dump(resumed) == dump(straight));

  // Nothing left to compute: a zero job budget still completes.
  const std::size_t files = count_files(tmp.path / "ckpt");
  RunOptions noop;
  noop.checkpoint_dir = tmp.path / "ckpt";
  noop.resume = true;
  noop.stop_after = 0;
  const ResultSet again_rs = run_sweep(c, noop);
  CHECK(again_rs.complete);
  CHECK(dump(again_rs) == dump(straight));
  CHECK(count_files(tmp.path / "ckpt") == files);

  CHECK(dump(resume_sweep(tmp.path / "ckpt")) == dump(straight));

  SweepConfig edited = c;
  edited.master_seed = 2;
  CHECK_THROWS_AS(run_sweep(edited, noop), InvalidArgument);

  RunOptions fresh;
  fresh.checkpoint_dir = tmp.path / "ckpt";
  CHECK_THROWS_AS(run_sweep(c, fresh), IoError);
  fresh.force = true;
  CHECK(dump(run_sweep(c, fresh)) == dump(straight));

  RunOptions missing;
  missing.checkpoint_dir = tmp.path / "absent";
  missing.resume = true;
  CHECK_THROWS_AS(run_sweep(c, missing), IoError);
}

TEST_CASE("memory budget limits workers") {
  SweepConfig c = small_aa();
  CHECK(effective_workers(c, 1000, 8) == 8);
  c.initial_states = {InitialFamily::BasisLocalized};
  c.memory_budget_mb = 120;
  // 1000^2 doubles is 8 MB; each worker holds three such buffers.
  CHECK(effective_workers(c, 1000, 8) == 4);
  CHECK(effective_workers(c, 10000, 8) == 1);
  c.memory_budget_mb = 0.001;
  CHECK_THROWS_AS(run_sweep(c), InvalidArgument);
  CHECK(worker_memory_bytes(100, false, 0) < worker_memory_bytes(100, true, 0));
  CHECK(worker_memory_bytes(100, true, 1) > worker_memory_bytes(100, true, 0));
}

TEST_CASE("two-level survival file holds cos^2 samples") {
  TempDir tmp("toy");
  SweepConfig c;
  c.model = ModelConfig::aubry_andre(2, 0.0);
  c.realizations = 1;
  c.grid = {1e-2, 1e1, 20, TimeScale::Absolute};
  c.tasks = {Task::Survival, Task::IPR, Task::Heisenberg};
  const ResultSet rs = run_sweep(c);
  const auto files = emit_outputs(rs, c, tmp.path);
  CHECK(files.size() >= 4);
  const TableData t = read_table(tmp.path / "base_basis_P.tsv");
  REQUIRE(t.columns == std::vector<std::string>{"t", "mean", "std_err"});
  REQUIRE(t.rows.size() == 61);
  // Energies -J, +J with J = 1: P(t) = cos^2(Delta t / 2), Delta = 2.
  for (const auto& row : t.rows) {
    CHECK(std::abs(row[1] - std::cos(row[0]) * std::cos(row[0])) < 1e-14);
  }
}

TEST_CASE("emitted tables, manifest round trip and overwrite guard") {
  TempDir tmp("emit");
  SweepConfig c = small_aa();
  c.grid.scale = TimeScale::HeisenbergScaled;
  Timing timing;
  const ResultSet rs = run_sweep(c, {}, &timing);
  CHECK(timing.point_seconds.size() == 3);
  const auto files = emit_outputs(rs, c, tmp.path, {}, &timing);

  const Manifest m = parse_manifest(tmp.path / "manifest.json");
  Manifest expected = make_manifest(rs, c);
  expected.files = m.files;
  CHECK(m == expected);
  CHECK(manifest_from_json(to_json(m)) == m);
  CHECK(m.files.size() == files.size());
  for (const auto& f : m.files) CHECK(fs::exists(tmp.path / f));
  CHECK(m.points.size() == 3);
  CHECK(m.points[2].dim == 32);
  CHECK(m.config_hash == config_hash(c));
  CHECK(m.version == SCALEINV_VERSION);

  std::ifstream in(tmp.path / "results.json");
  CHECK(results_from_json(json::parse(in)) == rs);

  const TableData scaling = read_table(tmp.path / "scaling_basis.tsv");
  CHECK(scaling.columns == std::vector<std::string>{"D", "P_bar", "P_bar_err", "t_H_typ"});
  REQUIRE(scaling.rows.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(scaling.rows[i][0] == static_cast<double>(rs.points[i].dim));
    CHECK(scaling.rows[i][1] == rs.points[i].families[0].P_bar);
    CHECK(scaling.rows[i][3] == rs.points[i].t_H_typ);
  }

  const TableData p = read_table(tmp.path / "L32_plane_wave_p.tsv");
  CHECK(p.column("tau") == rs.points[2].families[1].survival_scaled->grid.values);
  CHECK(p.column("mean") == rs.points[2].families[1].survival_scaled->mean);

  const TableData goe = read_table(tmp.path / "goe_sff_reference.tsv");
  for (const auto& row : goe.rows) CHECK(row[1] == goe_sff_reference(row[0]));
  const TableData r = read_table(tmp.path / "rstat.tsv");
  CHECK(r.column("r_bar").size() == 3);

  CHECK_THROWS_AS(emit_outputs(rs, c, tmp.path), IoError);
  EmitOptions force;
  force.force = true;
  CHECK_NOTHROW(emit_outputs(rs, c, tmp.path, force));

  TempDir js("emit_json");
  EmitOptions as_json;
  as_json.format = OutputFormat::Json;
  emit_outputs(rs, c, js.path, as_json);
  CHECK(fs::exists(js.path / "curves.json"));
  CHECK_FALSE(fs::exists(js.path / "rstat.tsv"));
}

TEST_CASE("presets are valid configurations") {
  std::set<std::string> ids;
  for (const auto& id : preset_ids()) {
    const Preset p = make_preset(id);
    CHECK(p.id == id);
    CHECK_FALSE(p.sweeps.empty());
    ids.insert(id);
    for (const auto& s : p.sweeps) CHECK_NOTHROW(validate(s));
  }
  CHECK(ids.count("fig1"));
  CHECK(ids.count("figS6"));
  CHECK_THROWS_AS(make_preset("fig9"), InvalidArgument);
}
