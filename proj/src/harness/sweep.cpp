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

#include "scaleinv/harness/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "scaleinv/error.hpp"
#include "scaleinv/rng.hpp"

extern "C" void openblas_set_num_threads(int) __attribute__((weak));

namespace scaleinv::harness {

namespace fs = std::filesystem;

void configure_blas_threads(int threads) {
  if (openblas_set_num_threads != nullptr) openblas_set_num_threads(threads);
}

std::size_t worker_memory_bytes(std::size_t dim, bool vectors, std::size_t plane_wave_families) {
  const std::size_t d2 = dim * dim * sizeof(double);
  // H, plus the solver's eigenvector buffer and workspace, plus plane-wave
  // weights; the cos/sin and phase-sum tables are 4 x 64 x D.
  const std::size_t matrices = vectors ? 3 + plane_wave_families : 1;
  return matrices * d2 + 4 * 64 * dim * sizeof(double) + (1u << 20);
}

int effective_workers(const SweepConfig& config, std::size_t dim, int requested) {
  std::size_t plane = 0;
  for (auto f : config.initial_states) plane += f == InitialFamily::PlaneWave;
  const bool vectors = config.has_task(Task::Survival) || config.has_task(Task::IPR);
  const double budget = config.memory_budget_mb * 1024.0 * 1024.0;
  const double per = static_cast<double>(worker_memory_bytes(dim, vectors, plane));
  const int fit = static_cast<int>(std::floor(budget / per));
  return std::max(1, std::min(requested, fit));
}

namespace {

using Clock = std::chrono::steady_clock;

struct Pass1Record {
  bool ok = false;
  std::string error;
  std::vector<double> energies;
};

struct FamilyRecord {
  double ipr = 0.0;
  std::vector<double> curve;
};

struct Pass2Record {
  bool ok = false;
  std::string error;
  std::vector<FamilyRecord> families;
};

void write_atomic(const fs::path& path, const std::string& text) {
  std::ostringstream suffix;
  suffix << ".tmp." << std::this_thread::get_id();
  const fs::path tmp = path.string() + suffix.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out << text;
    out.flush();
    if (!out) throw IoError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename '" + tmp.string() + "': " + ec.message());
}

std::optional<json> read_json(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  try {
    return json::parse(in);
  } catch (const json::parse_error&) {
    return std::nullopt;  // torn or foreign file: recompute
  }
}

fs::path record_path(const fs::path& dir, std::size_t point, int pass, int r) {
  char name[64];
  std::snprintf(name, sizeof name, "point_%04zu/p%d_%06d.json", point, pass, r);
  return dir / name;
}

json pass1_to_json(const Pass1Record& rec) {
  if (!rec.ok) return json{{"ok", false}, {"error", rec.error}};
  return json{{"ok", true}, {"energies", rec.energies}};
}

Pass1Record pass1_from_json(const json& j) {
  Pass1Record rec;
  rec.ok = j.at("ok").get<bool>();
  if (rec.ok) rec.energies = j.at("energies").get<std::vector<double>>();
  else rec.error = j.at("error").get<std::string>();
  return rec;
}

json pass2_to_json(const Pass2Record& rec) {
  if (!rec.ok) return json{{"ok", false}, {"error", rec.error}};
  json fams = json::array();
  for (const auto& f : rec.families) fams.push_back({{"ipr", f.ipr}, {"curve", f.curve}});
  return json{{"ok", true}, {"families", fams}};
}

Pass2Record pass2_from_json(const json& j) {
  Pass2Record rec;
  rec.ok = j.at("ok").get<bool>();
  if (!rec.ok) {
    rec.error = j.at("error").get<std::string>();
    return rec;
  }
  for (const auto& f : j.at("families")) {
    rec.families.push_back({f.at("ipr").get<double>(), f.at("curve").get<std::vector<double>>()});
  }
  return rec;
}

// Runs job(i) for i in [0, n) on `workers` threads. The first exception that
// is not handled inside a job stops the remaining work and is rethrown.
template <class Job>
void run_jobs(std::size_t n, int workers, Job&& job) {
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      if (abort.load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        job(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        abort = true;
        return;
      }
    }
  };
  const int threads = std::max(1, std::min<int>(workers, static_cast<int>(n)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
}

class Sweep {
 public:
  Sweep(const SweepConfig& config, const RunOptions& options, Timing* timing)
      : config_(config), options_(options), timing_(timing) {
    if (options.stop_after) {
      limited_ = true;
      budget_ = static_cast<long long>(*options.stop_after);
    }
  }

  ResultSet run();

 private:
  void log(const std::string& line) {
    if (options_.log == nullptr) return;
    std::lock_guard lock(log_mutex_);
    *options_.log << "[sweep] " << line << '\n' << std::flush;
  }

  void prepare_checkpoint();
  // Returns false when the job budget ran out before the point finished.
  bool run_point(std::size_t index, const ScanPoint& point, PointResult& out);
  bool take_budget() {
    if (!limited_) return true;
    return budget_.fetch_sub(1) > 0;
  }
  void build_groups(ResultSet& rs);
  void scale_curves(ResultSet& rs);
  void run_collapse(ResultSet& rs);

  const SweepConfig& config_;
  const RunOptions& options_;
  Timing* timing_;
  std::string hash_;
  bool limited_ = false;
  std::atomic<long long> budget_{0};
  std::mutex log_mutex_;
};

void Sweep::prepare_checkpoint() {
  if (!options_.checkpoint_dir) return;
  const fs::path dir = *options_.checkpoint_dir;
  const fs::path stored = dir / "config.json";
  if (fs::exists(stored)) {
    if (options_.resume) {
      const auto j = read_json(stored);
      if (!j) throw IoError("unreadable checkpoint config '" + stored.string() + "'");
      const std::string stored_hash = config_hash(config_from_json(*j));
      if (stored_hash != hash_) {
        detail::throw_invalid("checkpoint config hash " + stored_hash +
                              " does not match the configuration (" + hash_ +
                              "); refusing to resume with an edited config");
      }
      return;
    }
    if (!options_.force) {
      throw IoError("checkpoint already exists at '" + dir.string() +
                    "'; pass --resume to continue it or --force to discard it");
    }
    fs::remove_all(dir);
  } else if (options_.resume) {
    throw IoError("no checkpoint to resume at '" + dir.string() + "'");
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create checkpoint directory '" + dir.string() + "': " + ec.message());
  write_atomic(stored, to_json(config_).dump(1));
  write_atomic(dir / "hash", hash_ + "\n");
}

bool Sweep::run_point(std::size_t index, const ScanPoint& point, PointResult& out) {
  const auto start = Clock::now();
  const ModelConfig& model = point.model;
  const std::size_t dim = hilbert_dimension(model);
  const int n = point.realizations;
  out.params = point.params;
  out.model = model;
  out.dim = dim;
  out.n_requested = n;

  const bool want_survival = config_.has_task(Task::Survival);
  const bool want_ipr = config_.has_task(Task::IPR);
  const bool want_sff = config_.has_task(Task::SFF);
  const bool want_rstat = config_.has_task(Task::RStat);
  const bool want_th = config_.has_task(Task::Heisenberg) || want_survival || want_sff;
  const bool pass1 = want_th || want_rstat;
  const bool pass2 = want_survival || want_ipr;

  std::size_t plane = 0;
  for (auto f : config_.initial_states) plane += f == InitialFamily::PlaneWave;
  const double budget_bytes = config_.memory_budget_mb * 1024.0 * 1024.0;
  if (static_cast<double>(worker_memory_bytes(dim, pass2, plane)) > budget_bytes) {
    detail::throw_invalid("point " + point_label(point.params) + ": D=" + std::to_string(dim) +
                          " needs more than memory_budget_mb=" +
                          std::to_string(config_.memory_budget_mb));
  }
  const int workers = effective_workers(config_, dim, options_.workers);
  if (timing_) timing_->point_workers.push_back(workers);
  const std::string label = point_label(point.params);
  log("point " + std::to_string(index + 1) + ": " + label + " D=" + std::to_string(dim) +
      " realizations=" + std::to_string(n) + " workers=" + std::to_string(workers));

  auto seed_of = [&](int r) { return derive_seed(config_.master_seed, static_cast<std::uint64_t>(r)); };
  const std::optional<fs::path> ckpt = options_.checkpoint_dir;
  if (ckpt) fs::create_directories(*ckpt / (record_path(*ckpt, index, 1, 0).parent_path().filename()));

  // Progress lines at most every 30 s per point.
  std::atomic<double> last_log{0.0};
  auto progress = [&](const char* pass, std::atomic<int>& done) {
    const int d = ++done;
    const double now = std::chrono::duration<double>(Clock::now() - start).count();
    double prev = last_log.load();
    if (now - prev < 30.0 || !last_log.compare_exchange_strong(prev, now)) return;
    log("  " + label + " " + pass + " " + std::to_string(d) + "/" + std::to_string(n));
  };

  // Pass 1: eigenvalues of every realization.
  std::vector<Pass1Record> p1(static_cast<std::size_t>(n));
  std::vector<char> p1_done(static_cast<std::size_t>(n), 0);
  if (pass1) {
    std::atomic<int> done{0};
    run_jobs(static_cast<std::size_t>(n), workers, [&](std::size_t r) {
      const int ri = static_cast<int>(r);
      if (ckpt) {
        if (auto j = read_json(record_path(*ckpt, index, 1, ri))) {
          p1[r] = pass1_from_json(*j);
          p1_done[r] = 1;
          return;
        }
      }
      if (!take_budget()) return;
      Pass1Record rec;
      try {
        auto real = sample_realization(model, seed_of(ri));
        auto spec = eigendecompose(build_hamiltonian(model, real), {.vectors = false});
        rec.ok = true;
        rec.energies = std::move(spec.energies);
      } catch (const NumericalError& e) {
        rec.ok = false;
        rec.error = e.what();
      }
      if (ckpt) write_atomic(record_path(*ckpt, index, 1, ri), pass1_to_json(rec).dump());
      p1[r] = std::move(rec);
      p1_done[r] = 1;
      progress("pass 1", done);
    });
    if (std::find(p1_done.begin(), p1_done.end(), 0) != p1_done.end()) {
      out.complete = false;
      return false;
    }
  }

  std::vector<bool> failed(static_cast<std::size_t>(n), false);
  std::map<int, std::string> failure_text;
  for (int r = 0; r < n && pass1; ++r) {
    if (!p1[r].ok) {
      failed[r] = true;
      failure_text[r] = p1[r].error;
    }
  }

  // Spectrum statistics in realization order.
  bool have_th = false;
  if (pass1) {
    SpacingAccumulator spacings(config_.heisenberg_pooling);
    EnsembleAccumulator r_acc(1);
    for (int r = 0; r < n; ++r) {
      if (failed[r]) continue;
      const auto& e = p1[r].energies;
      spacings.add(level_spacings(e), spacing_floor(e, config_.spacing_floor));
      if (want_rstat && e.size() >= 3) {
        const auto window = config_.rstat.count > 0 ? mid_spectrum_window(e.size(), config_.rstat.count)
                                                    : central_window(e.size(), config_.rstat.fraction);
        if (window.size() >= 3) {
          auto g = gap_ratios(e, window);
          out.r_dropped += g.n_dropped;
          if (!g.ratios.empty()) {
            double s = 0.0;
            for (double x : g.ratios) s += x;
            r_acc.add(std::vector<double>{s / static_cast<double>(g.ratios.size())});
          }
        }
      }
    }
    if (want_rstat && r_acc.count() > 0) {
      out.r_bar = r_acc.mean()[0];
      out.r_bar_err = r_acc.std_err()[0];
    }
    if (want_th) {
      try {
        const auto stats = spacings.finish();
        out.t_H_typ = stats.t_H_typ;
        out.delta_typ = stats.delta_typ;
        out.n_spacings_retained = stats.n_retained;
        out.n_spacings_discarded = stats.n_discarded;
        have_th = true;
      } catch (const NumericalError& e) {
        out.valid = false;
        out.failures.push_back(std::string("typical spacing: ") + e.what());
      }
    }
    if (want_sff && have_th) {
      std::vector<std::vector<double>> ensemble;
      for (int r = 0; r < n; ++r)
        if (!failed[r]) ensemble.push_back(p1[r].energies);
      out.sff = raw_sff(ensemble, make_grid(config_.grid), out.t_H_typ,
                        static_cast<std::size_t>(config_.sff_running_window));
    }
  }
  p1.clear();
  p1.shrink_to_fit();

  // Pass 2: eigenvectors, overlaps, IPR and survival curves.
  const TimeGrid grid = make_grid(config_.grid);
  std::vector<double> times;
  const bool curves = want_survival && have_th;
  if (curves) times = evaluation_times(grid, out.t_H_typ);
  std::vector<Pass2Record> p2(static_cast<std::size_t>(n));
  std::vector<char> p2_done(static_cast<std::size_t>(n), 0);
  if (pass2 && (!want_survival || have_th)) {
    std::atomic<int> done{0};
    run_jobs(static_cast<std::size_t>(n), workers, [&](std::size_t r) {
      const int ri = static_cast<int>(r);
      if (failed[r]) {
        p2_done[r] = 1;
        return;
      }
      if (ckpt) {
        if (auto j = read_json(record_path(*ckpt, index, 2, ri))) {
          p2[r] = pass2_from_json(*j);
          p2_done[r] = 1;
          return;
        }
      }
      if (!take_budget()) return;
      Pass2Record rec;
      try {
        auto real = sample_realization(model, seed_of(ri));
        Spectrum spec = eigendecompose(build_hamiltonian(model, real));
        const auto& families = config_.initial_states;
        rec.families.resize(families.size());
        // The basis family consumes the eigenvectors, so it goes last.
        std::optional<std::size_t> basis_slot;
        for (std::size_t f = 0; f < families.size(); ++f) {
          if (families[f] == InitialFamily::BasisLocalized) {
            basis_slot = f;
            continue;
          }
          const auto w = compute_overlaps(spec, families[f]);
          rec.families[f].ipr = mean_ipr(w);
          if (curves) rec.families[f].curve = survival_probability(spec.energies, w, times);
        }
        if (basis_slot) {
          std::vector<double> energies = spec.energies;
          const auto w = overlaps_basis_localized(std::move(spec));
          rec.families[*basis_slot].ipr = mean_ipr(w);
          if (curves) rec.families[*basis_slot].curve = survival_probability(energies, w, times);
        }
        rec.ok = true;
      } catch (const NumericalError& e) {
        rec = Pass2Record{};
        rec.error = e.what();
      }
      if (ckpt) write_atomic(record_path(*ckpt, index, 2, ri), pass2_to_json(rec).dump());
      p2[r] = std::move(rec);
      p2_done[r] = 1;
      progress("pass 2", done);
    });
    if (std::find(p2_done.begin(), p2_done.end(), 0) != p2_done.end()) {
      out.complete = false;
      return false;
    }
    for (int r = 0; r < n; ++r) {
      if (!failed[r] && !p2[r].ok) {
        failed[r] = true;
        failure_text[r] = p2[r].error;
      }
    }
  }

  for (const auto& [r, text] : failure_text) {
    out.failures.push_back("realization " + std::to_string(r) + ": " + text);
  }
  out.n_failed = static_cast<int>(std::count(failed.begin(), failed.end(), true));
  out.n_used = n - out.n_failed;
  if (out.n_failed * 100 > n || out.n_used == 0) out.valid = false;

  if (pass2 && (!want_survival || have_th)) {
    for (std::size_t f = 0; f < config_.initial_states.size(); ++f) {
      FamilyResult fam;
      fam.family = config_.initial_states[f];
      EnsembleAccumulator ipr(1);
      EnsembleAccumulator curve(curves ? times.size() : 0);
      std::size_t states = 0;
      for (int r = 0; r < n; ++r) {
        if (failed[r]) continue;
        ipr.add(std::vector<double>{p2[r].families[f].ipr});
        if (curves) curve.add(p2[r].families[f].curve);
      }
      if (ipr.count() > 0) {
        fam.P_bar = ipr.mean()[0];
        fam.P_bar_err = ipr.std_err()[0];
      }
      states = fam.family == InitialFamily::InfiniteTemperature ? 1 : dim;
      if (curves && curve.count() > 0) {
        CurveEnsemble c;
        c.kind = CurveKind::SurvivalRaw;
        c.grid = grid;
        c.mean = curve.mean();
        c.std_err = curve.std_err();
        c.n_realizations = curve.count();
        c.n_initial_states = states;
        c.constants = {fam.P_bar, 0.0, out.t_H_typ, dim};
        fam.survival_raw = std::move(c);
      }
      out.families.push_back(std::move(fam));
    }
  }

  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (timing_) timing_->point_seconds.push_back(secs);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f s", secs);
  log("  " + label + " done in " + buf + (out.valid ? "" : " (invalid)"));
  return true;
}

bool is_size_parameter(const std::string& name) { return name == "L" || name == "N"; }

void Sweep::build_groups(ResultSet& rs) {
  std::vector<std::vector<std::pair<std::string, double>>> keys;
  for (std::size_t i = 0; i < rs.points.size(); ++i) {
    const auto& p = rs.points[i];
    if (!p.valid || !p.complete) continue;
    std::vector<std::pair<std::string, double>> key;
    for (const auto& kv : p.params)
      if (!is_size_parameter(kv.first)) key.push_back(kv);
    auto it = std::find(keys.begin(), keys.end(), key);
    if (it == keys.end()) {
      keys.push_back(key);
      rs.groups.push_back(GroupResult{});
      rs.groups.back().params = key;
      it = keys.end() - 1;
    }
    rs.groups[static_cast<std::size_t>(it - keys.begin())].points.push_back(i);
  }

  const bool have_th = config_.has_task(Task::Heisenberg) || config_.has_task(Task::Survival) ||
                       config_.has_task(Task::SFF);
  for (auto& g : rs.groups) {
    std::stable_sort(g.points.begin(), g.points.end(),
                     [&](auto a, auto b) { return rs.points[a].dim < rs.points[b].dim; });
    for (auto i : g.points) {
      g.dims.push_back(static_cast<double>(rs.points[i].dim));
      if (have_th) g.t_H.push_back(rs.points[i].t_H_typ);
    }
    if (have_th) {
      if (g.points.size() >= 2) {
        try {
          g.heisenberg = fit_heisenberg_exponent(g.dims, g.t_H);
        } catch (const std::exception& e) {
          g.notes.push_back(std::string("heisenberg fit: ") + e.what());
        }
      } else {
        g.notes.push_back("heisenberg fit needs at least 2 sizes");
      }
    }
    if (rs.points[g.points.front()].families.empty()) continue;
    for (std::size_t f = 0; f < config_.initial_states.size(); ++f) {
      GroupFamilyResult gf;
      gf.family = config_.initial_states[f];
      std::vector<double> p_bar;
      for (auto i : g.points) p_bar.push_back(rs.points[i].families[f].P_bar);
      auto attempt = [&](FractalMode mode, std::optional<FitResult>& slot, const char* what) {
        try {
          slot = fit_fractal_dimension(g.dims, p_bar, mode);
        } catch (const std::exception& e) {
          gf.notes.push_back(std::string(what) + ": " + e.what());
        }
      };
      if (g.points.size() >= 3) {
        attempt(FractalMode::fixed(0.0), gf.fractal_zero, "fractal fit with P_inf = 0");
        attempt(FractalMode::free(), gf.fractal_free, "fractal fit with free P_inf");
        if (config_.p_inf.mode == PinfMode::Fixed) {
          attempt(FractalMode::fixed(config_.p_inf.value), gf.fractal_fixed,
                  "fractal fit with fixed P_inf");
        }
      } else {
        gf.notes.push_back("fractal fits need at least 3 sizes");
      }
      const std::optional<FitResult>* in_use = &gf.fractal_zero;
      switch (config_.p_inf.mode) {
        case PinfMode::Zero: gf.P_inf_used = 0.0; break;
        case PinfMode::Fixed:
          gf.P_inf_used = config_.p_inf.value;
          in_use = &gf.fractal_fixed;
          break;
        case PinfMode::Fit:
          in_use = &gf.fractal_free;
          if (gf.fractal_free) {
            gf.P_inf_used = gf.fractal_free->at("P_inf");
          } else {
            gf.notes.push_back("P_inf fit unavailable; using P_inf = 0");
          }
          break;
      }
      if (*in_use && g.heisenberg && g.heisenberg->at("n") > 0.0) {
        gf.beta_prediction = beta_prediction((*in_use)->at("gamma"), g.heisenberg->at("n"));
      }
      g.families.push_back(std::move(gf));
    }
  }
}

void Sweep::scale_curves(ResultSet& rs) {
  std::map<std::size_t, const GroupResult*> group_of;
  for (const auto& g : rs.groups)
    for (auto i : g.points) group_of[i] = &g;
  for (std::size_t i = 0; i < rs.points.size(); ++i) {
    auto& p = rs.points[i];
    for (std::size_t f = 0; f < p.families.size(); ++f) {
      auto& fam = p.families[f];
      double p_inf = config_.p_inf.mode == PinfMode::Fixed ? config_.p_inf.value : 0.0;
      if (const auto it = group_of.find(i); it != group_of.end() && f < it->second->families.size()) {
        p_inf = it->second->families[f].P_inf_used;
      }
      fam.P_inf = p_inf;
      if (!fam.survival_raw) continue;
      try {
        fam.survival_scaled = scaled_survival(*fam.survival_raw, fam.P_bar, p_inf, p.t_H_typ);
      } catch (const NumericalError& e) {
        fam.note = e.what();
        continue;
      }
      if (config_.power_window) {
        try {
          fam.power_fit = fit_power_law(*fam.survival_scaled, *config_.power_window);
        } catch (const std::exception& e) {
          fam.note = std::string("power fit: ") + e.what();
        }
      }
    }
  }
}

void Sweep::run_collapse(ResultSet& rs) {
  if (!config_.collapse || !config_.has_task(Task::RStat)) return;
  std::vector<CollapsePoint> pts;
  for (const auto& p : rs.points) {
    if (p.valid && p.complete && p.r_bar) pts.push_back({p.model.alpha, p.model.L, *p.r_bar});
  }
  const auto& spec = *config_.collapse;
  try {
    rs.collapse = minimize_collapse(pts, spec.alpha_range, spec.mu_range,
                                    {.grid_alpha = spec.grid, .grid_mu = spec.grid});
  } catch (const std::exception& e) {
    CollapseResult c;
    c.alpha_range = spec.alpha_range;
    c.mu_range = spec.mu_range;
    c.converged = false;
    c.note = e.what();
    rs.collapse = c;
  }
}

ResultSet Sweep::run() {
  const auto start = Clock::now();
  validate(config_);
  detail::require(options_.workers >= 1, "workers must be >= 1");
  hash_ = config_hash(config_);
  configure_blas_threads(1);
  prepare_checkpoint();

  ResultSet rs;
  rs.version = SCALEINV_VERSION;
  rs.config_hash = hash_;
  const auto points = expand_scan(config_);
  for (std::size_t i = 0; i < points.size(); ++i) {
    PointResult pr;
    const bool finished = run_point(i, points[i], pr);
    rs.points.push_back(std::move(pr));
    if (!finished) {
      rs.complete = false;
      log("stopped after the job budget; resume to continue");
      break;
    }
  }
  if (rs.complete) {
    build_groups(rs);
    scale_curves(rs);
    run_collapse(rs);
  }
  if (timing_) timing_->total_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return rs;
}

}  // namespace

ResultSet run_sweep(const SweepConfig& config, const RunOptions& options, Timing* timing) {
  Sweep sweep(config, options, timing);
  return sweep.run();
}

ResultSet resume_sweep(const fs::path& checkpoint_dir, RunOptions options, Timing* timing) {
  const auto j = read_json(checkpoint_dir / "config.json");
  if (!j) throw IoError("no readable checkpoint at '" + checkpoint_dir.string() + "'");
  const SweepConfig config = config_from_json(*j);
  options.checkpoint_dir = checkpoint_dir;
  options.resume = true;
  return run_sweep(config, options, timing);
}

}  // namespace scaleinv::harness
