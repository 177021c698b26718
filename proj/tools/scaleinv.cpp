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

// scaleinv command-line front end.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "scaleinv/analysis.hpp"
#include "scaleinv/error.hpp"
#include "scaleinv/harness/config.hpp"
#include "scaleinv/harness/output.hpp"
#include "scaleinv/harness/presets.hpp"
#include "scaleinv/harness/results.hpp"
#include "scaleinv/harness/sweep.hpp"

namespace fs = std::filesystem;
using namespace scaleinv;
using namespace scaleinv::harness;

namespace {

enum Exit { kOk = 0, kInvalid = 2, kNumerical = 3, kIo = 4 };

struct RunFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  int workers = 1;
  std::string out;
  std::string format = "tsv";
  bool resume = false;
  bool force = false;
  bool quiet = false;
  std::optional<std::size_t> stop_after;
};

// Model overrides for the single-task subcommands.
struct ModelFlags {
  std::string model;
  std::vector<double> sizes;
  std::optional<double> lambda, W, alpha;
  std::optional<int> N;
  std::optional<int> realizations;
};

void add_run_flags(CLI::App* app, RunFlags& f, bool needs_config) {
  auto* c = app->add_option("--config", f.config, "sweep configuration (JSON)");
  if (needs_config) c->required()->check(CLI::ExistingFile);
  app->add_option("--seed", f.seed, "override master_seed");
  app->add_option("--workers", f.workers, "worker threads")->check(CLI::PositiveNumber);
  app->add_option("--out", f.out, "output directory")->required();
  app->add_option("--format", f.format, "curve tables: tsv or json")
      ->check(CLI::IsMember({"tsv", "json"}));
  app->add_flag("--resume", f.resume, "continue the checkpoint in <out>/checkpoint");
  app->add_flag("--force", f.force, "discard an existing checkpoint and overwrite outputs");
  app->add_flag("--quiet", f.quiet, "no progress log");
  app->add_option("--stop-after", f.stop_after, "compute at most this many realization jobs")
      ->group("");
}

void add_model_flags(CLI::App* app, ModelFlags& m) {
  app->add_option("--model", m.model, "aubry_andre, anderson3d or avalanche");
  app->add_option("--L", m.sizes, "system sizes (scanned)");
  app->add_option("--lambda", m.lambda, "quasiperiodic amplitude");
  app->add_option("--W", m.W, "disorder width");
  app->add_option("--alpha", m.alpha, "avalanche coupling decay");
  app->add_option("--N", m.N, "avalanche dot size");
  app->add_option("--realizations", m.realizations, "realizations per point");
}

SweepConfig base_config(const RunFlags& f, const ModelFlags* m) {
  SweepConfig c;
  if (!f.config.empty()) c = load_config(f.config);
  if (m != nullptr) {
    if (!m->model.empty()) {
      json jm{{"kind", m->model}};
      c.model = model_from_json(jm);
    }
    if (m->lambda) c.model.lambda = *m->lambda;
    if (m->W) c.model.W = *m->W;
    if (m->alpha) c.model.alpha = *m->alpha;
    if (m->N) c.model.N = *m->N;
    if (m->realizations) c.realizations = *m->realizations;
    if (!m->sizes.empty()) {
      std::erase_if(c.scan, [](const ScanAxis& a) { return a.param == "L"; });
      c.scan.push_back({"L", m->sizes});
    }
    if (f.config.empty() && m->model.empty()) {
      detail::throw_invalid("pass --config or --model");
    }
  }
  if (f.seed) c.master_seed = *f.seed;
  validate(c);
  return c;
}

void run_and_emit(const SweepConfig& config, const RunFlags& f, const fs::path& out) {
  RunOptions options;
  options.workers = f.workers;
  options.checkpoint_dir = out / "checkpoint";
  options.resume = f.resume;
  options.force = f.force;
  options.stop_after = f.stop_after;
  options.log = f.quiet ? nullptr : &std::cerr;
  Timing timing;
  const ResultSet rs = run_sweep(config, options, &timing);
  EmitOptions emit;
  emit.format = parse_output_format(f.format);
  // A resumed run replaces the partial outputs of the interrupted one.
  emit.force = f.force || f.resume;
  const auto files = emit_outputs(rs, config, out, emit, &timing);
  std::cout << (rs.complete ? "complete" : "incomplete") << ": " << files.size() << " files in "
            << out.string() << "\n";
}

void print_fit(const FitResult& fit, const std::string& out) {
  const std::string text = to_json(fit).dump(1);
  std::cout << text << "\n";
  if (!out.empty()) {
    std::ofstream f(out);
    if (!f) throw IoError("cannot write '" + out + "'");
    f << text << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scaleinv: survival probability, spectral form factor and scaling analysis "
               "of disordered Hamiltonian ensembles"};
  app.set_version_flag("--version", std::string(SCALEINV_VERSION));
  app.require_subcommand(1);

  RunFlags run;
  ModelFlags model;

  auto* sweep = app.add_subcommand("sweep", "full pipeline from a config file");
  add_run_flags(sweep, run, true);

  auto* survival = app.add_subcommand("survival", "P(t), p(tau), IPR and t_H_typ");
  add_run_flags(survival, run, false);
  add_model_flags(survival, model);
  auto* sff = app.add_subcommand("sff", "raw spectral form factor on tau = t / t_H_typ");
  add_run_flags(sff, run, false);
  add_model_flags(sff, model);
  auto* rstat = app.add_subcommand("rstat", "mean gap ratio per scan point");
  add_run_flags(rstat, run, false);
  add_model_flags(rstat, model);

  std::string input, out_file;
  std::vector<double> window;
  auto* fit_power = app.add_subcommand("fit-power", "fit p = a tau^-beta to a curve table");
  fit_power->add_option("--input", input, "table with tau and mean columns")->required();
  fit_power->add_option("--window", window, "fit window lo hi")->expected(2)->required();
  fit_power->add_option("--out", out_file, "also write the fit here");

  std::string p_inf = "0";
  auto* fit_fractal = app.add_subcommand("fit-fractal", "fit P_bar = A D^-gamma + P_inf");
  fit_fractal->add_option("--input", input, "scaling table with D and P_bar columns")->required();
  fit_fractal->add_option("--p-inf", p_inf, "fixed P_inf value, or 'free'");
  fit_fractal->add_option("--out", out_file, "also write the fit here");

  auto* fit_heis = app.add_subcommand("fit-heisenberg", "fit t_H_typ = A D^n");
  fit_heis->add_option("--input", input, "scaling table with D and t_H_typ columns")->required();
  fit_heis->add_option("--out", out_file, "also write the fit here");

  std::vector<double> alpha_range = {0.6, 0.85}, mu_range = {0.2, 1.5};
  auto* collapse = app.add_subcommand("collapse", "minimize the gap-ratio collapse cost");
  collapse->add_option("--input", input, "rstat table with alpha, L and r_bar columns")->required();
  collapse->add_option("--alpha-range", alpha_range, "alpha_c search range")->expected(2);
  collapse->add_option("--mu-range", mu_range, "mu search range")->expected(2);
  collapse->add_option("--out", out_file, "also write the result here");

  std::string figure;
  bool list = false;
  auto* reproduce = app.add_subcommand("reproduce", "run the canned desk-scale sweeps of a figure");
  reproduce->add_option("figure", figure, "fig1, fig2, fig3, figS1 .. figS6");
  reproduce->add_flag("--list", list, "list the figure ids");
  reproduce->add_option("--seed", run.seed, "override master_seed");
  reproduce->add_option("--workers", run.workers, "worker threads")->check(CLI::PositiveNumber);
  reproduce->add_option("--out", run.out, "output directory");
  reproduce->add_option("--format", run.format, "tsv or json")->check(CLI::IsMember({"tsv", "json"}));
  reproduce->add_flag("--resume", run.resume, "continue interrupted sweeps");
  reproduce->add_flag("--force", run.force, "overwrite earlier outputs");
  reproduce->add_flag("--quiet", run.quiet, "no progress log");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*sweep) {
      run_and_emit(base_config(run, nullptr), run, run.out);
    } else if (*survival || *sff || *rstat) {
      SweepConfig c = base_config(run, &model);
      if (*survival) c.tasks = {Task::Survival, Task::IPR, Task::Heisenberg};
      if (*sff) c.tasks = {Task::SFF, Task::Heisenberg};
      if (*rstat) c.tasks = {Task::RStat};
      validate(c);
      run_and_emit(c, run, run.out);
    } else if (*fit_power) {
      const auto t = read_table(input);
      print_fit(fit_power_law(t.column("tau"), t.column("mean"), {window[0], window[1]}), out_file);
    } else if (*fit_fractal) {
      const auto t = read_table(input);
      const FractalMode mode = p_inf == "free" ? FractalMode::free() : FractalMode::fixed(std::stod(p_inf));
      print_fit(fit_fractal_dimension(t.column("D"), t.column("P_bar"), mode), out_file);
    } else if (*fit_heis) {
      const auto t = read_table(input);
      print_fit(fit_heisenberg_exponent(t.column("D"), t.column("t_H_typ")), out_file);
    } else if (*collapse) {
      const auto t = read_table(input);
      const auto alpha = t.column("alpha"), L = t.column("L"), r = t.column("r_bar");
      std::vector<CollapsePoint> pts;
      for (std::size_t i = 0; i < alpha.size(); ++i) {
        pts.push_back({alpha[i], static_cast<int>(L[i]), r[i]});
      }
      const auto result = minimize_collapse(pts, {alpha_range[0], alpha_range[1]},
                                            {mu_range[0], mu_range[1]});
      const std::string text = to_json(result).dump(1);
      std::cout << text << "\n";
      if (!out_file.empty()) {
        std::ofstream f(out_file);
        if (!f) throw IoError("cannot write '" + out_file + "'");
        f << text << "\n";
      }
    } else if (*reproduce) {
      if (list) {
        for (const auto& id : preset_ids()) {
          std::cout << id << "\t" << make_preset(id).description << "\n";
        }
        return kOk;
      }
      if (figure.empty()) detail::throw_invalid("reproduce: missing figure id (see --list)");
      const Preset preset = make_preset(figure);
      const fs::path root = run.out.empty() ? fs::path(preset.id) : fs::path(run.out);
      for (auto config : preset.sweeps) {
        if (run.seed) config.master_seed = *run.seed;
        run_and_emit(config, run, root / config.name);
      }
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const IoError& e) {
    std::cerr << "I/O failure: " << e.what() << "\n";
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O failure: " << e.what() << "\n";
    return kIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kOk;
}
