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

// Acceptance runner: one PASS/FAIL line per criterion. Heavy sweeps are
// checkpointed under --cache so a rerun only aggregates stored realizations.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "oracles.hpp"
#include "scaleinv/analysis.hpp"
#include "scaleinv/dynamics.hpp"
#include "scaleinv/error.hpp"
#include "scaleinv/harness/config.hpp"
#include "scaleinv/harness/results.hpp"
#include "scaleinv/harness/sweep.hpp"
#include "scaleinv/models.hpp"
#include "scaleinv/quench.hpp"
#include "scaleinv/rng.hpp"
#include "scaleinv/spectral.hpp"

namespace fs = std::filesystem;
using namespace scaleinv;
using namespace scaleinv::harness;

namespace {

// Tolerances.
constexpr double kAaBeta = 0.25, kAaBetaTol = 0.05;
constexpr double kAaGamma = 0.53, kAaGammaTol = 0.07;
constexpr double kAaN = 2.0, kAaNTol = 0.2;
constexpr double kAaConsistencyTol = 0.05;
constexpr FitWindow kAaWindow{3e-3, 3e-2};

constexpr double kAndersonBeta = 0.42, kAndersonBetaTol = 0.10;
constexpr double kAndersonN = 1.0, kAndersonNTol = 0.15;
constexpr FitWindow kAndersonWindow{1e-2, 1e-1};

constexpr double kAlphaC = 0.716, kAlphaCTol = 0.03;
constexpr double kMu = 0.6, kMuTol = 0.15;
constexpr double kCollapseWallBudget = 2.0 * 3600.0;  // seconds

constexpr double kAvalancheSigma = 3.0;
constexpr double kAvalancheMinDecades = 1.0;
constexpr FitWindow kAvalancheBounds{1e-4, 1e-1};  // decay regime, before saturation at p = 1
constexpr double kAvalancheBetaLo = 0.40, kAvalancheBetaHi = 0.70;
constexpr double kAvalancheN = 1.0, kAvalancheNTol = 0.15;

constexpr double kGoeR = 0.5307, kGoeRTol = 0.005;
constexpr double kGoeSffRelTol = 0.10;
constexpr FitWindow kGoeWindow{0.05, 1.0};
constexpr double kGoeSigma = 3.0;

constexpr double kDualityTol = 0.05;

constexpr double kOracleTol = 1e-8;
constexpr double kNormTol = 1e-10;
constexpr double kSffZeroRelTol = 1e-8;
constexpr double kLongTimeSigma = 3.0;
constexpr double kLongTimeSffRelTol = 0.05;
constexpr double kExactFitTol = 1e-6;

struct Check {
  std::string what;
  bool ok = false;
};

struct Outcome {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  std::vector<std::string> notes;
  bool pass() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok; });
  }
};

struct Context {
  fs::path cache;
  int workers = 1;
  bool verbose = false;
};

std::string f4(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}
std::string g3(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

void check(Outcome& o, bool ok, std::string what) { o.checks.push_back({std::move(what), ok}); }

void check_band(Outcome& o, const std::string& name, double value, double target, double tol) {
  const bool ok = std::isfinite(value) && std::abs(value - target) <= tol;
  check(o, ok, name + " = " + f4(value) + " (target " + f4(target) + " +/- " + f4(tol) + ")");
}

// Runs or resumes a sweep whose realizations are cached under ctx.cache.
ResultSet cached_sweep(const Context& ctx, const SweepConfig& config) {
  RunOptions options;
  options.workers = ctx.workers;
  options.checkpoint_dir = ctx.cache / config.name;
  options.log = ctx.verbose ? &std::cerr : nullptr;
  if (fs::exists(*options.checkpoint_dir / "config.json")) {
    options.resume = true;
    try {
      return run_sweep(config, options);
    } catch (const InvalidArgument&) {
      // The stored checkpoint belongs to an older configuration.
      options.resume = false;
      options.force = true;
    }
  }
  return run_sweep(config, options);
}

const FamilyResult* family(const PointResult& p, InitialFamily f) {
  for (const auto& fam : p.families)
    if (fam.family == f) return &fam;
  return nullptr;
}

const GroupFamilyResult* family(const GroupResult& g, InitialFamily f) {
  for (const auto& fam : g.families)
    if (fam.family == f) return &fam;
  return nullptr;
}

void note_points(Outcome& o, const ResultSet& rs) {
  for (const auto& p : rs.points) {
    std::string line = point_label(p.params) + ": D=" + std::to_string(p.dim) +
                       ", realizations=" + std::to_string(p.n_used) + ", t_H_typ=" + g3(p.t_H_typ);
    for (const auto& f : p.families) {
      line += ", P_bar[" + std::string(to_string(f.family)) + "]=" + g3(f.P_bar);
    }
    if (!p.valid) line += " (invalid)";
    o.notes.push_back(line);
  }
}

double fit_param(const std::optional<FitResult>& fit, const char* name) {
  return fit ? fit->at(name) : std::nan("");
}

// ---------------------------------------------------------------- criterion 1, 6

SweepConfig aubry_andre_config() {
  SweepConfig c;
  c.name = "aa_critical";
  c.model = ModelConfig::aubry_andre(250, 2.0);
  c.scan = {{"L", {250, 500, 1000, 2000}}};
  c.realizations = 200;
  c.master_seed = 20260101;
  c.tasks = {Task::Survival, Task::IPR, Task::Heisenberg};
  c.initial_states = {InitialFamily::BasisLocalized, InitialFamily::PlaneWave};
  c.power_window = kAaWindow;
  return c;
}

Outcome criterion1(const Context& ctx) {
  Outcome o{1, "Aubry-Andre exponents at lambda = 2J, L in {250, 500, 1000, 2000}, 200 realizations", {}, {}};
  const ResultSet rs = cached_sweep(ctx, aubry_andre_config());
  note_points(o, rs);
  const auto* fam = family(rs.points.back(), InitialFamily::BasisLocalized);
  const double beta = fam && fam->power_fit ? fam->power_fit->at("beta") : std::nan("");
  const auto& g = rs.groups.at(0);
  const auto* gf = family(g, InitialFamily::BasisLocalized);
  const double gamma = gf ? fit_param(gf->fractal_zero, "gamma") : std::nan("");
  const double n = fit_param(g.heisenberg, "n");
  check_band(o, "beta (L=2000, tau in [3e-3, 3e-2])", beta, kAaBeta, kAaBetaTol);
  check_band(o, "gamma (P_inf = 0)", gamma, kAaGamma, kAaGammaTol);
  check_band(o, "n", n, kAaN, kAaNTol);
  const double gap = std::abs(beta - gamma / n);
  check(o, std::isfinite(gap) && gap <= kAaConsistencyTol,
        "|beta - gamma/n| = " + f4(gap) + " (<= " + f4(kAaConsistencyTol) + ")");
  return o;
}

Outcome criterion6(const Context& ctx) {
  Outcome o{6, "self-duality: plane-wave and site-localized beta agree at lambda = 2J", {}, {}};
  const ResultSet rs = cached_sweep(ctx, aubry_andre_config());
  const auto* site = family(rs.points.back(), InitialFamily::BasisLocalized);
  const auto* wave = family(rs.points.back(), InitialFamily::PlaneWave);
  const double b_site = site && site->power_fit ? site->power_fit->at("beta") : std::nan("");
  const double b_wave = wave && wave->power_fit ? wave->power_fit->at("beta") : std::nan("");
  o.notes.push_back("L=2000 beta: site-localized " + f4(b_site) + ", plane wave " + f4(b_wave));
  const double diff = std::abs(b_site - b_wave);
  check(o, std::isfinite(diff) && diff <= kDualityTol,
        "|beta_plane_wave - beta_site| = " + f4(diff) + " (<= " + f4(kDualityTol) + ")");
  return o;
}

// ---------------------------------------------------------------- criterion 2

Outcome criterion2(const Context& ctx) {
  Outcome o{2, "3D Anderson at W = 16.5J, L in {8, 10, 12, 14}, 200 realizations", {}, {}};
  SweepConfig c;
  c.name = "anderson_critical";
  c.model = ModelConfig::anderson3d(8, 16.5);
  c.scan = {{"L", {8, 10, 12, 14}}};
  c.realizations = 200;
  c.master_seed = 20260102;
  c.tasks = {Task::Survival, Task::IPR, Task::Heisenberg};
  c.p_inf.mode = PinfMode::Fit;
  c.power_window = kAndersonWindow;
  const ResultSet rs = cached_sweep(ctx, c);
  note_points(o, rs);
  const auto& g = rs.groups.at(0);
  const auto* gf = family(g, InitialFamily::BasisLocalized);
  const double p_inf = gf ? fit_param(gf->fractal_free, "P_inf") : std::nan("");
  if (gf && gf->fractal_free) {
    o.notes.push_back("free-asymptote fit: gamma=" + f4(gf->fractal_free->at("gamma")) +
                      ", c=" + f4(gf->fractal_free->at("c")));
  }
  const auto* fam = family(rs.points.back(), InitialFamily::BasisLocalized);
  const double beta = fam && fam->power_fit ? fam->power_fit->at("beta") : std::nan("");
  check_band(o, "beta (L=14, tau in [1e-2, 1e-1], P_inf from the free fit)", beta, kAndersonBeta,
             kAndersonBetaTol);
  check_band(o, "n", fit_param(g.heisenberg, "n"), kAndersonN, kAndersonNTol);
  check(o, std::isfinite(p_inf) && p_inf > 0.0, "P_inf (free fit) = " + g3(p_inf) + " (> 0)");
  return o;
}

// ---------------------------------------------------------------- criterion 3

SweepConfig collapse_config(std::vector<double> sizes, int realizations, std::string name) {
  SweepConfig c;
  c.name = std::move(name);
  c.model = ModelConfig::avalanche(5, static_cast<int>(sizes.front()), kAlphaC);
  std::vector<double> alphas;
  for (int k = 0; k <= 16; ++k) alphas.push_back(0.55 + 0.025 * k);
  c.scan = {{"alpha", alphas}, {"L", std::move(sizes)}};
  c.realizations = realizations;
  c.master_seed = 20260103;
  c.tasks = {Task::RStat};
  c.collapse = CollapseSpec{{0.6, 0.85}, {0.2, 1.5}, 50};
  return c;
}

// Seconds for an eigenvalue-only dense solve at dimension d, extrapolated as
// d^3 from a timed solve at 1024.
double eigenvalue_seconds(std::size_t d) {
  const std::size_t ref = 1024;
  const auto h = sample_goe(ref, 1.0, 7);
  const auto t0 = std::chrono::steady_clock::now();
  for (int rep = 0; rep < 2; ++rep) (void)eigendecompose(h, {.vectors = false});
  const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / 2.0;
  const double ratio = static_cast<double>(d) / static_cast<double>(ref);
  return t * ratio * ratio * ratio;
}

Outcome criterion3(const Context& ctx) {
  Outcome o{3, "avalanche transition from the gap-ratio collapse, N = 5, L in {5..8}, 300 realizations", {}, {}};
  const SweepConfig full = collapse_config({5, 6, 7, 8}, 300, "avalanche_collapse");
  double core_seconds = 0.0;
  for (const auto& p : expand_scan(full)) {
    core_seconds += p.realizations * eigenvalue_seconds(hilbert_dimension(p.model));
  }
  const unsigned cores = std::max(1u, std::thread::hardware_concurrency());
  const double wall = core_seconds / cores;
  o.notes.push_back("projected cost " + g3(core_seconds / 3600.0) + " core-hours, " + g3(wall / 3600.0) +
                    " h wall on " + std::to_string(cores) + " core(s); budget " +
                    g3(kCollapseWallBudget / 3600.0) + " h");
  const bool forced = std::getenv("SCALEINV_ACCEPT_FULL") != nullptr;
  if (wall > kCollapseWallBudget && !forced) {
    check(o, false, "full collapse not executed: projected wall time exceeds the budget "
                    "(set SCALEINV_ACCEPT_FULL=1 to run it anyway)");
    // Reduced sizes, reported for information only.
    const ResultSet diag = cached_sweep(ctx, collapse_config({3, 4, 5}, 100, "avalanche_collapse_reduced"));
    if (diag.collapse) {
      o.notes.push_back("diagnostic only (L in {3,4,5}, 100 realizations): alpha_c = " +
                        f4(diag.collapse->alpha_c) + ", mu = " + f4(diag.collapse->mu) +
                        ", cost = " + f4(diag.collapse->cost) +
                        (diag.collapse->converged ? "" : " (not converged)"));
    }
    return o;
  }
  const ResultSet rs = cached_sweep(ctx, full);
  if (!rs.collapse) {
    check(o, false, "collapse produced no result");
    return o;
  }
  check_band(o, "alpha_c", rs.collapse->alpha_c, kAlphaC, kAlphaCTol);
  check_band(o, "mu", rs.collapse->mu, kMu, kMuTol);
  check(o, rs.collapse->converged, "collapse minimizer inside the search ranges");
  return o;
}

// ---------------------------------------------------------------- criterion 4

Outcome criterion4(const Context& ctx) {
  Outcome o{4, "avalanche dynamics at alpha = 0.716, N = 5, L in {6, 7, 8}", {}, {}};
  SweepConfig c;
  c.name = "avalanche_critical";
  c.model = ModelConfig::avalanche(5, 6, kAlphaC);
  c.scan = {{"L", {6, 7, 8}}};
  c.realizations = 120;
  c.realizations_by_size = {{7, 40}, {8, 10}};
  c.master_seed = 20260104;
  c.tasks = {Task::Survival, Task::IPR, Task::Heisenberg};
  const ResultSet rs = cached_sweep(ctx, c);
  note_points(o, rs);
  std::vector<const CurveEnsemble*> curves;
  for (const auto& p : rs.points) {
    const auto* f = family(p, InitialFamily::BasisLocalized);
    curves.push_back(f && f->survival_scaled ? &*f->survival_scaled : nullptr);
  }
  if (std::find(curves.begin(), curves.end(), nullptr) != curves.end()) {
    check(o, false, "scaled survival curves missing");
    return o;
  }
  std::optional<CoincidenceWindow> last;
  for (std::size_t i = 0; i + 1 < curves.size(); ++i) {
    const auto w = coincidence_window(*curves[i], *curves[i + 1], kAvalancheSigma, kAvalancheBounds);
    const std::string pair = "L=" + std::to_string(rs.points[i].model.L) + "/" +
                             std::to_string(rs.points[i + 1].model.L);
    check(o, w.decades >= kAvalancheMinDecades,
          pair + " coincide within 3 standard errors over " + f4(w.decades) + " decades, tau in [" +
              g3(w.window.lo) + ", " + g3(w.window.hi) + "] (>= 1 decade)");
    last = w;
  }
  double beta = std::nan("");
  if (last && last->n_points >= 5) {
    try {
      beta = fit_power_law(*curves.back(), last->window).at("beta");
    } catch (const std::exception& e) {
      o.notes.push_back(std::string("power fit failed: ") + e.what());
    }
  }
  check(o, std::isfinite(beta) && beta >= kAvalancheBetaLo && beta <= kAvalancheBetaHi,
        "beta (L=8, L=7/8 coincidence window) = " + f4(beta) + " (in [" + f4(kAvalancheBetaLo) + ", " +
            f4(kAvalancheBetaHi) + "])");
  check_band(o, "n", fit_param(rs.groups.at(0).heisenberg, "n"), kAvalancheN, kAvalancheNTol);
  return o;
}

// ---------------------------------------------------------------- criterion 5

Outcome criterion5(const Context&) {
  Outcome o{5, "GOE baselines, n = 512, 500 realizations", {}, {}};
  constexpr std::size_t n = 512;
  constexpr int realizations = 500;
  constexpr std::uint64_t master = 20260105;
  const TimeGrid grid = make_time_grid_per_decade(1e-4, 1e2, 40);

  std::vector<std::vector<double>> energies;
  SpacingAccumulator spacings;
  std::vector<std::vector<double>> ratios;
  for (int r = 0; r < realizations; ++r) {
    auto h = sample_goe(n, 1.0, derive_seed(master, static_cast<std::uint64_t>(r)));
    auto e = eigendecompose(std::move(h), {.vectors = false}).energies;
    spacings.add(level_spacings(e), spacing_floor(e));
    ratios.push_back(gap_ratios(e, central_window(n, 0.5)).ratios);
    energies.push_back(std::move(e));
  }
  const double r_bar = mean_gap_ratio(ratios);
  check_band(o, "r_bar (central half of the spectrum)", r_bar, kGoeR, kGoeRTol);

  const SpacingStats stats = spacings.finish();
  const CurveEnsemble k = raw_sff(energies, grid, stats.t_H_typ, 7);
  double worst = 0.0, worst_tau = 0.0;
  for (std::size_t i = 0; i < grid.values.size(); ++i) {
    const double tau = grid.values[i];
    if (tau < kGoeWindow.lo || tau > kGoeWindow.hi) continue;
    const double dev = std::abs(k.mean[i] - goe_sff_reference(tau)) / goe_sff_reference(tau);
    if (dev > worst) {
      worst = dev;
      worst_tau = tau;
    }
  }
  check(o, worst <= kGoeSffRelTol,
        "K_R vs GOE form factor on tau = t/t_H_typ in [0.05, 1]: max relative deviation " + f4(worst) +
            " at tau = " + g3(worst_tau) + " (<= " + f4(kGoeSffRelTol) + ")");
  {
    // Diagnostic: the same comparison with time in units of 2 pi / mean spacing.
    double mean_spacing = 0.0;
    std::size_t count = 0;
    for (const auto& e : energies)
      for (double d : level_spacings(e)) {
        mean_spacing += d;
        ++count;
      }
    mean_spacing /= static_cast<double>(count);
    const double t_mean = 2.0 * std::numbers::pi / mean_spacing;
    const CurveEnsemble km = raw_sff(energies, grid, t_mean, 7);
    double w = 0.0;
    for (std::size_t i = 0; i < grid.values.size(); ++i) {
      const double tau = grid.values[i];
      if (tau < kGoeWindow.lo || tau > kGoeWindow.hi) continue;
      w = std::max(w, std::abs(km.mean[i] - goe_sff_reference(tau)) / goe_sff_reference(tau));
    }
    o.notes.push_back("diagnostic: t_H_typ / t_H_mean = " + f4(stats.t_H_typ / t_mean) +
                      "; on tau = t/t_H_mean the max deviation is " + f4(w));
  }

  // K_R = 2p - 1 for plane-wave initial states, same realizations, unsmoothed.
  const auto times = evaluation_times(grid, stats.t_H_typ);
  EnsembleAccumulator p_acc(times.size()), ipr(1);
  for (int r = 0; r < realizations; ++r) {
    const auto spec = eigendecompose(sample_goe(n, 1.0, derive_seed(master, static_cast<std::uint64_t>(r))));
    const auto w = overlaps_plane_wave(spec);
    ipr.add(std::vector<double>{mean_ipr(w)});
    p_acc.add(survival_probability(spec, w, times));
  }
  const CurveEnsemble k1 = raw_sff(energies, grid, stats.t_H_typ, 1);
  const double p_bar = ipr.mean()[0];
  const auto p_err = p_acc.std_err();
  double max_z = 0.0, max_z_tau = 0.0, max_z_all = 0.0;
  for (std::size_t i = 0; i < grid.values.size(); ++i) {
    const double p = p_acc.mean()[i] / p_bar;
    const double sp = p_err[i] / p_bar;
    const double sigma = std::sqrt(k1.std_err[i] * k1.std_err[i] + 4.0 * sp * sp);
    const double z = std::abs(k1.mean[i] - (2.0 * p - 1.0)) / sigma;
    max_z_all = std::max(max_z_all, z);
    const double tau = grid.values[i];
    if (tau < kGoeWindow.lo || tau > kGoeWindow.hi) continue;
    if (z > max_z) {
      max_z = z;
      max_z_tau = tau;
    }
  }
  check(o, max_z <= kGoeSigma,
        "K_R = 2p - 1 (plane waves, tau in [0.05, 1]): max |difference| = " + f4(max_z) +
            " standard errors at tau = " + g3(max_z_tau) + " (<= 3)");
  o.notes.push_back("diagnostic: over the whole grid tau in [1e-4, 1e2] the max is " + f4(max_z_all) +
                    " standard errors");
  return o;
}

// ---------------------------------------------------------------- criterion 7

struct SmallCase {
  std::string name;
  DenseSymmetricMatrix h;
};

std::vector<SmallCase> small_cases(std::size_t max_dim) {
  std::vector<SmallCase> out;
  auto add = [&](std::string name, const ModelConfig& m, std::uint64_t seed) {
    if (hilbert_dimension(m) > max_dim) return;
    out.push_back({std::move(name), build_hamiltonian(m, sample_realization(m, seed))});
  };
  if (max_dim <= 64) {
    add("aubry_andre L=64", ModelConfig::aubry_andre(64, 2.0), 11);
    add("anderson3d L=3", ModelConfig::anderson3d(3, 16.5), 12);
    add("anderson3d L=4", ModelConfig::anderson3d(4, 16.5), 13);
    add("avalanche N=3 L=3", ModelConfig::avalanche(3, 3, 0.716), 14);
    out.push_back({"goe n=48", sample_goe(48, 1.0, 15)});
  } else {
    add("aubry_andre L=256", ModelConfig::aubry_andre(256, 2.0), 21);
    add("anderson3d L=6", ModelConfig::anderson3d(6, 16.5), 22);
    add("avalanche N=3 L=4", ModelConfig::avalanche(3, 4, 0.716), 23);
    out.push_back({"goe n=200", sample_goe(200, 1.0, 24)});
  }
  return out;
}

double oracle_plane_wave(const oracle::cmat& u, std::size_t n) {
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::complex<double>> phase(n);
    for (std::size_t m = 0; m < n; ++m) {
      phase[m] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>((k * m) % n) / static_cast<double>(n));
    }
    std::complex<double> amp = 0.0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) amp += std::conj(phase[a]) * u[a * n + b] * phase[b];
    sum += std::norm(amp / static_cast<double>(n));
  }
  return sum / static_cast<double>(n);
}

double oracle_infinite_temperature(const oracle::cmat& u, std::size_t n) {
  std::complex<double> tr = 0.0;
  for (std::size_t m = 0; m < n; ++m) tr += u[m * n + m];
  return std::norm(tr / static_cast<double>(n));
}

Outcome criterion7(const Context&) {
  Outcome o{7, "survival probability equals dense matrix-exponential evolution, D <= 64", {}, {}};
  const TimeGrid grid = make_time_grid_per_decade(1e-4, 1e2, 40);
  for (const auto& c : small_cases(64)) {
    const std::size_t d = c.h.dim();
    const Spectrum spec = eigendecompose(c.h);
    const auto stats = typical_heisenberg_time(std::vector<std::vector<double>>{level_spacings(spec.energies)},
                                               spacing_floor(spec.energies));
    const auto times = evaluation_times(grid, stats.t_H_typ);
    const auto basis = survival_probability(spec, overlaps_basis_localized(spec), times);
    const auto wave = survival_probability(spec, overlaps_plane_wave(spec), times);
    const auto flat = survival_probability(spec, overlaps_infinite_temperature(spec), times);
    double worst = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      const auto u = oracle::propagator(c.h, times[i]);
      worst = std::max(worst, std::abs(basis[i] - oracle::survival_from_propagator(u, d)));
      worst = std::max(worst, std::abs(wave[i] - oracle_plane_wave(u, d)));
      worst = std::max(worst, std::abs(flat[i] - oracle_infinite_temperature(u, d)));
    }
    check(o, worst <= kOracleTol,
          c.name + " (D=" + std::to_string(d) + ", t up to " + g3(times.back()) +
              "): max |P - P_oracle| = " + g3(worst) + " (<= 1e-8)");
  }
  return o;
}

// ---------------------------------------------------------------- criterion 8

Outcome criterion8(const Context&) {
  Outcome o{8, "normalization and long-time limits, D <= 256", {}, {}};
  constexpr int realizations = 40;
  for (const auto& base : small_cases(256)) {
    const std::size_t d = base.h.dim();
    double col_err = 0.0, row_err = 0.0, p0_err = 0.0, k0_err = 0.0;
    // Per-realization time averages over the last decade of an absolute grid
    // ending at 1000 t_H_typ, the first pass fixing t_H_typ.
    std::vector<DenseSymmetricMatrix> hs;
    SpacingAccumulator acc;
    for (int r = 0; r < realizations; ++r) {
      DenseSymmetricMatrix h;
      const std::uint64_t seed = derive_seed(800 + d, static_cast<std::uint64_t>(r));
      if (base.name.rfind("goe", 0) == 0) {
        h = sample_goe(d, 1.0, seed);
      } else if (base.name.rfind("aubry", 0) == 0) {
        const auto m = ModelConfig::aubry_andre(256, 2.0);
        h = build_hamiltonian(m, sample_realization(m, seed));
      } else if (base.name.rfind("anderson", 0) == 0) {
        const auto m = ModelConfig::anderson3d(6, 16.5);
        h = build_hamiltonian(m, sample_realization(m, seed));
      } else {
        const auto m = ModelConfig::avalanche(3, 4, 0.716);
        h = build_hamiltonian(m, sample_realization(m, seed));
      }
      const auto e = eigendecompose(h, {.vectors = false}).energies;
      acc.add(level_spacings(e), spacing_floor(e));
      hs.push_back(std::move(h));
    }
    const double t_h = acc.finish().t_H_typ;
    const TimeGrid grid = make_time_grid_per_decade(1e-2 * t_h, 1e3 * t_h, 40, TimeScale::Absolute);
    std::vector<double> last;
    for (std::size_t i = 0; i < grid.values.size(); ++i)
      if (grid.values[i] >= 1e2 * t_h * (1 - 1e-12)) last.push_back(grid.values[i]);
    last.insert(last.begin(), 0.0);

    EnsembleAccumulator avg_p(1), ipr_acc(1);
    double k_avg = 0.0;
    for (const auto& h : hs) {
      const Spectrum spec = eigendecompose(h);
      for (auto fam : {InitialFamily::BasisLocalized, InitialFamily::PlaneWave}) {
        const auto w = compute_overlaps(spec, fam);
        for (double s : w.column_sums()) col_err = std::max(col_err, std::abs(s - 1.0));
        for (double s : w.row_sums()) row_err = std::max(row_err, std::abs(s - 1.0));
        const auto p = survival_probability(spec, w, last);
        p0_err = std::max(p0_err, std::abs(p[0] - 1.0));
        if (fam == InitialFamily::BasisLocalized) {
          double mean = 0.0;
          for (std::size_t i = 1; i < p.size(); ++i) mean += p[i];
          avg_p.add(std::vector<double>{mean / static_cast<double>(p.size() - 1)});
          ipr_acc.add(std::vector<double>{mean_ipr(w)});
        }
      }
      const auto k = sff_realization(spec.energies, last);
      k0_err = std::max(k0_err, std::abs(k[0] - static_cast<double>(d)) / static_cast<double>(d));
      double mean = 0.0;
      for (std::size_t i = 1; i < k.size(); ++i) mean += k[i];
      k_avg += mean / static_cast<double>(k.size() - 1);
    }
    k_avg /= static_cast<double>(hs.size());
    const std::string tag = base.name + " (D=" + std::to_string(d) + ")";
    check(o, col_err <= kNormTol && row_err <= kNormTol,
          tag + ": overlap sums over eigenstates and initial states = 1 within " + g3(std::max(col_err, row_err)) +
              " (<= 1e-10)");
    check(o, p0_err <= kNormTol, tag + ": |P(0) - 1| = " + g3(p0_err) + " (<= 1e-10)");
    check(o, k0_err <= kSffZeroRelTol, tag + ": |K_R(0) - D| / D = " + g3(k0_err) + " (<= 1e-8)");
    const double diff = std::abs(avg_p.mean()[0] - ipr_acc.mean()[0]);
    const double se = std::hypot(avg_p.std_err()[0], ipr_acc.std_err()[0]);
    check(o, diff <= kLongTimeSigma * se,
          tag + ": late-time mean of P = " + g3(avg_p.mean()[0]) + " vs P_bar = " + g3(ipr_acc.mean()[0]) +
              ", " + f4(diff / se) + " standard errors (<= 3)");
    check(o, std::abs(k_avg - 1.0) <= kLongTimeSffRelTol,
          tag + ": late-time mean of K_R = " + f4(k_avg) + " (1 within 5%)");
  }
  return o;
}

// ---------------------------------------------------------------- criterion 9

Outcome criterion9(const Context&) {
  Outcome o{9, "exact synthetic fits", {}, {}};
  auto close = [&](const std::string& what, double got, double want) {
    const double err = std::abs(got - want);
    check(o, err <= kExactFitTol, what + " = " + g3(got) + " (want " + g3(want) + ", error " + g3(err) + ")");
  };
  const TimeGrid grid = make_time_grid_per_decade(1e-4, 1e2, 40);
  {
    std::vector<double> p;
    for (double t : grid.values) p.push_back(0.5 * std::pow(t, -0.42));
    const auto fit = fit_power_law(grid.values, p, {1e-3, 1e-1});
    close("power law 0.5 tau^-0.42: a", fit.at("a"), 0.5);
    close("power law 0.5 tau^-0.42: beta", fit.at("beta"), 0.42);
    const std::vector<double> flat(grid.values.size(), 0.3);
    close("constant p: beta", fit_power_law(grid.values, flat, {1e-3, 1e-1}).at("beta"), 0.0);
  }
  {
    const std::vector<double> d = {1e2, 1e3, 1e4, 1e5};
    std::vector<double> p;
    for (double x : d) p.push_back(0.1 + 2.0 * std::pow(x, -0.5));
    const auto fit = fit_fractal_dimension(d, p, FractalMode::free());
    close("P_bar = 0.1 + 2 D^-0.5, free P_inf: P_inf", fit.at("P_inf"), 0.1);
    close("P_bar = 0.1 + 2 D^-0.5, free P_inf: c", fit.at("c"), 2.0);
    close("P_bar = 0.1 + 2 D^-0.5, free P_inf: gamma", fit.at("gamma"), 0.5);
    std::vector<double> inv;
    for (double x : d) inv.push_back(1.0 / x);
    const auto erg = fit_fractal_dimension(d, inv, FractalMode::fixed(0.0));
    close("P_bar = 1/D, P_inf = 0: gamma", erg.at("gamma"), 1.0);
    close("P_bar = 1/D, P_inf = 0: c", erg.at("c"), 1.0);
    std::vector<double> lin, quad;
    for (double x : d) {
      lin.push_back(2.0 * std::numbers::pi * x);
      quad.push_back(x * x);
    }
    close("t_H = 2 pi D: n", fit_heisenberg_exponent(d, lin).at("n"), 1.0);
    close("t_H = D^2: n", fit_heisenberg_exponent(d, quad).at("n"), 2.0);
  }
  close("beta = gamma / n at (0.53, 2.03)", beta_prediction(0.53, 2.03), 0.53 / 2.03);
  {
    // Curves that are one increasing function of the collapse variable.
    std::vector<CollapsePoint> pts;
    for (int L : {4, 6, 8})
      for (int k = 0; k < 9; ++k) {
        const double alpha = 0.6 + 0.03 * k;
        pts.push_back({alpha, L, std::tanh(collapse_variable(alpha, L, 0.7, 0.6))});
      }
    close("collapse cost of exactly collapsed monotone data", collapse_cost(pts, 0.7, 0.6), 0.0);
  }
  return o;
}

// ---------------------------------------------------------------- criterion 10

Outcome criterion10(const Context& ctx) {
  Outcome o{10, "determinism: worker count and resume do not change the results", {}, {}};
  SweepConfig c;
  c.name = "determinism";
  c.model = ModelConfig::avalanche(3, 3, 0.716);
  c.scan = {{"alpha", {0.65, 0.75}}, {"L", {3, 4}}};
  c.realizations = 12;
  c.tasks = {Task::Survival, Task::SFF, Task::RStat, Task::IPR, Task::Heisenberg};
  c.initial_states = {InitialFamily::BasisLocalized, InitialFamily::PlaneWave, InitialFamily::InfiniteTemperature};
  c.power_window = FitWindow{1e-2, 1e-1};
  RunOptions one, eight;
  eight.workers = 8;
  const std::string a = to_json(run_sweep(c, one)).dump();
  const std::string b = to_json(run_sweep(c, eight)).dump();
  check(o, a == b, "serialized ResultSet identical for 1 and 8 workers (" + std::to_string(a.size()) + " bytes)");

  const fs::path dir = ctx.cache / "determinism_resume";
  fs::remove_all(dir);
  RunOptions partial;
  partial.checkpoint_dir = dir;
  partial.stop_after = 17;
  const bool incomplete = !run_sweep(c, partial).complete;
  RunOptions resume;
  resume.checkpoint_dir = dir;
  resume.resume = true;
  resume.workers = 3;
  const std::string r = to_json(run_sweep(c, resume)).dump();
  check(o, incomplete && r == a, "interrupted after 17 jobs and resumed: identical to the straight run");
  fs::remove_all(dir);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scaleinv acceptance criteria"};
  std::vector<int> ids;
  Context ctx;
  std::string cache = "acceptance_cache";
  app.add_option("--criterion", ids, "criteria to run (default: all)")->check(CLI::Range(1, 10));
  app.add_option("--cache", cache, "checkpoint cache for the heavy sweeps");
  app.add_option("--workers", ctx.workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--verbose", ctx.verbose, "sweep progress on stderr");
  CLI11_PARSE(app, argc, argv);
  ctx.cache = cache;
  fs::create_directories(ctx.cache);
  if (ids.empty()) ids = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

  const std::vector<std::function<Outcome(const Context&)>> table = {
      criterion1, criterion2, criterion3, criterion4, criterion5,
      criterion6, criterion7, criterion8, criterion9, criterion10};
  bool all = true;
  for (int id : ids) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = table[static_cast<std::size_t>(id - 1)](ctx);
    } catch (const std::exception& e) {
      o.id = id;
      o.title = "criterion " + std::to_string(id);
      o.checks.push_back({std::string("error: ") + e.what(), false});
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const auto& n : o.notes) std::cout << "  . " << n << "\n";
    for (const auto& c : o.checks) std::cout << "  " << (c.ok ? "ok   " : "FAIL ") << c.what << "\n";
    std::cout << (o.pass() ? "PASS" : "FAIL") << " criterion " << id << ": " << o.title << " ["
              << g3(secs) << " s]\n"
              << std::flush;
    all = all && o.pass();
  }
  return all ? 0 : 1;
}
