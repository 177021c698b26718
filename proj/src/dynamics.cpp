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

#include "scaleinv/dynamics.hpp"

#include <cblas.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "scaleinv/error.hpp"
#include "scaleinv/kernels.hpp"

namespace scaleinv {

std::string_view to_string(TimeScale scale) noexcept {
  return scale == TimeScale::Absolute ? "absolute" : "heisenberg";
}

TimeScale parse_time_scale(std::string_view text) {
  if (text == "absolute") return TimeScale::Absolute;
  if (text == "heisenberg") return TimeScale::HeisenbergScaled;
  detail::throw_invalid("unknown time scale '" + std::string(text) + "'");
}

std::string_view to_string(CurveKind kind) noexcept {
  switch (kind) {
    case CurveKind::SurvivalRaw: return "survival_raw";
    case CurveKind::SurvivalScaled: return "survival_scaled";
    case CurveKind::SFFRaw: return "sff_raw";
  }
  return "unknown";
}

CurveKind parse_curve_kind(std::string_view text) {
  if (text == "survival_raw") return CurveKind::SurvivalRaw;
  if (text == "survival_scaled") return CurveKind::SurvivalScaled;
  if (text == "sff_raw") return CurveKind::SFFRaw;
  detail::throw_invalid("unknown curve kind '" + std::string(text) + "'");
}

TimeGrid make_time_grid(double t_min, double t_max, std::size_t n_points, TimeScale scale) {
  detail::require(std::isfinite(t_min) && std::isfinite(t_max) && t_min > 0.0 && t_min < t_max,
                  "time grid: need 0 < t_min < t_max");
  detail::require(n_points >= 2, "time grid: need at least 2 points");
  TimeGrid grid;
  grid.scale = scale;
  grid.t_min = t_min;
  grid.t_max = t_max;
  grid.values.resize(n_points);
  const double ratio = t_max / t_min;
  const double last = static_cast<double>(n_points - 1);
  for (std::size_t i = 0; i < n_points; ++i) {
    grid.values[i] = t_min * std::pow(ratio, static_cast<double>(i) / last);
  }
  grid.values.front() = t_min;
  grid.values.back() = t_max;
  return grid;
}

TimeGrid make_time_grid_per_decade(double t_min, double t_max, int points_per_decade,
                                   TimeScale scale) {
  detail::require(points_per_decade >= 1, "time grid: points_per_decade must be positive");
  detail::require(t_min > 0.0 && t_min < t_max, "time grid: need 0 < t_min < t_max");
  const double intervals = std::log10(t_max / t_min) * points_per_decade;
  const auto n = static_cast<std::size_t>(std::llround(intervals)) + 1;
  return make_time_grid(t_min, t_max, std::max<std::size_t>(n, 2), scale);
}

std::vector<double> evaluation_times(const TimeGrid& grid, double t_H_typ) {
  if (grid.scale == TimeScale::Absolute) return grid.values;
  detail::require(std::isfinite(t_H_typ) && t_H_typ > 0.0,
                  "evaluation_times: t_H_typ must be positive");
  std::vector<double> t(grid.values.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = grid.values[i] * t_H_typ;
  return t;
}

void EnsembleAccumulator::add(std::span<const double> sample) {
  detail::require(sample.size() == mean_.size(), "EnsembleAccumulator: length mismatch");
  ++count_;
  const double n = static_cast<double>(count_);
  for (std::size_t i = 0; i < mean_.size(); ++i) {
    const double delta = sample[i] - mean_[i];
    mean_[i] += delta / n;
    m2_[i] += delta * (sample[i] - mean_[i]);
  }
}

std::vector<double> EnsembleAccumulator::variance() const {
  std::vector<double> v(mean_.size(), 0.0);
  if (count_ < 2) return v;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = m2_[i] / static_cast<double>(count_ - 1);
  return v;
}

std::vector<double> EnsembleAccumulator::std_err() const {
  std::vector<double> se = variance();
  for (double& x : se) x = std::sqrt(x / static_cast<double>(count_ == 0 ? 1 : count_));
  return se;
}

namespace {

// Times per dgemm call; bounds the cos/sin tables to D x kTimeBlock.
constexpr std::size_t kTimeBlock = 64;

}  // namespace

std::vector<double> survival_probability(std::span<const double> energies,
                                         const OverlapWeights& weights,
                                         std::span<const double> times) {
  const std::size_t d = energies.size();
  const std::size_t m = weights.states;
  detail::require(d > 0 && weights.dim == d && weights.data.size() == d * m && m > 0,
                  "survival_probability: weights inconsistent with the spectrum");
  for (double t : times) {
    detail::require(std::isfinite(t), "survival_probability: non-finite time");
  }
  std::vector<double> out(times.size());
  const std::size_t block = std::min(kTimeBlock, std::max<std::size_t>(times.size(), 1));
  std::vector<double> c(d * block), s(d * block), a(m * block), b(m * block);
  const double inv_m = 1.0 / static_cast<double>(m);
  for (std::size_t t0 = 0; t0 < times.size(); t0 += block) {
    const std::size_t nt = std::min(block, times.size() - t0);
    for (std::size_t j = 0; j < nt; ++j) {
      kernels::scaled_sincos(energies.data(), d, times[t0 + j], c.data() + j * d,
                             s.data() + j * d);
    }
    const auto im = static_cast<int>(m);
    const auto id = static_cast<int>(d);
    const auto it = static_cast<int>(nt);
    cblas_dgemm(CblasColMajor, CblasNoTrans, CblasNoTrans, im, it, id, 1.0, weights.data.data(),
                im, c.data(), id, 0.0, a.data(), im);
    cblas_dgemm(CblasColMajor, CblasNoTrans, CblasNoTrans, im, it, id, 1.0, weights.data.data(),
                im, s.data(), id, 0.0, b.data(), im);
    for (std::size_t j = 0; j < nt; ++j) {
      out[t0 + j] = kernels::sum_modulus_squared(a.data() + j * m, b.data() + j * m, m) * inv_m;
    }
  }
  return out;
}

std::vector<double> survival_probability(const Spectrum& spec, const OverlapWeights& weights,
                                         std::span<const double> times) {
  return survival_probability(std::span<const double>(spec.energies), weights, times);
}

CurveEnsemble scaled_survival(const CurveEnsemble& raw, double P_bar, double P_inf,
                              double t_H_typ) {
  detail::require(raw.kind == CurveKind::SurvivalRaw, "scaled_survival: expects a raw survival curve");
  detail::require(P_inf >= 0.0, "scaled_survival: P_inf must be non-negative");
  detail::require(std::isfinite(t_H_typ) && t_H_typ > 0.0,
                  "scaled_survival: t_H_typ must be positive");
  const double denom = P_bar - P_inf;
  if (!(denom >= 1e-14)) throw NumericalError("degenerate scaling denominator");
  CurveEnsemble out;
  out.kind = CurveKind::SurvivalScaled;
  out.grid = raw.grid;
  if (raw.grid.scale == TimeScale::Absolute) {
    for (double& v : out.grid.values) v /= t_H_typ;
    out.grid.t_min = out.grid.values.front();
    out.grid.t_max = out.grid.values.back();
    out.grid.scale = TimeScale::HeisenbergScaled;
  }
  out.mean.resize(raw.mean.size());
  out.std_err.resize(raw.std_err.size());
  for (std::size_t i = 0; i < raw.mean.size(); ++i) out.mean[i] = (raw.mean[i] - P_inf) / denom;
  for (std::size_t i = 0; i < raw.std_err.size(); ++i) out.std_err[i] = raw.std_err[i] / denom;
  out.n_realizations = raw.n_realizations;
  out.n_initial_states = raw.n_initial_states;
  out.constants = raw.constants;
  out.constants.P_bar = P_bar;
  out.constants.P_inf = P_inf;
  out.constants.t_H_typ = t_H_typ;
  return out;
}

std::vector<double> sff_realization(std::span<const double> energies,
                                    std::span<const double> times) {
  detail::require(!energies.empty(), "sff: empty spectrum");
  std::vector<double> out(times.size());
  const double inv_d = 1.0 / static_cast<double>(energies.size());
  for (std::size_t j = 0; j < times.size(); ++j) {
    const auto ps = kernels::phase_sum(energies.data(), energies.size(), times[j]);
    out[j] = (ps.re * ps.re + ps.im * ps.im) * inv_d;
  }
  return out;
}

std::vector<double> running_average(std::span<const double> values, std::size_t window) {
  detail::require(window >= 1 && window % 2 == 1, "running_average: window must be odd");
  const std::size_t n = values.size();
  const std::size_t half = window / 2;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t h = std::min({half, i, n - 1 - i});
    double sum = 0.0;
    for (std::size_t j = i - h; j <= i + h; ++j) sum += values[j];
    out[i] = sum / static_cast<double>(2 * h + 1);
  }
  return out;
}

CurveEnsemble raw_sff(std::span<const std::vector<double>> energies_ensemble,
                      const TimeGrid& grid, double t_H_typ, std::size_t running_window) {
  detail::require(!energies_ensemble.empty(), "raw_sff: empty ensemble");
  const auto times = evaluation_times(grid, t_H_typ);
  EnsembleAccumulator acc(times.size());
  for (const auto& energies : energies_ensemble) {
    const auto k = sff_realization(energies, times);
    acc.add(running_window > 1 ? running_average(k, running_window) : k);
  }
  CurveEnsemble out;
  out.kind = CurveKind::SFFRaw;
  out.grid = grid;
  out.mean = acc.mean();
  out.std_err = acc.std_err();
  out.n_realizations = acc.count();
  out.n_initial_states = 0;
  out.constants.t_H_typ = t_H_typ;
  out.constants.dim = energies_ensemble.front().size();
  return out;
}

double goe_sff_reference(double tau) {
  detail::require(std::isfinite(tau) && tau > 0.0, "goe_sff_reference: tau must be positive");
  if (tau <= 1.0) return 2.0 * tau - tau * std::log1p(2.0 * tau);
  return 2.0 - tau * std::log((2.0 * tau + 1.0) / (2.0 * tau - 1.0));
}

}  // namespace scaleinv
