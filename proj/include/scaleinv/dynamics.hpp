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
#include <span>
#include <string_view>
#include <vector>

#include "scaleinv/quench.hpp"
#include "scaleinv/spectral.hpp"

namespace scaleinv {

enum class TimeScale {
  Absolute,          // values are times t (hbar / J = 1)
  HeisenbergScaled,  // values are tau; evaluation times are tau * t_H^typ
};

std::string_view to_string(TimeScale scale) noexcept;
TimeScale parse_time_scale(std::string_view text);

struct TimeGrid {
  std::vector<double> values;
  TimeScale scale = TimeScale::HeisenbergScaled;
  double t_min = 0.0;
  double t_max = 0.0;

  std::size_t n_points() const noexcept { return values.size(); }
  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

/// Logarithmic grid with exact endpoints.
TimeGrid make_time_grid(double t_min, double t_max, std::size_t n_points,
                        TimeScale scale = TimeScale::HeisenbergScaled);
/// Grid over [t_min, t_max] with the given density; the number of decades
/// times points_per_decade must be (close to) an integer.
TimeGrid make_time_grid_per_decade(double t_min, double t_max, int points_per_decade,
                                   TimeScale scale = TimeScale::HeisenbergScaled);

/// Times at which the curve is evaluated: the grid values, multiplied by
/// t_H^typ for a HeisenbergScaled grid.
std::vector<double> evaluation_times(const TimeGrid& grid, double t_H_typ);

enum class CurveKind { SurvivalRaw, SurvivalScaled, SFFRaw };

std::string_view to_string(CurveKind kind) noexcept;
CurveKind parse_curve_kind(std::string_view text);

struct CurveConstants {
  double P_bar = 0.0;
  double P_inf = 0.0;
  double t_H_typ = 0.0;
  std::size_t dim = 0;
  friend bool operator==(const CurveConstants&, const CurveConstants&) = default;
};

/// Disorder-averaged curve. For SurvivalScaled the x values are tau; for the
/// raw kinds they are the grid values as given.
struct CurveEnsemble {
  CurveKind kind = CurveKind::SurvivalRaw;
  TimeGrid grid;
  std::vector<double> mean;
  std::vector<double> std_err;
  std::size_t n_realizations = 0;
  std::size_t n_initial_states = 0;
  CurveConstants constants;

  friend bool operator==(const CurveEnsemble&, const CurveEnsemble&) = default;
};

/// Welford mean/variance over equally weighted vectors of fixed length.
class EnsembleAccumulator {
 public:
  explicit EnsembleAccumulator(std::size_t length = 0) : mean_(length, 0.0), m2_(length, 0.0) {}

  void add(std::span<const double> sample);
  std::size_t count() const noexcept { return count_; }
  std::size_t length() const noexcept { return mean_.size(); }
  const std::vector<double>& mean() const noexcept { return mean_; }
  /// Unbiased sample variance; zero for fewer than two samples.
  std::vector<double> variance() const;
  /// sqrt(variance / count); zero for fewer than two samples.
  std::vector<double> std_err() const;

 private:
  std::size_t count_ = 0;
  std::vector<double> mean_;
  std::vector<double> m2_;
};

/// P(t_j) = mean_m |sum_nu w_{nu m} exp(-i E_nu t_j)|^2 for one realization.
/// The phase sums are a (M x D) x (D x T) product evaluated with dgemm on a
/// cos/sin table.
std::vector<double> survival_probability(const Spectrum& spec, const OverlapWeights& weights,
                                         std::span<const double> times);
/// Same on energies alone.
std::vector<double> survival_probability(std::span<const double> energies,
                                         const OverlapWeights& weights,
                                         std::span<const double> times);

/// p = (P - P_inf) / (P_bar - P_inf) on tau = t / t_H^typ. The raw curve must
/// have been evaluated at evaluation_times(raw.grid, t_H_typ). Throws
/// NumericalError("degenerate scaling denominator") when P_bar - P_inf < 1e-14.
CurveEnsemble scaled_survival(const CurveEnsemble& raw, double P_bar, double P_inf,
                              double t_H_typ);

/// |sum_nu exp(-i E_nu t_j)|^2 / D for one spectrum.
std::vector<double> sff_realization(std::span<const double> energies,
                                    std::span<const double> times);

/// Centred running mean over `window` points (odd), shrinking at the edges.
std::vector<double> running_average(std::span<const double> values, std::size_t window);

/// Realization-averaged raw SFF on the grid. Each realization's curve is
/// smoothed with the running average before averaging, so the standard error
/// refers to the smoothed quantity.
CurveEnsemble raw_sff(std::span<const std::vector<double>> energies_ensemble,
                      const TimeGrid& grid, double t_H_typ, std::size_t running_window);

/// GOE form factor: 2 tau - tau ln(1 + 2 tau) for tau <= 1,
/// 2 - tau ln((2 tau + 1) / (2 tau - 1)) beyond.
double goe_sff_reference(double tau);

}  // namespace scaleinv
