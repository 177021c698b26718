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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scaleinv/dynamics.hpp"

namespace scaleinv {

struct FitWindow {
  double lo = 0.0;
  double hi = 0.0;
  friend bool operator==(const FitWindow&, const FitWindow&) = default;
};

struct FitResult {
  std::map<std::string, double> params;
  /// Row-major covariance of the fitted linear coefficients, when available.
  std::vector<double> covariance;
  double residual = 0.0;  // RMS in fit coordinates
  FitWindow window;
  std::size_t n_points = 0;
  std::vector<std::string> warnings;

  double at(const std::string& name) const;
  friend bool operator==(const FitResult&, const FitResult&) = default;
};

/// Ordinary least squares y = intercept + slope x. Covariance holds
/// (intercept, slope) with sigma^2 = SSR / (n - 2), zero for n = 2.
struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double rms = 0.0;
  double max_abs_residual = 0.0;
  double cov[4] = {0.0, 0.0, 0.0, 0.0};
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// ln p = ln a - beta ln tau over the grid points inside [lo, hi].
/// Params: a, beta.
FitResult fit_power_law(std::span<const double> tau, std::span<const double> p, FitWindow window);
FitResult fit_power_law(const CurveEnsemble& curve, FitWindow window);

struct FractalMode {
  enum class Kind { FixedPinf, FreePinf } kind = Kind::FixedPinf;
  double p_inf = 0.0;  // used by FixedPinf

  static FractalMode fixed(double p_inf) { return {Kind::FixedPinf, p_inf}; }
  static FractalMode free() { return {Kind::FreePinf, 0.0}; }
};

/// P_bar = P_inf + c D^-gamma. Params: P_inf, c, gamma.
FitResult fit_fractal_dimension(std::span<const double> dims, std::span<const double> p_bar,
                                FractalMode mode);

/// t_H = A D^n. Params: n, A.
FitResult fit_heisenberg_exponent(std::span<const double> dims, std::span<const double> t_H);

/// gamma / n.
double beta_prediction(double gamma, double n);

struct CollapsePoint {
  double alpha = 0.0;
  int L = 0;
  double r = 0.0;
  friend bool operator==(const CollapsePoint&, const CollapsePoint&) = default;
};

/// Scaling variable sign * L^{1/mu} * [ln(alpha / alpha_c)]^2, negative for
/// alpha < alpha_c.
double collapse_variable(double alpha, int L, double alpha_c, double mu);

/// Normalized total variation of r along the collapse axis minus one. Points
/// with alpha == alpha_c are excluded and counted in `n_excluded`.
double collapse_cost(std::span<const CollapsePoint> points, double alpha_c, double mu,
                     std::size_t* n_excluded = nullptr);

struct CollapseOptions {
  std::size_t grid_alpha = 50;
  std::size_t grid_mu = 50;
  int refine_rounds = 3;
};

struct CollapseResult {
  double alpha_c = 0.0;
  double mu = 0.0;
  double cost = 0.0;
  FitWindow alpha_range;
  FitWindow mu_range;
  bool converged = true;
  std::string note;
  friend bool operator==(const CollapseResult&, const CollapseResult&) = default;
};

/// Coarse grid then alternating golden-section refinement on alpha_c and mu.
/// Ties on the grid go to the lower alpha_c, then the lower mu. A minimizer on
/// the boundary of either range, or fewer than two sizes, is flagged
/// non-converged.
CollapseResult minimize_collapse(std::span<const CollapsePoint> points, FitWindow alpha_range,
                                 FitWindow mu_range, CollapseOptions options = {});

/// Widest window of at least `min_points` grid points inside [lo, hi] whose
/// power-law fit keeps every log-space residual below `max_residual`.
std::optional<FitWindow> propose_power_window(std::span<const double> tau,
                                              std::span<const double> p, FitWindow bounds,
                                              std::size_t min_points = 5,
                                              double max_residual = 0.02);

/// Longest run of consecutive grid points inside `bounds` where two curves on
/// the same grid agree within n_sigma combined standard errors.
struct CoincidenceWindow {
  FitWindow window;
  std::size_t n_points = 0;
  double decades = 0.0;
};
CoincidenceWindow coincidence_window(const CurveEnsemble& a, const CurveEnsemble& b,
                                     double n_sigma, FitWindow bounds);

}  // namespace scaleinv
