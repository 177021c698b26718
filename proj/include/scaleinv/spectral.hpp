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
#include <vector>

#include "scaleinv/matrix.hpp"

namespace scaleinv {

/// Eigenpairs of one realization. `vectors` is column-major: eigenvector nu
/// occupies vectors[nu * dim .. (nu + 1) * dim), so component m of |nu> is
/// vectors[nu * dim + m]. Empty when only eigenvalues were requested.
struct Spectrum {
  std::size_t dim = 0;
  std::vector<double> energies;
  std::vector<double> vectors;

  bool has_vectors() const noexcept { return !vectors.empty(); }
  std::span<const double> eigenvector(std::size_t nu) const noexcept {
    return {vectors.data() + nu * dim, dim};
  }
};

enum class Eigensolver {
  Auto,         // tridiagonal fast path when applicable, otherwise dense
  Dense,        // dsyevd
  Tridiagonal,  // dstedc / dsterf, requires a tridiagonal matrix
};

struct EigenOptions {
  bool vectors = true;
  Eigensolver solver = Eigensolver::Auto;
};

/// Full symmetric eigendecomposition with ascending energies. Rejects
/// non-finite entries; reports solver failure as NumericalError with the
/// matrix dimension and LAPACK info code.
Spectrum eigendecompose(const DenseSymmetricMatrix& h, EigenOptions options = {});
/// Same, consuming the matrix so the solver can work in its storage.
Spectrum eigendecompose(DenseSymmetricMatrix&& h, EigenOptions options = {});

/// delta_nu = E_{nu+1} - E_nu for ascending energies (length D - 1).
std::vector<double> level_spacings(std::span<const double> energies);

struct SpacingStats {
  std::vector<double> spacings;  // pooled retained spacings (optional)
  double delta_typ = 0.0;
  double t_H_typ = 0.0;
  std::size_t n_retained = 0;
  std::size_t n_discarded = 0;
};

enum class SpacingPooling {
  Pooled,          // one geometric mean over all spacings of all realizations
  PerRealization,  // geometric mean of per-realization geometric means
};

/// Streaming log-average of level spacings. Spacings below the floor passed
/// to add() are dropped and counted.
class SpacingAccumulator {
 public:
  explicit SpacingAccumulator(SpacingPooling pooling = SpacingPooling::Pooled)
      : pooling_(pooling) {}

  void add(std::span<const double> spacings, double floor);
  /// Throws NumericalError("degenerate spectrum") when nothing was retained.
  SpacingStats finish() const;

  std::size_t n_retained() const noexcept { return n_retained_; }
  std::size_t n_discarded() const noexcept { return n_discarded_; }

 private:
  SpacingPooling pooling_;
  double log_sum_ = 0.0;
  std::size_t n_retained_ = 0;
  std::size_t n_discarded_ = 0;
  double realization_log_sum_ = 0.0;  // sum of per-realization mean logs
  std::size_t n_realizations_ = 0;
};

/// Typical spacing exp<<ln delta>> over all sets, t_H^typ = 2 pi / delta_typ.
SpacingStats typical_heisenberg_time(std::span<const std::vector<double>> spacing_sets,
                                     double floor,
                                     SpacingPooling pooling = SpacingPooling::Pooled);

/// Floor used by the pipeline: relative_floor * (E_max - E_min).
double spacing_floor(std::span<const double> energies, double relative_floor = 1e-12);

/// Half-open index range [begin, end) of levels.
struct LevelWindow {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const noexcept { return end - begin; }
};

/// Central `fraction` of D levels.
LevelWindow central_window(std::size_t dim, double fraction = 0.5);
/// `count` levels centred on the middle of the spectrum (clipped to D).
LevelWindow mid_spectrum_window(std::size_t dim, std::size_t count);

struct GapRatios {
  std::vector<double> ratios;
  std::size_t n_dropped = 0;  // pairs whose larger spacing was zero
};

/// r_nu = min(d_nu, d_{nu+1}) / max(d_nu, d_{nu+1}) for consecutive spacing
/// pairs inside the window. The window must hold at least 3 levels.
GapRatios gap_ratios(std::span<const double> energies, LevelWindow window);

/// Mean over states within each realization, then over realizations.
double mean_gap_ratio(std::span<const std::vector<double>> ensemble);

}  // namespace scaleinv
