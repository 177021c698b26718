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

#include "scaleinv/spectral.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "scaleinv/error.hpp"
#include "scaleinv/kernels.hpp"

namespace scaleinv {

namespace {

void check_input(const DenseSymmetricMatrix& h) {
  detail::require(h.dim() > 0, "eigendecompose: empty matrix");
  detail::require(h.is_finite(), "eigendecompose: matrix has non-finite entries");
}

[[noreturn]] void solver_failure(const char* routine, std::size_t dim, lapack_int info) {
  throw NumericalError(std::string(routine) + " failed (info=" + std::to_string(info) +
                       ", dim=" + std::to_string(dim) + ")");
}

Spectrum tridiagonal_solve(const DenseSymmetricMatrix& h, bool vectors) {
  const std::size_t n = h.dim();
  Spectrum spec;
  spec.dim = n;
  spec.energies.resize(n);
  std::vector<double> off(n > 1 ? n - 1 : 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) spec.energies[i] = h(i, i);
  for (std::size_t i = 0; i + 1 < n; ++i) off[i] = h(i + 1, i);
  const auto ln = static_cast<lapack_int>(n);
  lapack_int info = 0;
  if (vectors) {
    spec.vectors.assign(n * n, 0.0);
    info = LAPACKE_dstedc(LAPACK_COL_MAJOR, 'I', ln, spec.energies.data(), off.data(),
                          spec.vectors.data(), ln);
    if (info != 0) solver_failure("dstedc", n, info);
  } else {
    info = LAPACKE_dsterf(ln, spec.energies.data(), off.data());
    if (info != 0) solver_failure("dsterf", n, info);
  }
  return spec;
}

Spectrum dense_solve(std::vector<double> buffer, std::size_t n, bool vectors) {
  Spectrum spec;
  spec.dim = n;
  spec.energies.resize(n);
  const auto ln = static_cast<lapack_int>(n);
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'L', ln,
                                         buffer.data(), ln, spec.energies.data());
  if (info != 0) solver_failure("dsyevd", n, info);
  if (vectors) spec.vectors = std::move(buffer);
  return spec;
}

bool use_tridiagonal(const DenseSymmetricMatrix& h, Eigensolver solver) {
  switch (solver) {
    case Eigensolver::Tridiagonal:
      detail::require(h.is_tridiagonal(), "eigendecompose: matrix is not tridiagonal");
      return true;
    case Eigensolver::Dense: return false;
    case Eigensolver::Auto: return h.is_tridiagonal();
  }
  return false;
}

}  // namespace

Spectrum eigendecompose(const DenseSymmetricMatrix& h, EigenOptions options) {
  check_input(h);
  if (use_tridiagonal(h, options.solver)) return tridiagonal_solve(h, options.vectors);
  return dense_solve(std::vector<double>(h.data().begin(), h.data().end()), h.dim(),
                     options.vectors);
}

Spectrum eigendecompose(DenseSymmetricMatrix&& h, EigenOptions options) {
  check_input(h);
  if (use_tridiagonal(h, options.solver)) return tridiagonal_solve(h, options.vectors);
  const std::size_t n = h.dim();
  return dense_solve(std::move(h).release(), n, options.vectors);
}

std::vector<double> level_spacings(std::span<const double> energies) {
  if (energies.size() < 2) return {};
  std::vector<double> out(energies.size() - 1);
  for (std::size_t i = 0; i + 1 < energies.size(); ++i) out[i] = energies[i + 1] - energies[i];
  return out;
}

void SpacingAccumulator::add(std::span<const double> spacings, double floor) {
  double local = 0.0;
  std::size_t kept = 0;
  for (double d : spacings) {
    if (d < floor || d <= 0.0) {
      ++n_discarded_;
      continue;
    }
    local += std::log(d);
    ++kept;
  }
  log_sum_ += local;
  n_retained_ += kept;
  if (kept > 0) {
    realization_log_sum_ += local / static_cast<double>(kept);
    ++n_realizations_;
  }
}

SpacingStats SpacingAccumulator::finish() const {
  if (n_retained_ == 0) throw NumericalError("degenerate spectrum: no spacing above the floor");
  SpacingStats stats;
  const double mean_log = pooling_ == SpacingPooling::Pooled
                              ? log_sum_ / static_cast<double>(n_retained_)
                              : realization_log_sum_ / static_cast<double>(n_realizations_);
  stats.delta_typ = std::exp(mean_log);
  stats.t_H_typ = 2.0 * std::numbers::pi / stats.delta_typ;
  stats.n_retained = n_retained_;
  stats.n_discarded = n_discarded_;
  return stats;
}

SpacingStats typical_heisenberg_time(std::span<const std::vector<double>> spacing_sets,
                                     double floor, SpacingPooling pooling) {
  SpacingAccumulator acc(pooling);
  for (const auto& set : spacing_sets) acc.add(set, floor);
  SpacingStats stats = acc.finish();
  for (const auto& set : spacing_sets) {
    for (double d : set) {
      if (d >= floor && d > 0.0) stats.spacings.push_back(d);
    }
  }
  return stats;
}

double spacing_floor(std::span<const double> energies, double relative_floor) {
  if (energies.size() < 2) return 0.0;
  return relative_floor * (energies.back() - energies.front());
}

LevelWindow central_window(std::size_t dim, double fraction) {
  detail::require(fraction > 0.0 && fraction <= 1.0, "central_window: fraction must be in (0, 1]");
  const auto count = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(dim)));
  return mid_spectrum_window(dim, count);
}

LevelWindow mid_spectrum_window(std::size_t dim, std::size_t count) {
  count = std::min(count, dim);
  const std::size_t begin = (dim - count) / 2;
  return {begin, begin + count};
}

GapRatios gap_ratios(std::span<const double> energies, LevelWindow window) {
  detail::require(window.end <= energies.size() && window.begin <= window.end,
                  "gap_ratios: window outside the spectrum");
  detail::require(window.size() >= 3, "gap_ratios: window must hold at least 3 levels");
  const auto spacings = level_spacings(energies.subspan(window.begin, window.size()));
  std::vector<double> raw(spacings.size() - 1);
  kernels::gap_ratios(spacings.data(), spacings.size(), raw.data());
  GapRatios out;
  out.ratios.reserve(raw.size());
  for (double r : raw) {
    if (std::isnan(r)) {
      ++out.n_dropped;
    } else {
      out.ratios.push_back(r);
    }
  }
  return out;
}

double mean_gap_ratio(std::span<const std::vector<double>> ensemble) {
  detail::require(!ensemble.empty(), "mean_gap_ratio: empty ensemble");
  double total = 0.0;
  std::size_t used = 0;
  for (const auto& ratios : ensemble) {
    if (ratios.empty()) continue;
    double sum = 0.0;
    for (double r : ratios) sum += r;
    total += sum / static_cast<double>(ratios.size());
    ++used;
  }
  detail::require(used > 0, "mean_gap_ratio: no ratios in ensemble");
  return total / static_cast<double>(used);
}

}  // namespace scaleinv
