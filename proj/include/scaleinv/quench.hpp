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
#include <string_view>
#include <vector>

#include "scaleinv/spectral.hpp"

namespace scaleinv {

enum class InitialFamily {
  BasisLocalized,       // eigenstates of H0 = diag(H): the computational basis
  PlaneWave,            // |k> = D^{-1/2} sum_m exp(-i 2 pi k m / D) |m>
  InfiniteTemperature,  // D^{-1/2} sum_nu |nu>
};

std::string_view to_string(InitialFamily family) noexcept;
InitialFamily parse_initial_family(std::string_view text);

/// w_{nu m} = |<nu|m>|^2 for D eigenstates and M initial states, stored with
/// the initial-state index fastest: w(nu, m) = data[nu * M + m].
struct OverlapWeights {
  InitialFamily family = InitialFamily::BasisLocalized;
  std::size_t dim = 0;     // D
  std::size_t states = 0;  // M
  std::vector<double> data;

  double operator()(std::size_t nu, std::size_t m) const noexcept {
    return data[nu * states + m];
  }
  /// sum_nu w(nu, m) for every m.
  std::vector<double> column_sums() const;
  /// sum_m w(nu, m) for every nu.
  std::vector<double> row_sums() const;
};

/// Squared eigenvector components, M = D.
OverlapWeights overlaps_basis_localized(const Spectrum& spec);
/// Consumes the spectrum and squares the eigenvectors in place.
OverlapWeights overlaps_basis_localized(Spectrum&& spec);

/// |DFT of each eigenvector|^2 / D, M = D. Uses a real-to-complex FFT per
/// eigenvector; the k > D/2 half follows from conjugate symmetry.
OverlapWeights overlaps_plane_wave(const Spectrum& spec);

/// Single state with w_nu = 1/D.
OverlapWeights overlaps_infinite_temperature(const Spectrum& spec);

OverlapWeights compute_overlaps(const Spectrum& spec, InitialFamily family);

/// Mean over initial states of sum_nu w_{nu m}^2 for one realization.
double mean_ipr(const OverlapWeights& weights);

}  // namespace scaleinv
