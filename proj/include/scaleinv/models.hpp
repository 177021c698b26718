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
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scaleinv/matrix.hpp"

namespace scaleinv {

enum class ModelKind { AubryAndre, Anderson3D, Avalanche };
enum class Boundary { Open, Periodic };

std::string_view to_string(ModelKind kind) noexcept;
std::string_view to_string(Boundary boundary) noexcept;
ModelKind parse_model_kind(std::string_view text);
Boundary parse_boundary(std::string_view text);

/// Inverse golden ratio used as the incommensurate wave number of the
/// quasiperiodic potential.
inline constexpr double kGoldenWaveNumber = 0.61803398874989484820;

/// Full parameterization of one Hamiltonian ensemble.
struct ModelConfig {
  ModelKind kind = ModelKind::AubryAndre;
  int L = 2;              // chain length / cube edge / spins outside the dot
  double J = 1.0;         // hopping, quadratic models
  double lambda = 0.0;    // quasiperiodic amplitude
  double W = 0.0;         // box width of on-site energies
  int N = 5;              // spins in the dot
  double g0 = 1.0;
  double alpha = 1.0;     // coupling decay, (0, 1]
  double beta_goe = 0.3;  // GOE scale of the dot matrix
  Boundary boundary = Boundary::Open;

  /// Defaults per model: open chain for Aubry-Andre, periodic cube for
  /// Anderson. Avalanche ignores the boundary.
  static ModelConfig aubry_andre(int L, double lambda, double J = 1.0);
  static ModelConfig anderson3d(int L, double W, double J = 1.0);
  static ModelConfig avalanche(int N, int L, double alpha, double g0 = 1.0,
                               double beta_goe = 0.3);

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

/// Hilbert-space dimension: L, L^3 or 2^(N+L). Throws InvalidArgument when the
/// dense D x D matrix would not be addressable.
std::size_t hilbert_dimension(const ModelConfig& config);

/// Throws InvalidArgument on any out-of-range field for the model kind.
void validate(const ModelConfig& config);

/// Random draws of one disorder realization. Only the fields of the
/// configured model kind are populated.
struct Realization {
  std::uint64_t seed = 0;
  double phi = 0.0;                 // Aubry-Andre phase in [0, 2 pi)
  std::vector<double> eps;          // Anderson on-site energies
  std::vector<double> fields;       // avalanche h_i in [0.5, 1.5]
  std::vector<double> exponents;    // avalanche u_i, u_0 = 0
  std::vector<int> dot_partner;     // avalanche n_i in [0, N)
  DenseSymmetricMatrix dot_matrix;  // avalanche R, 2^N x 2^N

  friend bool operator==(const Realization&, const Realization&) = default;
};

/// Draws every random element of a realization from `seed`. Each quantity
/// uses its own counter stream, so the draws are bit-identical for identical
/// (config, seed).
Realization sample_realization(const ModelConfig& config, std::uint64_t seed);

/// Open or periodic chain with -J nearest-neighbour hopping and on-site
/// energies lambda cos(2 pi q i + phi), i = 1..L.
DenseSymmetricMatrix build_aubry_andre(const ModelConfig& config, double phi);

/// L x L x L periodic cube, -J on every nearest-neighbour bond, diagonal eps.
/// Site index is (x L + y) L + z. For L = 2 the +/- neighbours coincide and
/// the bond is counted once.
DenseSymmetricMatrix build_anderson3d(const ModelConfig& config,
                                      std::span<const double> eps);

/// Avalanche model:
///   H = R (x) I + g0 sum_i alpha^u_i S^x_{n_i} S^x_i + sum_i h_i S^z_i
/// with S = sigma / 2. Dot spins are the leading Kronecker factors; spin j of
/// a block of n spins is bit (n - 1 - j) of its index, bit 0 meaning S^z = +1/2.
DenseSymmetricMatrix build_avalanche(const ModelConfig& config,
                                     const Realization& realization);

/// beta (A + A^T) / 2 with i.i.d. standard normal A.
DenseSymmetricMatrix sample_goe(std::size_t n, double beta_goe,
                                std::uint64_t seed);

/// Dispatches on config.kind.
DenseSymmetricMatrix build_hamiltonian(const ModelConfig& config,
                                       const Realization& realization);

/// Sum of the diagonal contributions predicted analytically for the model:
/// sum eps for quadratic models, trace(R) 2^L for the avalanche model.
double analytic_trace(const ModelConfig& config, const Realization& realization);

}  // namespace scaleinv
