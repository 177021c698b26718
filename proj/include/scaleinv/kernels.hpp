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

// Data-parallel inner loops of the time-domain pipeline.
//
// Every kernel has a scalar reference implementation (namespace `scalar`) and
// an AVX2+FMA implementation (namespace `avx2`, only callable when the CPU
// supports it). The free functions in `kernels` dispatch to the variant chosen
// once at startup: the best supported ISA, unless SCALEINV_ISA=scalar|avx2 is
// set in the environment or force_isa() is called.
//
// The variants agree to rounding: sincos within a few ulp of std::sin/cos for
// |x| < 2^31, reductions within summation-order error.

#include <cstddef>
#include <string_view>

namespace scaleinv::kernels {

enum class Isa { Scalar, Avx2 };

struct PhaseSum {
  double re = 0.0;  // sum_i cos(e_i t)
  double im = 0.0;  // sum_i sin(e_i t)
};

std::string_view to_string(Isa isa) noexcept;
bool isa_supported(Isa isa) noexcept;
Isa active_isa() noexcept;
/// Selects the variant used by the dispatching functions. Throws
/// InvalidArgument when the CPU does not support `isa`.
void force_isa(Isa isa);

// c[i] = cos(e[i] * t), s[i] = sin(e[i] * t).
void scaled_sincos(const double* e, std::size_t n, double t, double* c, double* s);
// Sums of cos(e[i] t) and sin(e[i] t).
PhaseSum phase_sum(const double* e, std::size_t n, double t);
// sum_i a[i]^2 + b[i]^2.
double sum_modulus_squared(const double* a, const double* b, std::size_t n);
// sum_i x[i]^2.
double sum_squares(const double* x, std::size_t n);
// out[i] = x[i]^2 (out may alias x).
void square(const double* x, std::size_t n, double* out);
// r[i] = min(d[i], d[i+1]) / max(d[i], d[i+1]) for i < n - 1; NaN when both
// spacings are zero.
void gap_ratios(const double* d, std::size_t n, double* r);

namespace scalar {
void scaled_sincos(const double* e, std::size_t n, double t, double* c, double* s);
PhaseSum phase_sum(const double* e, std::size_t n, double t);
double sum_modulus_squared(const double* a, const double* b, std::size_t n);
double sum_squares(const double* x, std::size_t n);
void square(const double* x, std::size_t n, double* out);
void gap_ratios(const double* d, std::size_t n, double* r);
}  // namespace scalar

namespace avx2 {
void scaled_sincos(const double* e, std::size_t n, double t, double* c, double* s);
PhaseSum phase_sum(const double* e, std::size_t n, double t);
double sum_modulus_squared(const double* a, const double* b, std::size_t n);
double sum_squares(const double* x, std::size_t n);
void square(const double* x, std::size_t n, double* out);
void gap_ratios(const double* d, std::size_t n, double* r);
}  // namespace avx2

}  // namespace scaleinv::kernels
