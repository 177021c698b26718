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

#include <algorithm>
#include <cmath>
#include <limits>

#include "scaleinv/kernels.hpp"

namespace scaleinv::kernels::scalar {

void scaled_sincos(const double* e, std::size_t n, double t, double* c, double* s) {
  for (std::size_t i = 0; i < n; ++i) {
    const double x = e[i] * t;
    c[i] = std::cos(x);
    s[i] = std::sin(x);
  }
}

PhaseSum phase_sum(const double* e, std::size_t n, double t) {
  PhaseSum sum;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = e[i] * t;
    sum.re += std::cos(x);
    sum.im += std::sin(x);
  }
  return sum;
}

double sum_modulus_squared(const double* a, const double* b, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += a[i] * a[i] + b[i] * b[i];
  return sum;
}

double sum_squares(const double* x, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += x[i] * x[i];
  return sum;
}

void square(const double* x, std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * x[i];
}

void gap_ratios(const double* d, std::size_t n, double* r) {
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double lo = std::min(d[i], d[i + 1]);
    const double hi = std::max(d[i], d[i + 1]);
    r[i] = hi > 0.0 ? lo / hi : std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace scaleinv::kernels::scalar
