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

#include "scaleinv/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace scaleinv {

double DenseSymmetricMatrix::trace() const noexcept {
  double sum = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) sum += data_[i * dim_ + i];
  return sum;
}

double DenseSymmetricMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

bool DenseSymmetricMatrix::is_symmetric() const noexcept {
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = i + 1; j < dim_; ++j) {
      const double a = data_[i * dim_ + j];
      const double b = data_[j * dim_ + i];
      if (std::memcmp(&a, &b, sizeof(double)) != 0) return false;
    }
  }
  return true;
}

bool DenseSymmetricMatrix::is_finite() const noexcept {
  for (double x : data_) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

bool DenseSymmetricMatrix::is_tridiagonal() const noexcept {
  for (std::size_t i = 0; i < dim_; ++i) {
    const double* row = data_.data() + i * dim_;
    for (std::size_t j = i + 2; j < dim_; ++j) {
      if (row[j] != 0.0) return false;
    }
  }
  return true;
}

}  // namespace scaleinv
