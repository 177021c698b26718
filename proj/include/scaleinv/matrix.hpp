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
#include <utility>
#include <vector>

namespace scaleinv {

/// Dense real symmetric matrix, row-major. Off-diagonal entries are only
/// written through set_pair/add_pair, which store the same double on both
/// sides, so H(i,j) == H(j,i) bitwise. Because the storage is symmetric it is
/// also a valid column-major buffer for LAPACK.
class DenseSymmetricMatrix {
 public:
  DenseSymmetricMatrix() = default;
  explicit DenseSymmetricMatrix(std::size_t dim)
      : dim_(dim), data_(dim * dim, 0.0) {}

  std::size_t dim() const noexcept { return dim_; }

  double operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * dim_ + j];
  }

  void set_diagonal(std::size_t i, double value) noexcept {
    data_[i * dim_ + i] = value;
  }
  void add_diagonal(std::size_t i, double value) noexcept {
    data_[i * dim_ + i] += value;
  }

  /// H(i,j) = H(j,i) = value. For i == j sets the diagonal.
  void set_pair(std::size_t i, std::size_t j, double value) noexcept {
    data_[i * dim_ + j] = value;
    data_[j * dim_ + i] = value;
  }

  /// H(i,j) += value and H(j,i) += value, i != j. Both sides start from the
  /// same bits and receive the same addend, so they stay equal.
  void add_pair(std::size_t i, std::size_t j, double value) noexcept {
    const double updated = data_[i * dim_ + j] + value;
    data_[i * dim_ + j] = updated;
    data_[j * dim_ + i] = updated;
  }

  double trace() const noexcept;
  double max_abs() const noexcept;
  bool is_symmetric() const noexcept;
  bool is_finite() const noexcept;
  /// True when every entry with |i - j| > 1 is exactly zero.
  bool is_tridiagonal() const noexcept;

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> mutable_data() noexcept { return data_; }

  /// Moves the storage out (used to hand the buffer to an in-place solver).
  std::vector<double> release() && noexcept {
    dim_ = 0;
    return std::move(data_);
  }

  friend bool operator==(const DenseSymmetricMatrix&,
                         const DenseSymmetricMatrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

}  // namespace scaleinv
