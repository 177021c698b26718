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

#include "scaleinv/quench.hpp"

#include <fftw3.h>

#include <algorithm>
#include <memory>
#include <mutex>
#include <string>

#include "scaleinv/error.hpp"
#include "scaleinv/kernels.hpp"

namespace scaleinv {

std::string_view to_string(InitialFamily family) noexcept {
  switch (family) {
    case InitialFamily::BasisLocalized: return "basis";
    case InitialFamily::PlaneWave: return "plane_wave";
    case InitialFamily::InfiniteTemperature: return "infinite_temperature";
  }
  return "unknown";
}

InitialFamily parse_initial_family(std::string_view text) {
  if (text == "basis") return InitialFamily::BasisLocalized;
  if (text == "plane_wave") return InitialFamily::PlaneWave;
  if (text == "infinite_temperature") return InitialFamily::InfiniteTemperature;
  detail::throw_invalid("unknown initial-state family '" + std::string(text) + "'");
}

std::vector<double> OverlapWeights::column_sums() const {
  std::vector<double> sums(states, 0.0);
  for (std::size_t nu = 0; nu < dim; ++nu) {
    const double* row = data.data() + nu * states;
    for (std::size_t m = 0; m < states; ++m) sums[m] += row[m];
  }
  return sums;
}

std::vector<double> OverlapWeights::row_sums() const {
  std::vector<double> sums(dim, 0.0);
  for (std::size_t nu = 0; nu < dim; ++nu) {
    const double* row = data.data() + nu * states;
    for (std::size_t m = 0; m < states; ++m) sums[nu] += row[m];
  }
  return sums;
}

namespace {

void require_vectors(const Spectrum& spec) {
  detail::require(spec.dim > 0 && spec.has_vectors(),
                  "overlaps: spectrum without eigenvectors");
}

// FFTW planning is not thread-safe; execution with a private plan is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};

class RealFft {
 public:
  explicit RealFft(std::size_t n)
      : n_(n),
        in_(static_cast<double*>(fftw_malloc(sizeof(double) * n))),
        out_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)))) {
    if (!in_ || !out_) throw std::bad_alloc();
    std::lock_guard lock(fftw_planner_mutex());
    plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_.get(), out_.get(), FFTW_ESTIMATE);
    if (plan_ == nullptr) throw NumericalError("FFTW planning failed for n=" + std::to_string(n));
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;
  ~RealFft() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan_);
  }

  double* input() noexcept { return in_.get(); }
  const fftw_complex* output() const noexcept { return out_.get(); }
  void execute() noexcept { fftw_execute(plan_); }

 private:
  std::size_t n_;
  std::unique_ptr<double, FftwFree> in_;
  std::unique_ptr<fftw_complex, FftwFree> out_;
  fftw_plan plan_ = nullptr;
};

}  // namespace

OverlapWeights overlaps_basis_localized(const Spectrum& spec) {
  require_vectors(spec);
  OverlapWeights w;
  w.family = InitialFamily::BasisLocalized;
  w.dim = w.states = spec.dim;
  w.data.resize(spec.vectors.size());
  kernels::square(spec.vectors.data(), spec.vectors.size(), w.data.data());
  return w;
}

OverlapWeights overlaps_basis_localized(Spectrum&& spec) {
  require_vectors(spec);
  OverlapWeights w;
  w.family = InitialFamily::BasisLocalized;
  w.dim = w.states = spec.dim;
  w.data = std::move(spec.vectors);
  kernels::square(w.data.data(), w.data.size(), w.data.data());
  return w;
}

OverlapWeights overlaps_plane_wave(const Spectrum& spec) {
  require_vectors(spec);
  const std::size_t n = spec.dim;
  OverlapWeights w;
  w.family = InitialFamily::PlaneWave;
  w.dim = w.states = n;
  w.data.resize(n * n);
  RealFft fft(n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t nu = 0; nu < n; ++nu) {
    const auto v = spec.eigenvector(nu);
    std::copy(v.begin(), v.end(), fft.input());
    fft.execute();
    const fftw_complex* x = fft.output();
    double* row = w.data.data() + nu * n;
    for (std::size_t k = 0; k <= n / 2; ++k) {
      const double mod2 = (x[k][0] * x[k][0] + x[k][1] * x[k][1]) * inv_n;
      row[k] = mod2;
      if (k != 0) row[n - k] = mod2;
    }
  }
  return w;
}

OverlapWeights overlaps_infinite_temperature(const Spectrum& spec) {
  detail::require(spec.dim > 0, "overlaps: empty spectrum");
  OverlapWeights w;
  w.family = InitialFamily::InfiniteTemperature;
  w.dim = spec.dim;
  w.states = 1;
  w.data.assign(spec.dim, 1.0 / static_cast<double>(spec.dim));
  return w;
}

OverlapWeights compute_overlaps(const Spectrum& spec, InitialFamily family) {
  switch (family) {
    case InitialFamily::BasisLocalized: return overlaps_basis_localized(spec);
    case InitialFamily::PlaneWave: return overlaps_plane_wave(spec);
    case InitialFamily::InfiniteTemperature: return overlaps_infinite_temperature(spec);
  }
  detail::throw_invalid("compute_overlaps: unknown family");
}

double mean_ipr(const OverlapWeights& weights) {
  detail::require(weights.states > 0 && weights.data.size() == weights.dim * weights.states,
                  "mean_ipr: inconsistent weights");
  return kernels::sum_squares(weights.data.data(), weights.data.size()) /
         static_cast<double>(weights.states);
}

}  // namespace scaleinv
