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

#include <atomic>
#include <cstdlib>
#include <string>

#include "scaleinv/error.hpp"
#include "scaleinv/kernels.hpp"

namespace scaleinv::kernels {

namespace {

Isa detect() noexcept {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Isa::Avx2;
#endif
  return Isa::Scalar;
}

Isa initial_isa() noexcept {
  const Isa best = detect();
  if (const char* env = std::getenv("SCALEINV_ISA")) {
    const std::string requested(env);
    if (requested == "scalar") return Isa::Scalar;
    if (requested == "avx2" && best == Isa::Avx2) return Isa::Avx2;
  }
  return best;
}

std::atomic<Isa>& current() noexcept {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

bool use_avx2() noexcept {
  return current().load(std::memory_order_relaxed) == Isa::Avx2;
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
  return isa == Isa::Avx2 ? "avx2" : "scalar";
}

bool isa_supported(Isa isa) noexcept {
  return isa == Isa::Scalar || detect() == Isa::Avx2;
}

Isa active_isa() noexcept { return current().load(); }

void force_isa(Isa isa) {
  if (!isa_supported(isa)) {
    throw InvalidArgument("kernel ISA '" + std::string(to_string(isa)) +
                          "' is not supported on this CPU");
  }
  current().store(isa);
}

void scaled_sincos(const double* e, std::size_t n, double t, double* c, double* s) {
  use_avx2() ? avx2::scaled_sincos(e, n, t, c, s) : scalar::scaled_sincos(e, n, t, c, s);
}

PhaseSum phase_sum(const double* e, std::size_t n, double t) {
  return use_avx2() ? avx2::phase_sum(e, n, t) : scalar::phase_sum(e, n, t);
}

double sum_modulus_squared(const double* a, const double* b, std::size_t n) {
  return use_avx2() ? avx2::sum_modulus_squared(a, b, n)
                    : scalar::sum_modulus_squared(a, b, n);
}

double sum_squares(const double* x, std::size_t n) {
  return use_avx2() ? avx2::sum_squares(x, n) : scalar::sum_squares(x, n);
}

void square(const double* x, std::size_t n, double* out) {
  use_avx2() ? avx2::square(x, n, out) : scalar::square(x, n, out);
}

void gap_ratios(const double* d, std::size_t n, double* r) {
  use_avx2() ? avx2::gap_ratios(d, n, r) : scalar::gap_ratios(d, n, r);
}

}  // namespace scaleinv::kernels
