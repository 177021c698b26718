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

// Compiled with -mavx2 -mfma; only reached through dispatch after a CPU check.

#include <immintrin.h>

#include <cmath>
#include <cstdint>

#include "scaleinv/kernels.hpp"

namespace scaleinv::kernels::avx2 {

namespace {

// pi/2 split into three doubles; with FMA each partial reduction is exact up
// to one rounding of the (small) remainder.
constexpr double kPio2Hi = 1.5707963267948966;
constexpr double kPio2Mid = 6.123233995736766e-17;
constexpr double kPio2Lo = -1.4973849048591698e-33;
constexpr double kTwoOverPi = 0.6366197723675814;

// Above this the quadrant no longer fits an int32; fall back to libm.
constexpr double kReductionLimit = 1.0e9;

// Minimax coefficients on [-pi/4, pi/4] (fdlibm __kernel_sin / __kernel_cos).
constexpr double kS1 = -1.66666666666666324348e-01;
constexpr double kS2 = 8.33333333332248946124e-03;
constexpr double kS3 = -1.98412698298579493134e-04;
constexpr double kS4 = 2.75573137070700676789e-06;
constexpr double kS5 = -2.50507602534068634195e-08;
constexpr double kS6 = 1.58969099521155010221e-10;
constexpr double kC1 = 4.16666666666666019037e-02;
constexpr double kC2 = -1.38888888888741095749e-03;
constexpr double kC3 = 2.48015872894767294178e-05;
constexpr double kC4 = -2.75573143513906633035e-07;
constexpr double kC5 = 2.08757232129817482790e-09;
constexpr double kC6 = -1.13596475577881948265e-11;

struct SinCos {
  __m256d s;
  __m256d c;
};

inline bool needs_libm(__m256d x) {
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  const __m256d ax = _mm256_and_pd(x, abs_mask);
  return _mm256_movemask_pd(_mm256_cmp_pd(ax, _mm256_set1_pd(kReductionLimit), _CMP_GT_OQ)) != 0;
}

inline SinCos sincos4(__m256d x) {
  const __m256d k = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(kTwoOverPi)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(k, _mm256_set1_pd(kPio2Hi), x);
  r = _mm256_fnmadd_pd(k, _mm256_set1_pd(kPio2Mid), r);
  r = _mm256_fnmadd_pd(k, _mm256_set1_pd(kPio2Lo), r);
  const __m256d z = _mm256_mul_pd(r, r);

  __m256d ps = _mm256_fmadd_pd(z, _mm256_set1_pd(kS6), _mm256_set1_pd(kS5));
  ps = _mm256_fmadd_pd(z, ps, _mm256_set1_pd(kS4));
  ps = _mm256_fmadd_pd(z, ps, _mm256_set1_pd(kS3));
  ps = _mm256_fmadd_pd(z, ps, _mm256_set1_pd(kS2));
  ps = _mm256_fmadd_pd(z, ps, _mm256_set1_pd(kS1));
  const __m256d sin_r = _mm256_fmadd_pd(_mm256_mul_pd(r, z), ps, r);

  __m256d pc = _mm256_fmadd_pd(z, _mm256_set1_pd(kC6), _mm256_set1_pd(kC5));
  pc = _mm256_fmadd_pd(z, pc, _mm256_set1_pd(kC4));
  pc = _mm256_fmadd_pd(z, pc, _mm256_set1_pd(kC3));
  pc = _mm256_fmadd_pd(z, pc, _mm256_set1_pd(kC2));
  pc = _mm256_fmadd_pd(z, pc, _mm256_set1_pd(kC1));
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d hz = _mm256_mul_pd(_mm256_set1_pd(0.5), z);
  const __m256d w = _mm256_sub_pd(one, hz);
  // cos r = w + (((1 - w) - hz) + z^2 pc)
  const __m256d tail = _mm256_fmadd_pd(_mm256_mul_pd(z, z), pc,
                                       _mm256_sub_pd(_mm256_sub_pd(one, w), hz));
  const __m256d cos_r = _mm256_add_pd(w, tail);

  // Quadrant q = k mod 4.
  const __m256i q = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(k));
  const __m256i one_i = _mm256_set1_epi64x(1);
  const __m256i two_i = _mm256_set1_epi64x(2);
  const __m256d swap = _mm256_castsi256_pd(
      _mm256_cmpeq_epi64(_mm256_and_si256(q, one_i), one_i));
  const __m256d sin_sign = _mm256_castsi256_pd(
      _mm256_slli_epi64(_mm256_and_si256(q, two_i), 62));
  const __m256d cos_sign = _mm256_castsi256_pd(_mm256_slli_epi64(
      _mm256_and_si256(_mm256_add_epi64(q, one_i), two_i), 62));

  SinCos out;
  out.s = _mm256_xor_pd(_mm256_blendv_pd(sin_r, cos_r, swap), sin_sign);
  out.c = _mm256_xor_pd(_mm256_blendv_pd(cos_r, sin_r, swap), cos_sign);
  return out;
}

inline SinCos sincos4_checked(__m256d x) {
  if (!needs_libm(x)) return sincos4(x);
  alignas(32) double lanes[4], s[4], c[4];
  _mm256_store_pd(lanes, x);
  for (int i = 0; i < 4; ++i) {
    s[i] = std::sin(lanes[i]);
    c[i] = std::cos(lanes[i]);
  }
  return {_mm256_load_pd(s), _mm256_load_pd(c)};
}

inline double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

inline __m256i tail_mask(std::size_t rem) {
  alignas(32) static constexpr std::int64_t kMasks[8] = {-1, -1, -1, -1, 0, 0, 0, 0};
  return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(kMasks + 4 - rem));
}

}  // namespace

void scaled_sincos(const double* e, std::size_t n, double t, double* c, double* s) {
  const __m256d vt = _mm256_set1_pd(t);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const SinCos sc = sincos4_checked(_mm256_mul_pd(_mm256_loadu_pd(e + i), vt));
    _mm256_storeu_pd(c + i, sc.c);
    _mm256_storeu_pd(s + i, sc.s);
  }
  if (i < n) {
    const std::size_t rem = n - i;
    const __m256i mask = tail_mask(rem);
    const SinCos sc = sincos4_checked(_mm256_mul_pd(_mm256_maskload_pd(e + i, mask), vt));
    _mm256_maskstore_pd(c + i, mask, sc.c);
    _mm256_maskstore_pd(s + i, mask, sc.s);
  }
}

PhaseSum phase_sum(const double* e, std::size_t n, double t) {
  const __m256d vt = _mm256_set1_pd(t);
  __m256d re0 = _mm256_setzero_pd(), im0 = _mm256_setzero_pd();
  __m256d re1 = _mm256_setzero_pd(), im1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const SinCos a = sincos4_checked(_mm256_mul_pd(_mm256_loadu_pd(e + i), vt));
    const SinCos b = sincos4_checked(_mm256_mul_pd(_mm256_loadu_pd(e + i + 4), vt));
    re0 = _mm256_add_pd(re0, a.c);
    im0 = _mm256_add_pd(im0, a.s);
    re1 = _mm256_add_pd(re1, b.c);
    im1 = _mm256_add_pd(im1, b.s);
  }
  for (; i + 4 <= n; i += 4) {
    const SinCos a = sincos4_checked(_mm256_mul_pd(_mm256_loadu_pd(e + i), vt));
    re0 = _mm256_add_pd(re0, a.c);
    im0 = _mm256_add_pd(im0, a.s);
  }
  if (i < n) {
    const __m256i mask = tail_mask(n - i);
    const __m256d keep = _mm256_castsi256_pd(mask);
    const SinCos a = sincos4_checked(_mm256_mul_pd(_mm256_maskload_pd(e + i, mask), vt));
    re1 = _mm256_add_pd(re1, _mm256_and_pd(a.c, keep));
    im1 = _mm256_add_pd(im1, _mm256_and_pd(a.s, keep));
  }
  return {horizontal_sum(_mm256_add_pd(re0, re1)), horizontal_sum(_mm256_add_pd(im0, im1))};
}

double sum_modulus_squared(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d a0 = _mm256_loadu_pd(a + i), a1 = _mm256_loadu_pd(a + i + 4);
    const __m256d b0 = _mm256_loadu_pd(b + i), b1 = _mm256_loadu_pd(b + i + 4);
    acc0 = _mm256_fmadd_pd(a0, a0, acc0);
    acc1 = _mm256_fmadd_pd(a1, a1, acc1);
    acc0 = _mm256_fmadd_pd(b0, b0, acc0);
    acc1 = _mm256_fmadd_pd(b1, b1, acc1);
  }
  double sum = horizontal_sum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) sum += a[i] * a[i] + b[i] * b[i];
  return sum;
}

double sum_squares(const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd(), acc3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    const __m256d x0 = _mm256_loadu_pd(x + i), x1 = _mm256_loadu_pd(x + i + 4);
    const __m256d x2 = _mm256_loadu_pd(x + i + 8), x3 = _mm256_loadu_pd(x + i + 12);
    acc0 = _mm256_fmadd_pd(x0, x0, acc0);
    acc1 = _mm256_fmadd_pd(x1, x1, acc1);
    acc2 = _mm256_fmadd_pd(x2, x2, acc2);
    acc3 = _mm256_fmadd_pd(x3, x3, acc3);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d x0 = _mm256_loadu_pd(x + i);
    acc0 = _mm256_fmadd_pd(x0, x0, acc0);
  }
  double sum = horizontal_sum(_mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3)));
  for (; i < n; ++i) sum += x[i] * x[i];
  return sum;
}

void square(const double* x, std::size_t n, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    _mm256_storeu_pd(out + i, _mm256_mul_pd(v, v));
  }
  for (; i < n; ++i) out[i] = x[i] * x[i];
}

void gap_ratios(const double* d, std::size_t n, double* r) {
  if (n < 2) return;
  const std::size_t pairs = n - 1;
  std::size_t i = 0;
  for (; i + 4 <= pairs; i += 4) {
    const __m256d a = _mm256_loadu_pd(d + i);
    const __m256d b = _mm256_loadu_pd(d + i + 1);
    // 0 / 0 yields NaN, matching the scalar convention for a zero pair.
    _mm256_storeu_pd(r + i, _mm256_div_pd(_mm256_min_pd(a, b), _mm256_max_pd(a, b)));
  }
  for (; i < pairs; ++i) {
    const double lo = d[i] < d[i + 1] ? d[i] : d[i + 1];
    const double hi = d[i] < d[i + 1] ? d[i + 1] : d[i];
    r[i] = hi > 0.0 ? lo / hi : std::nan("");
  }
}

}  // namespace scaleinv::kernels::avx2
