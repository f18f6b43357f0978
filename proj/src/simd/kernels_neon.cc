// Copyright 2026 The eegvit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// aarch64 only; Advanced SIMD is part of the base ISA there.
#include <arm_neon.h>

#include <cmath>
#include <cstring>

#include "eegvit/simd.h"

namespace eegvit::simd {
namespace {

double Dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double sum = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void Axpy(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void GemmNN(const double* a, const double* b, double* c, std::size_t m,
            std::size_t k, std::size_t n, bool accumulate) {
  if (!accumulate) std::memset(c, 0, m * n * sizeof(double));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) Axpy(a[i * k + p], b + p * n, c + i * n, n);
  }
}

void GemmNT(const double* a, const double* b, double* c, std::size_t m,
            std::size_t k, std::size_t n, bool accumulate) {
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = Dot(a + i * k, b + j * k, k);
      c[i * n + j] = accumulate ? c[i * n + j] + v : v;
    }
  }
}

void GemmTN(const double* a, const double* b, double* c, std::size_t m,
            std::size_t k, std::size_t n, bool accumulate) {
  if (!accumulate) std::memset(c, 0, m * n * sizeof(double));
  for (std::size_t p = 0; p < k; ++p) {
    for (std::size_t i = 0; i < m; ++i) Axpy(a[p * m + i], b + p * n, c + i * n, n);
  }
}

void CMul(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  double* po = reinterpret_cast<double*>(out);
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t va = vld1q_f64(pa + 2 * i);
    const float64x2_t vb = vld1q_f64(pb + 2 * i);
    const float64x2_t a_re = vdupq_laneq_f64(va, 0);
    const float64x2_t a_im = vdupq_laneq_f64(va, 1);
    const float64x2_t b_swap = vextq_f64(vb, vb, 1);  // [bi, br]
    const float64x2_t sign = {-1.0, 1.0};
    float64x2_t r = vmulq_f64(a_re, vb);               // [ar br, ar bi]
    r = vfmaq_f64(r, vmulq_f64(a_im, sign), b_swap);   // [-ai bi, ai br]
    vst1q_f64(po + 2 * i, r);
  }
}

void CAbs(const cplx* a, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double re = a[i].real(), im = a[i].imag();
    out[i] = std::sqrt(re * re + im * im);
  }
}

}  // namespace

const KernelTable* NeonKernels() {
  static const KernelTable table{Isa::kNeon, "neon", Dot,  Axpy, GemmNN,
                                 GemmNT,     GemmTN, CMul, CAbs};
  return &table;
}

}  // namespace eegvit::simd
