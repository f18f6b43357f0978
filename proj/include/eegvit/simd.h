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


#ifndef EEGVIT_SIMD_H_
#define EEGVIT_SIMD_H_

#include <complex>
#include <cstddef>
#include <string_view>

// Data-parallel inner loops shared by the CWT and the transformer. Each
// instruction set provides a full KernelTable; the active table is picked
// once at startup from the CPU's capabilities and may be pinned with the
// EEGVIT_SIMD environment variable ("scalar", "avx2", "neon").
//
// All matrices are dense and row-major.
namespace eegvit::simd {

enum class Isa { kScalar, kAvx2, kNeon };

using cplx = std::complex<double>;

struct KernelTable {
  Isa isa;
  const char* name;

  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // c[m x n] (+)= a[m x k] * b[k x n]
  void (*gemm_nn)(const double* a, const double* b, double* c, std::size_t m,
                  std::size_t k, std::size_t n, bool accumulate);
  // c[m x n] (+)= a[m x k] * b[n x k]^T
  void (*gemm_nt)(const double* a, const double* b, double* c, std::size_t m,
                  std::size_t k, std::size_t n, bool accumulate);
  // c[m x n] (+)= a[k x m]^T * b[k x n]
  void (*gemm_tn)(const double* a, const double* b, double* c, std::size_t m,
                  std::size_t k, std::size_t n, bool accumulate);
  // out[i] = a[i] * b[i]
  void (*cmul)(const cplx* a, const cplx* b, cplx* out, std::size_t n);
  // out[i] = |a[i]|
  void (*cabs)(const cplx* a, double* out, std::size_t n);
};

const KernelTable& ScalarKernels();
// nullptr when the variant is not compiled in or the CPU lacks support.
const KernelTable* Avx2Kernels();
const KernelTable* NeonKernels();

// The table selected for this process.
const KernelTable& Active();

// Looks up a table by name; nullptr if unknown or unsupported here.
const KernelTable* ByName(std::string_view name);

}  // namespace eegvit::simd

#endif  // EEGVIT_SIMD_H_
