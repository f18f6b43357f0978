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


#include <cstdlib>
#include <string_view>

#include "eegvit/simd.h"

namespace eegvit::simd {

#if !(defined(__x86_64__) || defined(_M_X64))
const KernelTable* Avx2Kernels() { return nullptr; }
#endif
#if !(defined(__aarch64__) || defined(_M_ARM64))
const KernelTable* NeonKernels() { return nullptr; }
#endif

const KernelTable* ByName(std::string_view name) {
  if (name == "scalar") return &ScalarKernels();
  if (name == "avx2") return Avx2Kernels();
  if (name == "neon") return NeonKernels();
  return nullptr;
}

namespace {

const KernelTable& Select() {
  if (const char* forced = std::getenv("EEGVIT_SIMD")) {
    if (const KernelTable* table = ByName(forced)) return *table;
  }
  if (const KernelTable* table = Avx2Kernels()) return *table;
  if (const KernelTable* table = NeonKernels()) return *table;
  return ScalarKernels();
}

}  // namespace

const KernelTable& Active() {
  static const KernelTable& table = Select();
  return table;
}

}  // namespace eegvit::simd
