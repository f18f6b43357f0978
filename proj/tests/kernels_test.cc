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


#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <vector>

#include "eegvit/simd.h"
#include "eegvit/tensor.h"

namespace eegvit::simd {
namespace {

std::vector<double> Random(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> d;
  std::vector<double> v(n);
  for (double& x : v) x = d(gen);
  return v;
}

// Every compiled-in, CPU-supported variant against the scalar reference.
std::vector<const KernelTable*> Variants() {
  std::vector<const KernelTable*> out;
  if (const KernelTable* t = Avx2Kernels()) out.push_back(t);
  if (const KernelTable* t = NeonKernels()) out.push_back(t);
  return out;
}

TEST(KernelsTest, ScalarAlwaysAvailable) {
  EXPECT_EQ(ScalarKernels().isa, Isa::kScalar);
  EXPECT_NE(ByName("scalar"), nullptr);
  EXPECT_EQ(ByName("no-such-isa"), nullptr);
}

TEST(KernelsTest, ActiveHonoursOverride) {
  const char* forced = std::getenv("EEGVIT_SIMD");
  if (forced != nullptr && *forced != '\0') {
    EXPECT_STREQ(Active().name, forced);
  } else if (Avx2Kernels() != nullptr) {
    EXPECT_EQ(Active().isa, Isa::kAvx2);
  }
}

TEST(KernelsTest, DotAndAxpyMatchScalar) {
  const KernelTable& ref = ScalarKernels();
  for (const KernelTable* k : Variants()) {
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 17u, 64u, 1001u}) {
      const auto a = Random(n, 1 + n), b = Random(n, 2 + n);
      const double r = ref.dot(a.data(), b.data(), n);
      EXPECT_NEAR(k->dot(a.data(), b.data(), n), r, 1e-12 * (1.0 + std::abs(r))) << k->name << n;
      auto y1 = b, y2 = b;
      ref.axpy(0.37, a.data(), y1.data(), n);
      k->axpy(0.37, a.data(), y2.data(), n);
      for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(y1[i], y2[i], 1e-14);
    }
  }
}

TEST(KernelsTest, GemmsMatchScalar) {
  const KernelTable& ref = ScalarKernels();
  for (const KernelTable* k : Variants()) {
    for (auto [m, kk, n] : {std::tuple{1u, 1u, 1u}, {3u, 5u, 7u}, {16u, 9u, 13u}, {33u, 64u, 5u}}) {
      const auto a = Random(m * kk, 3), b = Random(kk * n, 4), c0 = Random(m * n, 5);
      for (bool acc : {false, true}) {
        using Fn = void (*)(const double*, const double*, double*, std::size_t, std::size_t,
                            std::size_t, bool);
        for (auto [fr, fk] : {std::pair<Fn, Fn>{ref.gemm_nn, k->gemm_nn},
                              {ref.gemm_nt, k->gemm_nt},
                              {ref.gemm_tn, k->gemm_tn}}) {
          auto c1 = c0, c2 = c0;
          fr(a.data(), b.data(), c1.data(), m, kk, n, acc);
          fk(a.data(), b.data(), c2.data(), m, kk, n, acc);
          for (std::size_t i = 0; i < c1.size(); ++i) EXPECT_NEAR(c1[i], c2[i], 1e-12);
        }
      }
    }
  }
}

TEST(KernelsTest, ComplexKernelsMatchScalar) {
  const KernelTable& ref = ScalarKernels();
  for (const KernelTable* k : Variants()) {
    for (std::size_t n : {1u, 2u, 3u, 5u, 64u, 129u}) {
      const auto re = Random(2 * n, 7), im = Random(2 * n, 8);
      std::vector<cplx> a(n), b(n);
      for (std::size_t i = 0; i < n; ++i) {
        a[i] = {re[i], im[i]};
        b[i] = {re[n + i], im[n + i]};
      }
      std::vector<cplx> p1(n), p2(n);
      ref.cmul(a.data(), b.data(), p1.data(), n);
      k->cmul(a.data(), b.data(), p2.data(), n);
      std::vector<double> m1(n), m2(n);
      ref.cabs(a.data(), m1.data(), n);
      k->cabs(a.data(), m2.data(), n);
      for (std::size_t i = 0; i < n; ++i) {
        EXPECT_NEAR(std::abs(p1[i] - p2[i]), 0.0, 1e-13);
        EXPECT_NEAR(m1[i], m2[i], 1e-14);
      }
    }
  }
}

TEST(KernelsTest, ModulusOracle) {
  for (const KernelTable* k : std::vector<const KernelTable*>{&ScalarKernels(), Avx2Kernels()}) {
    if (k == nullptr) continue;
    const std::vector<cplx> a{{3, 4}, {0, 0}, {-1, 0}, {1e-3, -2e-3}};
    std::vector<double> m(a.size());
    k->cabs(a.data(), m.data(), a.size());
    EXPECT_DOUBLE_EQ(m[0], 5.0);
    EXPECT_EQ(m[1], 0.0);
    EXPECT_DOUBLE_EQ(m[2], 1.0);
    EXPECT_NEAR(m[3], std::sqrt(5e-6), 1e-18);
  }
}

TEST(KernelsTest, NanPropagatesInEveryVariant) {
  std::vector<double> a{1.0, NAN, 2.0, 3.0, 4.0};
  std::vector<double> zero(5, 0.0);
  EXPECT_TRUE(std::isnan(ScalarKernels().dot(a.data(), zero.data(), 5)));
  for (const KernelTable* k : Variants()) EXPECT_TRUE(std::isnan(k->dot(a.data(), zero.data(), 5)));
}

TEST(KernelsTest, TensorMatMulAgainstHandValues) {
  Tensor a = Tensor::Matrix(2, 3);
  Tensor b = Tensor::Matrix(3, 2);
  a.data = {1, 2, 3, 4, 5, 6};
  b.data = {7, 8, 9, 10, 11, 12};
  Tensor c = Tensor::Matrix(2, 2);
  MatMul(a, b, c);
  EXPECT_EQ(c.data, (std::vector<double>{58, 64, 139, 154}));
  Tensor bt = Tensor::Matrix(2, 3);
  bt.data = {7, 9, 11, 8, 10, 12};
  Tensor c2 = Tensor::Matrix(2, 2);
  MatMulNT(a, bt, c2);
  EXPECT_EQ(c2.data, c.data);
  Tensor at = Tensor::Matrix(3, 2);
  at.data = {1, 4, 2, 5, 3, 6};
  Tensor c3 = Tensor::Matrix(2, 2, 1.0);
  MatMulTN(at, b, c3, /*accumulate=*/true);
  EXPECT_EQ(c3.data, (std::vector<double>{59, 65, 140, 155}));
}

}  // namespace
}  // namespace eegvit::simd
