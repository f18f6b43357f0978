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


#ifndef EEGVIT_TENSOR_H_
#define EEGVIT_TENSOR_H_

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <vector>

#include "eegvit/simd.h"

namespace eegvit {

// Dense row-major array of doubles. Rank 1 tensors act as a single row when
// used as matrices.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;

  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> dims, double fill = 0.0)
      : shape(std::move(dims)),
        data(std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                             std::multiplies<>()),
             fill) {}

  static Tensor Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) {
    return Tensor({rows, cols}, fill);
  }
  static Tensor Vector(std::size_t n, double fill = 0.0) {
    return Tensor({n}, fill);
  }

  std::size_t size() const { return data.size(); }
  std::size_t rank() const { return shape.size(); }
  std::size_t rows() const { return shape.size() >= 2 ? shape[0] : 1; }
  std::size_t cols() const { return shape.empty() ? 0 : shape.back(); }

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols() + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data[r * cols() + c];
  }
  double* row(std::size_t r) { return data.data() + r * cols(); }
  const double* row(std::size_t r) const { return data.data() + r * cols(); }

  std::span<double> span() { return data; }
  std::span<const double> span() const { return data; }

  void Fill(double v) { std::fill(data.begin(), data.end(), v); }
  bool SameShape(const Tensor& other) const { return shape == other.shape; }
};

// Thin wrappers over the active kernel table. Shapes are taken from the
// operands; c must already have the result shape.
inline void MatMul(const Tensor& a, const Tensor& b, Tensor& c,
                   bool accumulate = false) {
  simd::Active().gemm_nn(a.data.data(), b.data.data(), c.data.data(), a.rows(),
                         a.cols(), b.cols(), accumulate);
}

// c = a * b^T
inline void MatMulNT(const Tensor& a, const Tensor& b, Tensor& c,
                     bool accumulate = false) {
  simd::Active().gemm_nt(a.data.data(), b.data.data(), c.data.data(), a.rows(),
                         a.cols(), b.rows(), accumulate);
}

// c = a^T * b
inline void MatMulTN(const Tensor& a, const Tensor& b, Tensor& c,
                     bool accumulate = false) {
  simd::Active().gemm_tn(a.data.data(), b.data.data(), c.data.data(), a.cols(),
                         a.rows(), b.cols(), accumulate);
}

}  // namespace eegvit

#endif  // EEGVIT_TENSOR_H_
