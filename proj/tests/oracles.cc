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


#include "oracles.h"

#include <cmath>
#include <numbers>
#include <random>

namespace eegvit::oracle {

std::vector<std::complex<double>> DirectCwt(std::span<const double> x,
                                            std::span<const double> frequencies_hz,
                                            double fs_hz, double omega0) {
  const std::size_t n = x.size();
  const double norm = std::pow(std::numbers::pi, -0.25);
  std::vector<std::complex<double>> out(frequencies_hz.size() * n);
  for (std::size_t si = 0; si < frequencies_hz.size(); ++si) {
    const double s = omega0 * fs_hz / (2.0 * std::numbers::pi * frequencies_hz[si]);
    for (std::size_t tau = 0; tau < n; ++tau) {
      std::complex<double> acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double t = (static_cast<double>(i) - static_cast<double>(tau)) / s;
        const std::complex<double> psi =
            norm * std::exp(-0.5 * t * t) * std::complex<double>(std::cos(omega0 * t),
                                                                 std::sin(omega0 * t));
        acc += x[i] * std::conj(psi);
      }
      out[si * n + tau] = acc / std::sqrt(s);
    }
  }
  return out;
}

std::vector<double> FullAttention(const std::vector<double>& x, std::size_t n, std::size_t d,
                                  const LayerParams& p, std::size_t n_heads) {
  auto affine = [&](const Tensor& w, const Tensor& b) {
    std::vector<double> y(n * d);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        double acc = b.data[j];
        for (std::size_t m = 0; m < d; ++m) acc += x[i * d + m] * w.data[m * d + j];
        y[i * d + j] = acc;
      }
    }
    return y;
  };
  const auto q = affine(p.wq, p.bq);
  const auto k = affine(p.wk, p.bk);
  const auto v = affine(p.wv, p.bv);
  const std::size_t dh = d / n_heads;
  std::vector<double> concat(n * d, 0.0);
  for (std::size_t h = 0; h < n_heads; ++h) {
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> s(n);
      double mx = -INFINITY;
      for (std::size_t j = 0; j < n; ++j) {
        double dot = 0.0;
        for (std::size_t c = 0; c < dh; ++c) dot += q[i * d + h * dh + c] * k[j * d + h * dh + c];
        s[j] = dot / std::sqrt(static_cast<double>(dh));
        mx = std::max(mx, s[j]);
      }
      double z = 0.0;
      for (double& e : s) z += (e = std::exp(e - mx));
      for (std::size_t c = 0; c < dh; ++c) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += s[j] / z * v[j * d + h * dh + c];
        concat[i * d + h * dh + c] = acc;
      }
    }
  }
  std::vector<double> out(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      double acc = p.bo.data[j];
      for (std::size_t m = 0; m < d; ++m) acc += concat[i * d + m] * p.wo.data[m * d + j];
      out[i * d + j] = acc;
    }
  }
  return out;
}

std::vector<double> VarianceShares(std::span<const Trial> trials) {
  const std::size_t c = trials.front().n_channels;
  std::vector<double> sumsq(c, 0.0);
  for (const Trial& t : trials) {
    for (std::size_t ch = 0; ch < c; ++ch) {
      double mean = 0.0;
      for (std::size_t i = 0; i < t.n_samples; ++i) mean += t.samples[ch * t.n_samples + i];
      mean /= static_cast<double>(t.n_samples);
      for (std::size_t i = 0; i < t.n_samples; ++i) {
        const double dev = t.samples[ch * t.n_samples + i] - mean;
        sumsq[ch] += dev * dev;
      }
    }
  }
  double total = 0.0;
  for (double s : sumsq) total += s;
  for (double& s : sumsq) s /= total;
  return sumsq;
}

GradCheckResult CheckGradients(const std::function<double(const ModelParams&)>& loss,
                               const ModelParams& params, const ModelParams& analytic,
                               double eps, double floor, std::size_t max_per_tensor) {
  GradCheckResult result;
  std::vector<std::pair<std::string, const Tensor*>> grads;
  analytic.ForEach([&](const std::string& name, const Tensor& t) { grads.emplace_back(name, &t); });
  ModelParams probe = params;
  std::size_t index = 0;
  probe.ForEach([&](const std::string& name, Tensor& t) {
    const Tensor& g = *grads[index++].second;
    const std::size_t n = t.size();
    const std::size_t stride =
        max_per_tensor == 0 || n <= max_per_tensor ? 1 : (n + max_per_tensor - 1) / max_per_tensor;
    for (std::size_t i = 0; i < n; i += stride) {
      const double saved = t.data[i];
      t.data[i] = saved + eps;
      const double up = loss(probe);
      t.data[i] = saved - eps;
      const double down = loss(probe);
      t.data[i] = saved;
      const double numeric = (up - down) / (2.0 * eps);
      const double rel =
          std::abs(numeric - g.data[i]) / std::max(std::abs(numeric) + std::abs(g.data[i]), floor);
      ++result.checked;
      if (rel > result.max_rel_error) {
        result.max_rel_error = rel;
        result.worst = name + "[" + std::to_string(i) + "]";
      }
    }
  });
  return result;
}

ModelConfig TinyConfig(HeadKind head) {
  ModelConfig c;
  c.image_h = 8;
  c.image_w = 8;
  c.patch_size = 4;
  c.embed_dim = 16;
  c.depth = 1;
  c.n_heads = 1;
  c.linformer_k = 3;
  c.n_channels = 1;
  c.mlp_hidden = 32;
  c.head = head;
  return c;
}

std::vector<double> RandomImage(std::size_t size, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(size);
  for (double& x : v) x = u(gen);
  return v;
}

}  // namespace eegvit::oracle
