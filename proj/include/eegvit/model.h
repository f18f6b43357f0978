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


#ifndef EEGVIT_MODEL_H_
#define EEGVIT_MODEL_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eegvit/tensor.h"

namespace eegvit {

enum class HeadKind : std::uint8_t { kClassify4 = 0, kRegress2 = 1 };

std::string_view HeadKindName(HeadKind head);

// Vision transformer over per-channel scaleogram rasters. Every channel is
// cut into patches; all patch tokens share one sequence, tagged with a learned
// channel embedding and a per-patch positional embedding, behind a learned
// class token. Attention is Linformer-style: keys and values are projected
// along the token axis to linformer_k rows.
struct ModelConfig {
  std::size_t image_h = 224;
  std::size_t image_w = 224;
  std::size_t patch_size = 16;
  std::size_t embed_dim = 128;
  std::size_t depth = 4;
  std::size_t n_heads = 4;
  std::size_t linformer_k = 64;
  std::size_t n_channels = 1;
  std::size_t mlp_hidden = 256;
  HeadKind head = HeadKind::kClassify4;
  double dropout_rate = 0.0;

  std::size_t patches_per_channel() const {
    return (image_h / patch_size) * (image_w / patch_size);
  }
  std::size_t patch_dim() const { return patch_size * patch_size; }
  std::size_t n_patch_tokens() const { return n_channels * patches_per_channel(); }
  // Sequence length including the class token.
  std::size_t n_tokens() const { return n_patch_tokens() + 1; }
  std::size_t head_dim() const { return embed_dim / n_heads; }
  std::size_t output_dim() const { return head == HeadKind::kClassify4 ? 4 : 2; }

  // Throws kBadConfig when a shape invariant fails.
  void Validate() const;

  // Desk-scale preset used by the synthetic experiments: 32x32 rasters,
  // 8x8 patches, width 32, two layers of two heads, k = 16.
  static ModelConfig Small(std::size_t n_channels, HeadKind head);

  bool operator==(const ModelConfig&) const = default;
};

struct LayerParams {
  Tensor ln1_scale, ln1_shift;     // [D]
  Tensor wq, bq, wk, bk, wv, bv;   // [D x D], [D]
  Tensor proj_e, proj_f;           // [k x n_tokens]
  Tensor wo, bo;                   // [D x D], [D]
  Tensor ln2_scale, ln2_shift;     // [D]
  Tensor w1, b1;                   // [D x H], [H]
  Tensor w2, b2;                   // [H x D], [D]
};

struct ModelParams {
  Tensor patch_w;      // [p^2 x D]
  Tensor patch_b;      // [D]
  Tensor channel_emb;  // [n_channels x D]
  Tensor pos_emb;      // [patches_per_channel x D]
  Tensor cls_token;    // [D]
  std::vector<LayerParams> layers;
  Tensor final_ln_scale, final_ln_shift;  // [D]
  Tensor head_w;  // [D x outputs]
  Tensor head_b;  // [outputs]

  // Visits every tensor in the fixed order used by checkpoints and the
  // optimizer.
  void ForEach(const std::function<void(const std::string&, Tensor&)>& fn);
  void ForEach(const std::function<void(const std::string&, const Tensor&)>& fn) const;

  std::size_t ParameterCount() const;
};

// All-zero tensors with the shapes implied by the config.
ModelParams ZeroParams(const ModelConfig& config);

// Truncated normal (std 0.02) weights, zero biases and shifts, unit
// layer-norm scales.
ModelParams InitParams(const ModelConfig& config, std::uint64_t seed);

// Closed-form parameter count for a config.
std::size_t ParameterCount(const ModelConfig& config);

// One mini-batch. Each image is [n_channels x H x W] with values in [0, 1].
struct Batch {
  std::vector<std::span<const double>> images;
  std::vector<int> classes;                    // Classify4 targets
  std::vector<std::array<double, 2>> values;   // Regress2 targets (v, a)

  std::size_t size() const { return images.size(); }
};

// Cuts [n_channels x H x W] into [n_tokens x p^2]: channel-major, then
// row-major patches, each patch flattened row-major.
Tensor Patchify(std::span<const double> image, std::size_t n_channels,
                std::size_t height, std::size_t width, std::size_t patch_size);

// Intermediate activations of one sample, kept for the backward pass.
struct LayerNormCache {
  Tensor xhat;
  std::vector<double> inv_std;
};

struct LayerCache {
  LayerNormCache ln1, ln2;
  Tensor h1, q, k, v, kp, vp, concat;
  std::vector<Tensor> attention;  // per head [n_tokens x k], rows sum to 1
  Tensor mask1, mask2;            // empty when dropout is off
  Tensor h2, z1, g;
};

struct SampleCache {
  Tensor patches;
  std::vector<LayerCache> layers;
  LayerNormCache final_ln;
  Tensor pooled;  // normalized class token [1 x D]
};

struct ForwardResult {
  Tensor outputs;  // [batch x outputs]
  std::vector<SampleCache> caches;  // empty unless requested
};

struct ForwardOptions {
  bool train_mode = false;  // enables dropout
  std::uint64_t dropout_seed = 0;
  bool keep_cache = false;
};

// Throws kBadShape on mismatched inputs and kNonFinite if activations
// overflow.
ForwardResult Forward(const Batch& batch, const ModelParams& params,
                      const ModelConfig& config, const ForwardOptions& options = {});

// Gradients of sum_b <d_outputs[b], outputs[b]> with respect to every
// parameter, from a forward pass run with keep_cache. The result has the
// same layout as ModelParams.
ModelParams Backward(const ForwardResult& forward, const Tensor& d_outputs,
                     const ModelParams& params, const ModelConfig& config);

// Linformer attention block on a single token matrix x [n_tokens x D]:
// per head softmax(Q (E K)^T / sqrt(d_h)) (F V), heads concatenated and
// projected by the output matrix. attention_out, when given, receives the
// per-head probability matrices.
Tensor LinformerAttention(const Tensor& x, const LayerParams& layer,
                          std::size_t n_heads,
                          std::vector<Tensor>* attention_out = nullptr);

}  // namespace eegvit

#endif  // EEGVIT_MODEL_H_
