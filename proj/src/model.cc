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


#include "eegvit/model.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>

#include "eegvit/error.h"
#include "eegvit/rng.h"

namespace eegvit {
namespace {

constexpr double kLayerNormEps = 1e-5;
constexpr double kInitStd = 0.02;

void AddRowVector(Tensor& m, const Tensor& bias) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double* row = m.row(r);
    for (std::size_t c = 0; c < m.cols(); ++c) row[c] += bias.data[c];
  }
}

void AccumulateColumnSums(const Tensor& m, Tensor& out) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const double* row = m.row(r);
    for (std::size_t c = 0; c < m.cols(); ++c) out.data[c] += row[c];
  }
}

Tensor ExtractColumns(const Tensor& m, std::size_t first, std::size_t count) {
  Tensor out = Tensor::Matrix(m.rows(), count);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::memcpy(out.row(r), m.row(r) + first, count * sizeof(double));
  }
  return out;
}

void ScatterColumns(const Tensor& part, std::size_t first, Tensor& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::memcpy(m.row(r) + first, part.row(r), part.cols() * sizeof(double));
  }
}

void AddInPlace(Tensor& a, const Tensor& b) {
  simd::Active().axpy(1.0, b.data.data(), a.data.data(), a.size());
}

void MultiplyInPlace(Tensor& a, const Tensor& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a.data[i] *= b.data[i];
}

Tensor LayerNormForward(const Tensor& x, const Tensor& scale, const Tensor& shift,
                        LayerNormCache* cache) {
  const std::size_t n = x.rows(), d = x.cols();
  Tensor y = Tensor::Matrix(n, d);
  LayerNormCache local;
  LayerNormCache& c = cache ? *cache : local;
  c.xhat = Tensor::Matrix(n, d);
  c.inv_std.assign(n, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    const double* xr = x.row(r);
    double mean = 0.0;
    for (std::size_t j = 0; j < d; ++j) mean += xr[j];
    mean /= static_cast<double>(d);
    double var = 0.0;
    for (std::size_t j = 0; j < d; ++j) var += (xr[j] - mean) * (xr[j] - mean);
    var /= static_cast<double>(d);
    const double inv = 1.0 / std::sqrt(var + kLayerNormEps);
    c.inv_std[r] = inv;
    double* hr = c.xhat.row(r);
    double* yr = y.row(r);
    for (std::size_t j = 0; j < d; ++j) {
      hr[j] = (xr[j] - mean) * inv;
      yr[j] = hr[j] * scale.data[j] + shift.data[j];
    }
  }
  return y;
}

// Returns dL/dx and accumulates the scale/shift gradients.
Tensor LayerNormBackward(const Tensor& dy, const LayerNormCache& c, const Tensor& scale,
                         Tensor& d_scale, Tensor& d_shift) {
  const std::size_t n = dy.rows(), d = dy.cols();
  Tensor dx = Tensor::Matrix(n, d);
  std::vector<double> dxhat(d);
  for (std::size_t r = 0; r < n; ++r) {
    const double* dyr = dy.row(r);
    const double* hr = c.xhat.row(r);
    double mean_dxhat = 0.0, mean_dxhat_xhat = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      d_scale.data[j] += dyr[j] * hr[j];
      d_shift.data[j] += dyr[j];
      dxhat[j] = dyr[j] * scale.data[j];
      mean_dxhat += dxhat[j];
      mean_dxhat_xhat += dxhat[j] * hr[j];
    }
    mean_dxhat /= static_cast<double>(d);
    mean_dxhat_xhat /= static_cast<double>(d);
    double* dxr = dx.row(r);
    for (std::size_t j = 0; j < d; ++j) {
      dxr[j] = c.inv_std[r] * (dxhat[j] - mean_dxhat - hr[j] * mean_dxhat_xhat);
    }
  }
  return dx;
}

// tanh approximation of GELU.
constexpr double kGeluC = 0.7978845608028654;  // sqrt(2 / pi)
constexpr double kGeluA = 0.044715;

double Gelu(double x) {
  return 0.5 * x * (1.0 + std::tanh(kGeluC * (x + kGeluA * x * x * x)));
}

double GeluDerivative(double x) {
  const double t = std::tanh(kGeluC * (x + kGeluA * x * x * x));
  return 0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * kGeluC * (1.0 + 3.0 * kGeluA * x * x);
}

void SoftmaxRowsInPlace(Tensor& s) {
  for (std::size_t r = 0; r < s.rows(); ++r) {
    double* row = s.row(r);
    const double mx = *std::max_element(row, row + s.cols());
    double sum = 0.0;
    for (std::size_t j = 0; j < s.cols(); ++j) {
      row[j] = std::exp(row[j] - mx);
      sum += row[j];
    }
    const double inv = 1.0 / sum;
    for (std::size_t j = 0; j < s.cols(); ++j) row[j] *= inv;
  }
}

Tensor DropoutMask(std::size_t rows, std::size_t cols, double rate, Rng& rng) {
  Tensor mask = Tensor::Matrix(rows, cols);
  const double keep_scale = 1.0 / (1.0 - rate);
  for (double& m : mask.data) m = rng.Uniform() < rate ? 0.0 : keep_scale;
  return mask;
}

// Attention on normalized tokens h; fills the attention part of the cache.
Tensor AttentionForward(const Tensor& h, const LayerParams& p, std::size_t n_heads,
                        LayerCache& c) {
  const std::size_t n = h.rows(), d = h.cols();
  const std::size_t dh = d / n_heads;
  const std::size_t kk = p.proj_e.rows();
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

  c.q = Tensor::Matrix(n, d);
  c.k = Tensor::Matrix(n, d);
  c.v = Tensor::Matrix(n, d);
  MatMul(h, p.wq, c.q);
  MatMul(h, p.wk, c.k);
  MatMul(h, p.wv, c.v);
  AddRowVector(c.q, p.bq);
  AddRowVector(c.k, p.bk);
  AddRowVector(c.v, p.bv);

  c.kp = Tensor::Matrix(kk, d);
  c.vp = Tensor::Matrix(kk, d);
  MatMul(p.proj_e, c.k, c.kp);
  MatMul(p.proj_f, c.v, c.vp);

  c.concat = Tensor::Matrix(n, d);
  c.attention.assign(n_heads, Tensor());
  Tensor head_out = Tensor::Matrix(n, dh);
  for (std::size_t hd = 0; hd < n_heads; ++hd) {
    const Tensor qh = ExtractColumns(c.q, hd * dh, dh);
    const Tensor kh = ExtractColumns(c.kp, hd * dh, dh);
    const Tensor vh = ExtractColumns(c.vp, hd * dh, dh);
    Tensor scores = Tensor::Matrix(n, kk);
    MatMulNT(qh, kh, scores);
    for (double& s : scores.data) s *= scale;
    SoftmaxRowsInPlace(scores);
    MatMul(scores, vh, head_out);
    ScatterColumns(head_out, hd * dh, c.concat);
    c.attention[hd] = std::move(scores);
  }

  Tensor out = Tensor::Matrix(n, d);
  MatMul(c.concat, p.wo, out);
  AddRowVector(out, p.bo);
  return out;
}

// Backward of AttentionForward. Returns dL/dh.
Tensor AttentionBackward(const Tensor& d_out, const Tensor& h, const LayerParams& p,
                         std::size_t n_heads, const LayerCache& c, LayerParams& g) {
  const std::size_t n = h.rows(), d = h.cols();
  const std::size_t dh = d / n_heads;
  const std::size_t kk = p.proj_e.rows();
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

  MatMulTN(c.concat, d_out, g.wo, true);
  AccumulateColumnSums(d_out, g.bo);
  Tensor d_concat = Tensor::Matrix(n, d);
  MatMulNT(d_out, p.wo, d_concat);

  Tensor dq = Tensor::Matrix(n, d);
  Tensor dkp = Tensor::Matrix(kk, d);
  Tensor dvp = Tensor::Matrix(kk, d);
  Tensor d_attn = Tensor::Matrix(n, kk);
  Tensor dvh = Tensor::Matrix(kk, dh);
  Tensor dqh = Tensor::Matrix(n, dh);
  Tensor dkh = Tensor::Matrix(kk, dh);
  for (std::size_t hd = 0; hd < n_heads; ++hd) {
    const Tensor& a = c.attention[hd];
    const Tensor d_head = ExtractColumns(d_concat, hd * dh, dh);
    const Tensor qh = ExtractColumns(c.q, hd * dh, dh);
    const Tensor kh = ExtractColumns(c.kp, hd * dh, dh);
    const Tensor vh = ExtractColumns(c.vp, hd * dh, dh);

    MatMulNT(d_head, vh, d_attn);
    MatMulTN(a, d_head, dvh);
    // Softmax backward, then the 1/sqrt(d_h) of the scores.
    for (std::size_t r = 0; r < n; ++r) {
      const double* ar = a.row(r);
      double* dr = d_attn.row(r);
      double dot = 0.0;
      for (std::size_t j = 0; j < kk; ++j) dot += dr[j] * ar[j];
      for (std::size_t j = 0; j < kk; ++j) dr[j] = ar[j] * (dr[j] - dot) * scale;
    }
    MatMul(d_attn, kh, dqh);
    MatMulTN(d_attn, qh, dkh);
    ScatterColumns(dqh, hd * dh, dq);
    ScatterColumns(dkh, hd * dh, dkp);
    ScatterColumns(dvh, hd * dh, dvp);
  }

  // kp = E k, vp = F v.
  MatMulNT(dkp, c.k, g.proj_e, true);
  MatMulNT(dvp, c.v, g.proj_f, true);
  Tensor dk = Tensor::Matrix(n, d);
  Tensor dv = Tensor::Matrix(n, d);
  MatMulTN(p.proj_e, dkp, dk);
  MatMulTN(p.proj_f, dvp, dv);

  MatMulTN(h, dq, g.wq, true);
  MatMulTN(h, dk, g.wk, true);
  MatMulTN(h, dv, g.wv, true);
  AccumulateColumnSums(dq, g.bq);
  AccumulateColumnSums(dk, g.bk);
  AccumulateColumnSums(dv, g.bv);

  Tensor dh_out = Tensor::Matrix(n, d);
  MatMulNT(dq, p.wq, dh_out);
  MatMulNT(dk, p.wk, dh_out, true);
  MatMulNT(dv, p.wv, dh_out, true);
  return dh_out;
}

void CheckFinite(const Tensor& t, const char* what) {
  for (double v : t.data) {
    if (!std::isfinite(v)) throw Error(ErrorKind::kNonFinite, what);
  }
}

template <typename Params, typename Fn>
void VisitTensors(Params& p, Fn&& fn) {
  fn("patch_w", p.patch_w);
  fn("patch_b", p.patch_b);
  fn("channel_emb", p.channel_emb);
  fn("pos_emb", p.pos_emb);
  fn("cls_token", p.cls_token);
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    auto& L = p.layers[l];
    const std::string pre = "layer" + std::to_string(l) + ".";
    fn(pre + "ln1_scale", L.ln1_scale);
    fn(pre + "ln1_shift", L.ln1_shift);
    fn(pre + "wq", L.wq);
    fn(pre + "bq", L.bq);
    fn(pre + "wk", L.wk);
    fn(pre + "bk", L.bk);
    fn(pre + "wv", L.wv);
    fn(pre + "bv", L.bv);
    fn(pre + "proj_e", L.proj_e);
    fn(pre + "proj_f", L.proj_f);
    fn(pre + "wo", L.wo);
    fn(pre + "bo", L.bo);
    fn(pre + "ln2_scale", L.ln2_scale);
    fn(pre + "ln2_shift", L.ln2_shift);
    fn(pre + "w1", L.w1);
    fn(pre + "b1", L.b1);
    fn(pre + "w2", L.w2);
    fn(pre + "b2", L.b2);
  }
  fn("final_ln_scale", p.final_ln_scale);
  fn("final_ln_shift", p.final_ln_shift);
  fn("head_w", p.head_w);
  fn("head_b", p.head_b);
}

}  // namespace

std::string_view HeadKindName(HeadKind head) {
  return head == HeadKind::kClassify4 ? "classify4" : "regress2";
}

void ModelConfig::Validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::kBadConfig, msg); };
  if (patch_size == 0 || image_h == 0 || image_w == 0) fail("zero image or patch size");
  if (image_h % patch_size != 0 || image_w % patch_size != 0) {
    fail("image dims must be divisible by patch_size");
  }
  if (embed_dim == 0 || n_heads == 0 || embed_dim % n_heads != 0) {
    fail("embed_dim must be a positive multiple of n_heads");
  }
  if (depth == 0 || n_channels == 0 || mlp_hidden == 0) fail("zero depth/channels/mlp");
  if (linformer_k == 0 || linformer_k > n_tokens()) {
    fail("linformer_k must be in 1..n_tokens (" + std::to_string(n_tokens()) + ")");
  }
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) fail("dropout_rate must be in [0, 1)");
}

ModelConfig ModelConfig::Small(std::size_t n_channels, HeadKind head) {
  ModelConfig c;
  c.image_h = 64;
  c.image_w = 64;
  c.patch_size = 8;
  c.embed_dim = 32;
  c.depth = 2;
  c.n_heads = 2;
  c.linformer_k = 16;
  c.mlp_hidden = 64;
  c.n_channels = n_channels;
  c.head = head;
  return c;
}

void ModelParams::ForEach(const std::function<void(const std::string&, Tensor&)>& fn) {
  VisitTensors(*this, fn);
}

void ModelParams::ForEach(
    const std::function<void(const std::string&, const Tensor&)>& fn) const {
  VisitTensors(*this, fn);
}

std::size_t ModelParams::ParameterCount() const {
  std::size_t total = 0;
  ForEach([&](const std::string&, const Tensor& t) { total += t.size(); });
  return total;
}

std::size_t ParameterCount(const ModelConfig& c) {
  const std::size_t d = c.embed_dim, h = c.mlp_hidden;
  const std::size_t per_layer = 2 * d + 3 * (d * d + d) + 2 * c.linformer_k * c.n_tokens() +
                                (d * d + d) + 2 * d + (d * h + h) + (h * d + d);
  return c.patch_dim() * d + d + c.n_channels * d + c.patches_per_channel() * d + d +
         c.depth * per_layer + 2 * d + d * c.output_dim() + c.output_dim();
}

ModelParams ZeroParams(const ModelConfig& c) {
  c.Validate();
  const std::size_t d = c.embed_dim, h = c.mlp_hidden;
  ModelParams p;
  p.patch_w = Tensor::Matrix(c.patch_dim(), d);
  p.patch_b = Tensor::Vector(d);
  p.channel_emb = Tensor::Matrix(c.n_channels, d);
  p.pos_emb = Tensor::Matrix(c.patches_per_channel(), d);
  p.cls_token = Tensor::Vector(d);
  p.layers.resize(c.depth);
  for (LayerParams& L : p.layers) {
    L.ln1_scale = Tensor::Vector(d);
    L.ln1_shift = Tensor::Vector(d);
    L.wq = Tensor::Matrix(d, d);
    L.bq = Tensor::Vector(d);
    L.wk = Tensor::Matrix(d, d);
    L.bk = Tensor::Vector(d);
    L.wv = Tensor::Matrix(d, d);
    L.bv = Tensor::Vector(d);
    L.proj_e = Tensor::Matrix(c.linformer_k, c.n_tokens());
    L.proj_f = Tensor::Matrix(c.linformer_k, c.n_tokens());
    L.wo = Tensor::Matrix(d, d);
    L.bo = Tensor::Vector(d);
    L.ln2_scale = Tensor::Vector(d);
    L.ln2_shift = Tensor::Vector(d);
    L.w1 = Tensor::Matrix(d, h);
    L.b1 = Tensor::Vector(h);
    L.w2 = Tensor::Matrix(h, d);
    L.b2 = Tensor::Vector(d);
  }
  p.final_ln_scale = Tensor::Vector(d);
  p.final_ln_shift = Tensor::Vector(d);
  p.head_w = Tensor::Matrix(d, c.output_dim());
  p.head_b = Tensor::Vector(c.output_dim());
  return p;
}

ModelParams InitParams(const ModelConfig& config, std::uint64_t seed) {
  ModelParams p = ZeroParams(config);
  Rng rng(seed);
  p.ForEach([&](const std::string& name, Tensor& t) {
    const std::string leaf = name.substr(name.find_last_of('.') + 1);
    if (leaf.find("_scale") != std::string::npos) {
      t.Fill(1.0);
    } else if (leaf.find("_shift") != std::string::npos || leaf == "patch_b" ||
               leaf == "head_b" || (leaf.size() == 2 && leaf[0] == 'b')) {
      t.Fill(0.0);
    } else {
      for (double& v : t.data) v = rng.TruncatedNormal(kInitStd);
    }
  });
  return p;
}

Tensor Patchify(std::span<const double> image, std::size_t n_channels, std::size_t height,
                std::size_t width, std::size_t patch_size) {
  if (patch_size == 0 || height % patch_size != 0 || width % patch_size != 0) {
    throw Error(ErrorKind::kBadShape, "image dims must be divisible by the patch size");
  }
  if (image.size() != n_channels * height * width) {
    throw Error(ErrorKind::kBadShape, "image buffer does not match [C x H x W]");
  }
  const std::size_t rows = height / patch_size, cols = width / patch_size;
  Tensor tokens = Tensor::Matrix(n_channels * rows * cols, patch_size * patch_size);
  std::size_t t = 0;
  for (std::size_t c = 0; c < n_channels; ++c) {
    const double* plane = image.data() + c * height * width;
    for (std::size_t pr = 0; pr < rows; ++pr) {
      for (std::size_t pc = 0; pc < cols; ++pc, ++t) {
        double* out = tokens.row(t);
        for (std::size_t y = 0; y < patch_size; ++y) {
          const double* src = plane + (pr * patch_size + y) * width + pc * patch_size;
          std::memcpy(out + y * patch_size, src, patch_size * sizeof(double));
        }
      }
    }
  }
  return tokens;
}

Tensor LinformerAttention(const Tensor& x, const LayerParams& layer, std::size_t n_heads,
                          std::vector<Tensor>* attention_out) {
  if (x.rank() != 2 || x.cols() != layer.wq.rows() || x.rows() != layer.proj_e.cols() ||
      n_heads == 0 || x.cols() % n_heads != 0) {
    throw Error(ErrorKind::kBadShape, "attention input does not match layer shapes");
  }
  LayerCache cache;
  Tensor out = AttentionForward(x, layer, n_heads, cache);
  if (attention_out) *attention_out = std::move(cache.attention);
  return out;
}

ForwardResult Forward(const Batch& batch, const ModelParams& params, const ModelConfig& cfg,
                      const ForwardOptions& options) {
  cfg.Validate();
  const std::size_t d = cfg.embed_dim;
  const std::size_t n_tok = cfg.n_tokens();
  const std::size_t per_channel = cfg.patches_per_channel();
  const std::size_t image_size = cfg.n_channels * cfg.image_h * cfg.image_w;
  if (batch.size() == 0) throw Error(ErrorKind::kBadShape, "empty batch");

  ForwardResult result;
  result.outputs = Tensor::Matrix(batch.size(), cfg.output_dim());
  if (options.keep_cache) result.caches.resize(batch.size());
  const bool dropout = options.train_mode && cfg.dropout_rate > 0.0;

  for (std::size_t b = 0; b < batch.size(); ++b) {
    if (batch.images[b].size() != image_size) {
      throw Error(ErrorKind::kBadShape, "image " + std::to_string(b) +
                                            " does not match the model input shape");
    }
    for (double v : batch.images[b]) {
      if (!std::isfinite(v)) throw Error(ErrorKind::kNonFinite, "input pixel");
      if (v < 0.0 || v > 1.0) throw Error(ErrorKind::kOutOfRange, "input pixel outside [0, 1]");
    }
    SampleCache local;
    SampleCache& sc = options.keep_cache ? result.caches[b] : local;
    Rng rng(Rng::Mix(options.dropout_seed, b));

    sc.patches = Patchify(batch.images[b], cfg.n_channels, cfg.image_h, cfg.image_w,
                          cfg.patch_size);
    Tensor embedded = Tensor::Matrix(cfg.n_patch_tokens(), d);
    MatMul(sc.patches, params.patch_w, embedded);
    Tensor x = Tensor::Matrix(n_tok, d);
    std::memcpy(x.row(0), params.cls_token.data.data(), d * sizeof(double));
    for (std::size_t t = 0; t < cfg.n_patch_tokens(); ++t) {
      const double* e = embedded.row(t);
      const double* ch = params.channel_emb.row(t / per_channel);
      const double* pos = params.pos_emb.row(t % per_channel);
      double* xr = x.row(t + 1);
      for (std::size_t j = 0; j < d; ++j) {
        xr[j] = e[j] + params.patch_b.data[j] + ch[j] + pos[j];
      }
    }

    sc.layers.resize(cfg.depth);
    for (std::size_t l = 0; l < cfg.depth; ++l) {
      const LayerParams& L = params.layers[l];
      LayerCache& lc = sc.layers[l];
      lc.h1 = LayerNormForward(x, L.ln1_scale, L.ln1_shift, &lc.ln1);
      Tensor attn = AttentionForward(lc.h1, L, cfg.n_heads, lc);
      if (dropout) {
        lc.mask1 = DropoutMask(n_tok, d, cfg.dropout_rate, rng);
        MultiplyInPlace(attn, lc.mask1);
      }
      AddInPlace(x, attn);

      lc.h2 = LayerNormForward(x, L.ln2_scale, L.ln2_shift, &lc.ln2);
      lc.z1 = Tensor::Matrix(n_tok, cfg.mlp_hidden);
      MatMul(lc.h2, L.w1, lc.z1);
      AddRowVector(lc.z1, L.b1);
      lc.g = lc.z1;
      for (double& v : lc.g.data) v = Gelu(v);
      Tensor m = Tensor::Matrix(n_tok, d);
      MatMul(lc.g, L.w2, m);
      AddRowVector(m, L.b2);
      if (dropout) {
        lc.mask2 = DropoutMask(n_tok, d, cfg.dropout_rate, rng);
        MultiplyInPlace(m, lc.mask2);
      }
      AddInPlace(x, m);
      if (!options.keep_cache) lc = LayerCache();
    }

    Tensor cls = Tensor::Matrix(1, d);
    std::memcpy(cls.row(0), x.row(0), d * sizeof(double));
    sc.pooled = LayerNormForward(cls, params.final_ln_scale, params.final_ln_shift,
                                 &sc.final_ln);
    Tensor out = Tensor::Matrix(1, cfg.output_dim());
    MatMul(sc.pooled, params.head_w, out);
    for (std::size_t o = 0; o < cfg.output_dim(); ++o) {
      result.outputs(b, o) = out.data[o] + params.head_b.data[o];
    }
  }
  CheckFinite(result.outputs, "model outputs overflowed");
  return result;
}

ModelParams Backward(const ForwardResult& forward, const Tensor& d_outputs,
                     const ModelParams& params, const ModelConfig& cfg) {
  if (forward.caches.size() != forward.outputs.rows()) {
    throw Error(ErrorKind::kBadShape, "backward needs a forward pass with keep_cache");
  }
  if (!d_outputs.SameShape(forward.outputs)) {
    throw Error(ErrorKind::kBadShape, "output gradient shape mismatch");
  }
  const std::size_t d = cfg.embed_dim;
  const std::size_t n_tok = cfg.n_tokens();
  const std::size_t per_channel = cfg.patches_per_channel();
  ModelParams g = ZeroParams(cfg);

  for (std::size_t b = 0; b < forward.caches.size(); ++b) {
    const SampleCache& sc = forward.caches[b];
    Tensor d_out = Tensor::Matrix(1, cfg.output_dim());
    std::memcpy(d_out.row(0), d_outputs.row(b), cfg.output_dim() * sizeof(double));

    MatMulTN(sc.pooled, d_out, g.head_w, true);
    AccumulateColumnSums(d_out, g.head_b);
    Tensor d_pooled = Tensor::Matrix(1, d);
    MatMulNT(d_out, params.head_w, d_pooled);
    const Tensor d_cls = LayerNormBackward(d_pooled, sc.final_ln, params.final_ln_scale,
                                           g.final_ln_scale, g.final_ln_shift);
    Tensor dx = Tensor::Matrix(n_tok, d);
    std::memcpy(dx.row(0), d_cls.row(0), d * sizeof(double));

    for (std::size_t l = cfg.depth; l-- > 0;) {
      const LayerParams& L = params.layers[l];
      const LayerCache& lc = sc.layers[l];
      LayerParams& G = g.layers[l];

      Tensor dm = dx;
      if (lc.mask2.size() != 0) MultiplyInPlace(dm, lc.mask2);
      MatMulTN(lc.g, dm, G.w2, true);
      AccumulateColumnSums(dm, G.b2);
      Tensor dz = Tensor::Matrix(n_tok, cfg.mlp_hidden);
      MatMulNT(dm, L.w2, dz);
      for (std::size_t i = 0; i < dz.size(); ++i) dz.data[i] *= GeluDerivative(lc.z1.data[i]);
      MatMulTN(lc.h2, dz, G.w1, true);
      AccumulateColumnSums(dz, G.b1);
      Tensor dh2 = Tensor::Matrix(n_tok, d);
      MatMulNT(dz, L.w1, dh2);
      AddInPlace(dx, LayerNormBackward(dh2, lc.ln2, L.ln2_scale, G.ln2_scale, G.ln2_shift));

      Tensor da = dx;
      if (lc.mask1.size() != 0) MultiplyInPlace(da, lc.mask1);
      const Tensor dh1 = AttentionBackward(da, lc.h1, L, cfg.n_heads, lc, G);
      AddInPlace(dx, LayerNormBackward(dh1, lc.ln1, L.ln1_scale, G.ln1_scale, G.ln1_shift));
    }

    for (std::size_t j = 0; j < d; ++j) g.cls_token.data[j] += dx(0, j);
    Tensor d_tokens = Tensor::Matrix(cfg.n_patch_tokens(), d);
    std::memcpy(d_tokens.data.data(), dx.row(1), cfg.n_patch_tokens() * d * sizeof(double));
    MatMulTN(sc.patches, d_tokens, g.patch_w, true);
    AccumulateColumnSums(d_tokens, g.patch_b);
    for (std::size_t t = 0; t < cfg.n_patch_tokens(); ++t) {
      const double* dr = d_tokens.row(t);
      double* ch = g.channel_emb.row(t / per_channel);
      double* pos = g.pos_emb.row(t % per_channel);
      for (std::size_t j = 0; j < d; ++j) {
        ch[j] += dr[j];
        pos[j] += dr[j];
      }
    }
  }
  g.ForEach([](const std::string& name, const Tensor& t) {
    for (double v : t.data) {
      if (!std::isfinite(v)) throw Error(ErrorKind::kNonFinite, "gradient of " + name);
    }
  });
  return g;
}

}  // namespace eegvit
