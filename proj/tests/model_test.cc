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

#include "eegvit/error.h"
#include "eegvit/model.h"
#include "eegvit/rng.h"
#include "oracles.h"

namespace eegvit {
namespace {

// Mean cross-entropy, computed from raw outputs.
double CeLoss(const Tensor& out, const std::vector<int>& y) {
  double total = 0;
  for (std::size_t b = 0; b < y.size(); ++b) {
    double mx = -INFINITY;
    for (std::size_t j = 0; j < out.cols(); ++j) mx = std::max(mx, out(b, j));
    double z = 0;
    for (std::size_t j = 0; j < out.cols(); ++j) z += std::exp(out(b, j) - mx);
    total += std::log(z) + mx - out(b, static_cast<std::size_t>(y[b]));
  }
  return total / static_cast<double>(y.size());
}

Batch MakeBatchOf(const std::vector<std::vector<double>>& images) {
  Batch b;
  for (const auto& im : images) b.images.emplace_back(im);
  return b;
}

TEST(PatchifyTest, TokenCounts) {
  ModelConfig c;
  EXPECT_EQ(c.n_patch_tokens(), 196u);
  EXPECT_EQ(c.patch_dim(), 256u);
  c.n_channels = 12;
  EXPECT_EQ(c.n_patch_tokens(), 2352u);
  EXPECT_EQ(c.n_tokens(), 2353u);

  const std::vector<double> half(224 * 224, 0.5);
  const Tensor t = Patchify(half, 1, 224, 224, 16);
  EXPECT_EQ(t.shape, (std::vector<std::size_t>{196, 256}));
  for (double v : t.data) EXPECT_EQ(v, 0.5);
}

TEST(PatchifyTest, Ordering) {
  // 2 channels of 4x4 with pixel value = channel*100 + row*10 + col.
  std::vector<double> img(32);
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t k = 0; k < 4; ++k) img[c * 16 + r * 4 + k] = c * 100 + r * 10 + k;
  const Tensor t = Patchify(img, 2, 4, 4, 2);
  ASSERT_EQ(t.shape, (std::vector<std::size_t>{8, 4}));
  EXPECT_EQ(std::vector<double>(t.row(1), t.row(1) + 4), (std::vector<double>{2, 3, 12, 13}));
  EXPECT_EQ(std::vector<double>(t.row(6), t.row(6) + 4),
            (std::vector<double>{120, 121, 130, 131}));
  EXPECT_THROW(Patchify(img, 2, 4, 4, 3), Error);
  EXPECT_THROW(Patchify(img, 1, 4, 4, 2), Error);
}

TEST(ParamCountTest, ClosedFormFromShapeTable) {
  for (ModelConfig c : {ModelConfig{}, ModelConfig::Small(4, HeadKind::kClassify4),
                        ModelConfig::Small(12, HeadKind::kRegress2),
                        oracle::TinyConfig(HeadKind::kClassify4)}) {
    const std::size_t D = c.embed_dim, H = c.mlp_hidden, p2 = c.patch_size * c.patch_size;
    const std::size_t P = (c.image_h / c.patch_size) * (c.image_w / c.patch_size);
    const std::size_t N = c.n_channels * P + 1, k = c.linformer_k;
    const std::size_t out = c.head == HeadKind::kClassify4 ? 4 : 2;
    const std::size_t layer = 2 * D + 3 * (D * D + D) + 2 * k * N + D * D + D + 2 * D +
                              D * H + H + H * D + D;
    const std::size_t expected =
        p2 * D + D + c.n_channels * D + P * D + D + c.depth * layer + 2 * D + D * out + out;
    EXPECT_EQ(ParameterCount(c), expected);
    EXPECT_EQ(InitParams(c, 1).ParameterCount(), expected);
  }
}

TEST(LinformerTest, DegeneratesToFullAttention) {
  const std::size_t n = 9, d = 8, heads = 2;
  ModelConfig c = oracle::TinyConfig(HeadKind::kClassify4);
  c.embed_dim = d;
  c.n_heads = heads;
  ModelParams mp = InitParams(c, 3);
  LayerParams layer = mp.layers[0];
  Rng rng(4);
  for (Tensor* t : {&layer.wq, &layer.wk, &layer.wv, &layer.wo, &layer.bq, &layer.bk, &layer.bv,
                    &layer.bo}) {
    for (double& v : t->data) v = rng.Normal() * 0.5;
  }
  layer.proj_e = Tensor::Matrix(n, n);
  layer.proj_f = Tensor::Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) layer.proj_e(i, i) = layer.proj_f(i, i) = 1.0;
  for (int rep = 0; rep < 5; ++rep) {
    Tensor x = Tensor::Matrix(n, d);
    for (double& v : x.data) v = rng.Normal();
    std::vector<Tensor> probs;
    const Tensor got = LinformerAttention(x, layer, heads, &probs);
    const auto want = oracle::FullAttention(x.data, n, d, layer, heads);
    for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(got.data[i], want[i], 1e-6);
    ASSERT_EQ(probs.size(), heads);
    for (const Tensor& p : probs) {
      for (std::size_t r = 0; r < p.rows(); ++r) {
        double s = 0;
        for (std::size_t j = 0; j < p.cols(); ++j) s += p(r, j);
        EXPECT_NEAR(s, 1.0, 1e-12);
      }
    }
  }
}

TEST(LinformerTest, EqualTokensGiveEqualOutputs) {
  ModelConfig c = ModelConfig::Small(1, HeadKind::kClassify4);
  const ModelParams mp = InitParams(c, 5);
  Tensor x = Tensor::Matrix(c.n_tokens(), c.embed_dim);
  Rng rng(6);
  std::vector<double> token(c.embed_dim);
  for (double& v : token) v = rng.Normal();
  for (std::size_t r = 0; r < x.rows(); ++r) std::copy(token.begin(), token.end(), x.row(r));
  const Tensor y = LinformerAttention(x, mp.layers[0], c.n_heads);
  for (std::size_t r = 1; r < y.rows(); ++r) {
    for (std::size_t j = 0; j < y.cols(); ++j) EXPECT_NEAR(y(r, j), y(0, j), 1e-12);
  }
}

class ModelFixture : public ::testing::Test {
 protected:
  ModelConfig cfg = oracle::TinyConfig(HeadKind::kClassify4);
  std::vector<std::vector<double>> images{oracle::RandomImage(64, 1), oracle::RandomImage(64, 2),
                                          oracle::RandomImage(64, 3)};
};

TEST_F(ModelFixture, ShapesDeterminismAndEquivariance) {
  const ModelParams p = InitParams(cfg, 7);
  const Batch b = MakeBatchOf(images);
  const ForwardResult r1 = Forward(b, p, cfg), r2 = Forward(b, p, cfg);
  EXPECT_EQ(r1.outputs.shape, (std::vector<std::size_t>{3, 4}));
  EXPECT_EQ(r1.outputs.data, r2.outputs.data);
  // Each sample's output does not depend on its batch mates or position.
  const std::vector<std::vector<double>> flipped{images[2], images[1], images[0]};
  const Batch reversed = MakeBatchOf(flipped);
  const ForwardResult rr = Forward(reversed, p, cfg);
  for (std::size_t j = 0; j < 4; ++j) {
    EXPECT_EQ(rr.outputs(0, j), r1.outputs(2, j));
    EXPECT_EQ(rr.outputs(2, j), r1.outputs(0, j));
  }
  const std::vector<std::vector<double>> one{images[1]};
  const ForwardResult single = Forward(MakeBatchOf(one), p, cfg);
  for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(single.outputs(0, j), r1.outputs(1, j));
}

TEST_F(ModelFixture, ZeroHeadGivesUniformSoftmax) {
  ModelParams p = InitParams(cfg, 8);
  p.head_w.Fill(0.0);
  p.head_b.Fill(0.0);
  const ForwardResult r = Forward(MakeBatchOf(images), p, cfg);
  for (double v : r.outputs.data) EXPECT_EQ(v, 0.0);
  EXPECT_NEAR(CeLoss(r.outputs, {0, 1, 2}), std::log(4.0), 1e-15);
}

TEST_F(ModelFixture, RejectsBadInputs) {
  const ModelParams p = InitParams(cfg, 9);
  auto bad = images[0];
  bad[3] = 1.5;
  EXPECT_THROW(Forward(MakeBatchOf({bad}), p, cfg), Error);
  bad[3] = NAN;
  try {
    Forward(MakeBatchOf({bad}), p, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNonFinite);
  }
  EXPECT_THROW(Forward(MakeBatchOf({std::vector<double>(10, 0.1)}), p, cfg), Error);
  ModelConfig broken = cfg;
  broken.patch_size = 3;
  EXPECT_THROW(broken.Validate(), Error);
}

// Analytic gradients of mean CE against central differences.
oracle::GradCheckResult GradCheck(const ModelConfig& cfg, const ModelParams& p, const Batch& b,
                                  const std::vector<int>& y, bool train_mode) {
  ForwardOptions opt;
  opt.keep_cache = true;
  opt.train_mode = train_mode;
  opt.dropout_seed = 99;
  const ForwardResult fwd = Forward(b, p, cfg, opt);
  Tensor d = Tensor::Matrix(b.size(), 4);
  for (std::size_t i = 0; i < b.size(); ++i) {
    double mx = -INFINITY, z = 0;
    for (std::size_t j = 0; j < 4; ++j) mx = std::max(mx, fwd.outputs(i, j));
    for (std::size_t j = 0; j < 4; ++j) z += std::exp(fwd.outputs(i, j) - mx);
    for (std::size_t j = 0; j < 4; ++j) {
      d(i, j) = (std::exp(fwd.outputs(i, j) - mx) / z - (static_cast<int>(j) == y[i] ? 1 : 0)) /
                static_cast<double>(b.size());
    }
  }
  const ModelParams g = Backward(fwd, d, p, cfg);
  ForwardOptions plain;
  plain.train_mode = train_mode;
  plain.dropout_seed = 99;
  return oracle::CheckGradients(
      [&](const ModelParams& q) { return CeLoss(Forward(b, q, cfg, plain).outputs, y); }, p, g,
      1e-5, 1e-7);
}

TEST_F(ModelFixture, GradientsMatchFiniteDifferences) {
  ModelParams p = InitParams(cfg, 10);
  // Larger weights than the init so every path carries signal.
  Rng rng(11);
  p.ForEach([&](const std::string&, Tensor& t) {
    for (double& v : t.data) v += 0.3 * rng.Normal();
  });
  const auto r = GradCheck(cfg, p, MakeBatchOf(images), {0, 3, 1}, false);
  EXPECT_LT(r.max_rel_error, 1e-4) << r.worst;
  EXPECT_EQ(r.checked, p.ParameterCount());
}

TEST_F(ModelFixture, GradientsMatchWithDropoutMasksFixed) {
  cfg.dropout_rate = 0.2;
  ModelParams p = InitParams(cfg, 12);
  Rng rng(13);
  p.ForEach([&](const std::string&, Tensor& t) {
    for (double& v : t.data) v += 0.3 * rng.Normal();
  });
  const auto r = GradCheck(cfg, p, MakeBatchOf(images), {2, 2, 0}, true);
  EXPECT_LT(r.max_rel_error, 1e-4) << r.worst;
  // Dropout changes outputs in train mode only.
  const Batch b = MakeBatchOf(images);
  ForwardOptions train;
  train.train_mode = true;
  EXPECT_NE(Forward(b, p, cfg, train).outputs.data, Forward(b, p, cfg).outputs.data);
}

TEST_F(ModelFixture, ZeroHeadStopsAllUpstreamGradients) {
  ModelParams p = InitParams(cfg, 14);
  p.head_w.Fill(0.0);
  ForwardOptions opt;
  opt.keep_cache = true;
  const ForwardResult fwd = Forward(MakeBatchOf(images), p, cfg, opt);
  Tensor d = Tensor::Matrix(3, 4, 0.3);
  const ModelParams g = Backward(fwd, d, p, cfg);
  g.ForEach([&](const std::string& name, const Tensor& t) {
    if (name == "head_w" || name == "head_b") return;
    for (double v : t.data) EXPECT_EQ(v, 0.0) << name;
  });
}

TEST_F(ModelFixture, GradientIsLinearInUpstream) {
  const ModelParams p = InitParams(cfg, 15);
  ForwardOptions opt;
  opt.keep_cache = true;
  const ForwardResult fwd = Forward(MakeBatchOf(images), p, cfg, opt);
  Tensor d = Tensor::Matrix(3, 4);
  Rng rng(16);
  for (double& v : d.data) v = rng.Normal();
  Tensor d2 = d;
  for (double& v : d2.data) v *= 2.0;
  const ModelParams g1 = Backward(fwd, d, p, cfg), g2 = Backward(fwd, d2, p, cfg);
  std::vector<const Tensor*> a;
  g1.ForEach([&](const std::string&, const Tensor& t) { a.push_back(&t); });
  std::size_t i = 0;
  g2.ForEach([&](const std::string& name, const Tensor& t) {
    const Tensor& t1 = *a[i++];
    for (std::size_t j = 0; j < t.size(); ++j) EXPECT_NEAR(t.data[j], 2.0 * t1.data[j], 1e-12) << name;
  });
}

TEST(ModelParamsTest, InitIsSeededAndStructured) {
  const ModelConfig c = ModelConfig::Small(2, HeadKind::kClassify4);
  const ModelParams a = InitParams(c, 1), b = InitParams(c, 1), other = InitParams(c, 2);
  EXPECT_EQ(a.patch_w.data, b.patch_w.data);
  EXPECT_NE(a.patch_w.data, other.patch_w.data);
  for (double v : a.layers[0].ln1_scale.data) EXPECT_EQ(v, 1.0);
  for (double v : a.layers[0].bq.data) EXPECT_EQ(v, 0.0);
  for (double v : a.patch_w.data) EXPECT_LE(std::abs(v), 0.04);
  EXPECT_EQ(a.layers[0].proj_e.shape, (std::vector<std::size_t>{c.linformer_k, c.n_tokens()}));
}

}  // namespace
}  // namespace eegvit
