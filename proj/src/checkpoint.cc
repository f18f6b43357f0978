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


#include "eegvit/checkpoint.h"

#include <cmath>

#include "eegvit/binary_io.h"
#include "eegvit/error.h"

namespace eegvit {

namespace {
constexpr char kMagic[4] = {'S', 'D', 'V', 'M'};
}  // namespace

std::vector<std::uint8_t> EncodeCheckpoint(const ModelConfig& config,
                                           const ModelParams& params) {
  config.Validate();
  io::ByteWriter w;
  w.Raw(kMagic, 4);
  w.U16(kCheckpointVersion);
  for (std::size_t v : {config.image_h, config.image_w, config.patch_size, config.embed_dim,
                        config.depth, config.n_heads, config.linformer_k, config.n_channels,
                        config.mlp_hidden}) {
    w.U32(static_cast<std::uint32_t>(v));
  }
  w.U8(static_cast<std::uint8_t>(config.head));
  w.F32(static_cast<float>(config.dropout_rate));
  params.ForEach([&](const std::string&, const Tensor& t) {
    w.U8(static_cast<std::uint8_t>(t.rank()));
    for (std::size_t dim : t.shape) w.U32(static_cast<std::uint32_t>(dim));
    for (double v : t.data) w.F32(static_cast<float>(v));
  });
  return std::move(w.bytes());
}

Checkpoint DecodeCheckpoint(std::span<const std::uint8_t> bytes) {
  io::ByteReader r(bytes);
  if (r.Bytes(4) != std::string_view(kMagic, 4)) {
    throw Error(ErrorKind::kBadMagic, "not a model checkpoint");
  }
  const std::uint16_t version = r.U16();
  if (version != kCheckpointVersion) {
    throw Error(ErrorKind::kVersionMismatch,
                "checkpoint version " + std::to_string(version));
  }
  Checkpoint ck;
  ModelConfig& c = ck.config;
  for (std::size_t* field : {&c.image_h, &c.image_w, &c.patch_size, &c.embed_dim, &c.depth,
                             &c.n_heads, &c.linformer_k, &c.n_channels, &c.mlp_hidden}) {
    *field = r.U32();
  }
  const std::uint8_t head = r.U8();
  if (head > 1) throw Error(ErrorKind::kBadConfig, "unknown head kind");
  c.head = static_cast<HeadKind>(head);
  c.dropout_rate = r.F32();
  c.Validate();

  ck.params = ZeroParams(c);
  ck.params.ForEach([&](const std::string& name, Tensor& t) {
    const std::size_t rank = r.U8();
    if (rank != t.rank()) throw Error(ErrorKind::kBadShape, "rank mismatch for " + name);
    for (std::size_t i = 0; i < rank; ++i) {
      if (r.U32() != t.shape[i]) throw Error(ErrorKind::kBadShape, "dim mismatch for " + name);
    }
    r.Need(t.size() * sizeof(float));
    for (double& v : t.data) {
      v = r.F32();
      if (!std::isfinite(v)) throw Error(ErrorKind::kNonFinite, "parameter " + name);
    }
  });
  if (r.remaining() != 0) throw Error(ErrorKind::kBadShape, "trailing bytes in checkpoint");
  return ck;
}

void SaveCheckpoint(const std::filesystem::path& path, const ModelConfig& config,
                    const ModelParams& params) {
  io::WriteFileAtomic(path, EncodeCheckpoint(config, params));
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path) {
  return DecodeCheckpoint(io::ReadFile(path));
}

}  // namespace eegvit
