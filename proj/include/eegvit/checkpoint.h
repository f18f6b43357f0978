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


#ifndef EEGVIT_CHECKPOINT_H_
#define EEGVIT_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "eegvit/model.h"

namespace eegvit {

// Model checkpoint, little-endian:
//   "SDVM" | u16 version
//   config: u32 image_h, image_w, patch_size, embed_dim, depth, n_heads,
//           linformer_k, n_channels, mlp_hidden | u8 head | f32 dropout_rate
//   tensors in ModelParams::ForEach order, each
//           u8 rank | u32 dims[rank] | f32 payload (row-major)
// Parameters are narrowed to f32 on save.
inline constexpr std::uint16_t kCheckpointVersion = 1;

struct Checkpoint {
  ModelConfig config;
  ModelParams params;
};

std::vector<std::uint8_t> EncodeCheckpoint(const ModelConfig& config,
                                           const ModelParams& params);
Checkpoint DecodeCheckpoint(std::span<const std::uint8_t> bytes);

void SaveCheckpoint(const std::filesystem::path& path, const ModelConfig& config,
                    const ModelParams& params);
Checkpoint LoadCheckpoint(const std::filesystem::path& path);

}  // namespace eegvit

#endif  // EEGVIT_CHECKPOINT_H_
