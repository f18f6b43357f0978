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


#ifndef EEGVIT_DATASET_H_
#define EEGVIT_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "eegvit/signal.h"

namespace eegvit {

// "EEGP" portable dataset, little-endian:
//   "EEGP" | u16 version | u32 n_trials | u16 n_channels | u32 n_samples | f32 fs
//   u32 metadata length | UTF-8 JSON {"channel_names": [...], "source": ...}
//   per trial: u16 participant | u16 video | u8 vaq | f32 sam_valence |
//              f32 sam_arousal | f32 samples[n_channels x n_samples]
//   u32 CRC-32 (IEEE) of every preceding byte
inline constexpr std::uint16_t kPortableVersion = 1;

struct PortableDataset {
  std::vector<Trial> trials;
  std::vector<std::string> channel_names;
  double sample_rate_hz = 128.0;
  std::string source = "synthetic";
  std::uint16_t format_version = kPortableVersion;

  std::size_t n_channels() const { return channel_names.size(); }
  std::size_t n_samples() const { return trials.empty() ? 0 : trials.front().n_samples; }

  // Shared layout, per-trial invariants, and the DEAP trial count.
  void Validate() const;
};

std::vector<std::uint8_t> EncodePortable(const PortableDataset& dataset);
// Throws kBadMagic, kVersionMismatch, kTruncated, kBadShape (declared sizes
// disagree with the payload) or kChecksumMismatch.
PortableDataset DecodePortable(std::span<const std::uint8_t> bytes);

void WritePortable(const PortableDataset& dataset, const std::filesystem::path& path);
PortableDataset ReadPortable(const std::filesystem::path& path);

// participant,video,vaq,sam_valence,sam_arousal
std::string LabelsCsv(const PortableDataset& dataset);

}  // namespace eegvit

#endif  // EEGVIT_DATASET_H_
