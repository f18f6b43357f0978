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


#ifndef EEGVIT_CHANNELS_H_
#define EEGVIT_CHANNELS_H_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eegvit/signal.h"

namespace eegvit {

inline constexpr std::size_t kDeapChannels = 40;
inline constexpr std::size_t kDeapEegChannels = 32;

// DEAP's published channel order: 32 EEG electrodes, then hEOG (33), vEOG,
// zEMG, tEMG, GSR, respiration, plethysmograph, temperature.
const std::array<std::string_view, kDeapChannels>& DeapChannelNames();

// 1-based DEAP index of an electrode name (case-insensitive).
std::optional<int> DeapIndexOf(std::string_view name);

// 10-20 region prefix of an EEG electrode name: "Fp1" -> "FP", "Fz" -> "F",
// "PO3" -> "PO".
std::string RegionPrefix(std::string_view electrode);

struct ChannelSubset {
  std::string name;
  std::vector<std::string> channel_names;
  std::vector<int> indices;  // 1-based, DEAP layout

  std::size_t size() const { return indices.size(); }
};

// Registered subset names in documentation order. "channel-N" (N in 1..40)
// also resolves, to the single DEAP channel N.
std::vector<std::string> SubsetNames();

// Case-insensitive lookup; throws kUnknownSubset.
ChannelSubset ResolveSubset(std::string_view name);

// {name: {"electrodes": [...], "indices": [...]}} for every registered subset.
std::string SubsetRegistryJson();

// Rows of a dataset holding the subset's electrodes, in subset order. Names
// are matched case-insensitively; throws kUnknownSubset if one is missing.
std::vector<std::size_t> SubsetPositions(const ChannelSubset& subset,
                                         std::span<const std::string> dataset_channels);

struct RankedChannel {
  std::size_t position = 0;  // 0-based row in the dataset layout
  std::string name;
  double score = 0.0;
};

struct ChannelRanking {
  std::vector<RankedChannel> channels;  // score non-increasing
  std::vector<double> cumulative;       // running sum of scores

  std::size_t size() const { return channels.size(); }
};

// PCA over pooled (trial, sample) observations with channels as variables.
// Each channel is mean-centred per trial. The score of channel c is
//   sum_j evr_j * loading_{j,c}^2
// over all components j, which sums to one across channels.
ChannelRanking PcaRankChannels(std::span<const Trial> trials,
                               std::span<const std::string> channel_names);

// First k ranked channels, order preserved. Throws kBadK unless
// 1 <= k <= ranking size.
ChannelSubset TopK(const ChannelRanking& ranking, std::size_t k);

}  // namespace eegvit

#endif  // EEGVIT_CHANNELS_H_
