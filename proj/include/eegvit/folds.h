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


#ifndef EEGVIT_FOLDS_H_
#define EEGVIT_FOLDS_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "eegvit/signal.h"

namespace eegvit {

enum class FoldMode { kRandomTrial, kCrossPerson };

std::string_view FoldModeName(FoldMode mode);
FoldMode ParseFoldMode(std::string_view name);

struct FoldAssignment {
  int k = 0;
  FoldMode mode = FoldMode::kRandomTrial;
  // fold_of[i] is the fold of the i-th trial in the input order.
  std::vector<int> fold_of;

  std::vector<std::size_t> TestIndices(int fold) const;
  std::vector<std::size_t> TrainIndices(int fold) const;
  std::vector<std::size_t> FoldSizes() const;
};

// RandomTrial: trials are shuffled and dealt round-robin, so fold sizes differ
// by at most one. CrossPerson: distinct participants are shuffled and dealt
// round-robin, and each trial follows its participant.
FoldAssignment MakeFolds(std::span<const Trial> trials, int k,
                         std::uint64_t seed, FoldMode mode);

// Same as above when only the participant of each trial is known.
FoldAssignment MakeFolds(std::span<const int> participant_ids, int k,
                         std::uint64_t seed, FoldMode mode);

}  // namespace eegvit

#endif  // EEGVIT_FOLDS_H_
