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


#include "eegvit/folds.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

#include "eegvit/error.h"
#include "eegvit/rng.h"

namespace eegvit {

std::string_view FoldModeName(FoldMode mode) {
  return mode == FoldMode::kRandomTrial ? "random-trial" : "cross-person";
}

FoldMode ParseFoldMode(std::string_view name) {
  if (name == "random-trial" || name == "random") return FoldMode::kRandomTrial;
  if (name == "cross-person" || name == "person") return FoldMode::kCrossPerson;
  throw Error(ErrorKind::kBadConfig, "unknown fold mode '" + std::string(name) + "'");
}

std::vector<std::size_t> FoldAssignment::TestIndices(int fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i) {
    if (fold_of[i] == fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldAssignment::TrainIndices(int fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i) {
    if (fold_of[i] != fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldAssignment::FoldSizes() const {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
  for (int f : fold_of) ++sizes[static_cast<std::size_t>(f)];
  return sizes;
}

FoldAssignment MakeFolds(std::span<const int> participant_ids, int k,
                         std::uint64_t seed, FoldMode mode) {
  if (k < 2) throw Error(ErrorKind::kBadK, "k must be >= 2");
  const std::size_t n = participant_ids.size();
  if (n < static_cast<std::size_t>(k)) {
    throw Error(ErrorKind::kTooFewItems,
                std::to_string(n) + " trials for " + std::to_string(k) + " folds");
  }

  FoldAssignment out;
  out.k = k;
  out.mode = mode;
  out.fold_of.assign(n, 0);
  Rng rng(seed);

  if (mode == FoldMode::kRandomTrial) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.Shuffle(std::span<std::size_t>(order));
    for (std::size_t pos = 0; pos < n; ++pos) {
      out.fold_of[order[pos]] = static_cast<int>(pos % static_cast<std::size_t>(k));
    }
    return out;
  }

  std::vector<int> people(participant_ids.begin(), participant_ids.end());
  std::sort(people.begin(), people.end());
  people.erase(std::unique(people.begin(), people.end()), people.end());
  if (people.size() < static_cast<std::size_t>(k)) {
    throw Error(ErrorKind::kTooFewItems,
                std::to_string(people.size()) + " participants for " +
                    std::to_string(k) + " cross-person folds");
  }
  rng.Shuffle(std::span<int>(people));
  std::map<int, int> fold_of_person;
  for (std::size_t pos = 0; pos < people.size(); ++pos) {
    fold_of_person[people[pos]] = static_cast<int>(pos % static_cast<std::size_t>(k));
  }
  for (std::size_t i = 0; i < n; ++i) {
    out.fold_of[i] = fold_of_person.at(participant_ids[i]);
  }
  return out;
}

FoldAssignment MakeFolds(std::span<const Trial> trials, int k,
                         std::uint64_t seed, FoldMode mode) {
  std::vector<int> ids;
  ids.reserve(trials.size());
  for (const Trial& t : trials) ids.push_back(t.participant_id);
  return MakeFolds(ids, k, seed, mode);
}

}  // namespace eegvit
