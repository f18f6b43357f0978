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


#include "eegvit/channels.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <nlohmann/json.hpp>
#include <set>

#include "eegvit/error.h"

namespace eegvit {
namespace {

std::string Upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

ChannelSubset FromNames(std::string name, std::initializer_list<std::string_view> electrodes) {
  ChannelSubset subset;
  subset.name = std::move(name);
  for (std::string_view e : electrodes) {
    const int index = DeapIndexOf(e).value();
    subset.indices.push_back(index);
    subset.channel_names.emplace_back(DeapChannelNames()[static_cast<std::size_t>(index - 1)]);
  }
  return subset;
}

ChannelSubset FromRange(std::string name, int first, int last) {
  ChannelSubset subset;
  subset.name = std::move(name);
  for (int i = first; i <= last; ++i) {
    subset.indices.push_back(i);
    subset.channel_names.emplace_back(DeapChannelNames()[static_cast<std::size_t>(i - 1)]);
  }
  return subset;
}

ChannelSubset Region(std::string name) {
  ChannelSubset subset;
  const std::string prefix = Upper(name);
  subset.name = std::move(name);
  for (std::size_t i = 0; i < kDeapEegChannels; ++i) {
    if (RegionPrefix(DeapChannelNames()[i]) == prefix) {
      subset.indices.push_back(static_cast<int>(i + 1));
      subset.channel_names.emplace_back(DeapChannelNames()[i]);
    }
  }
  return subset;
}

const std::vector<ChannelSubset>& Registry() {
  static const std::vector<ChannelSubset> registry = [] {
    std::vector<ChannelSubset> r;
    r.push_back(FromRange("all", 1, 40));
    r.push_back(FromRange("eeg-only", 1, 32));
    r.push_back(FromRange("non-eeg", 33, 40));
    r.push_back(FromNames("muse-12", {"AF3", "AF4", "FP1", "FP2", "F7", "F8", "P7",
                                      "P8", "CP5", "CP6", "T7", "T8"}));
    r.push_back(FromNames("muse-8", {"AF3", "AF4", "F7", "F8", "P7", "P8", "T7", "T8"}));
    r.push_back(FromNames("muse-4a", {"AF3", "AF4", "P7", "P8"}));
    r.push_back(FromNames("muse-4b", {"F7", "F8", "T7", "T8"}));
    // Fourteen electrodes are listed for the device although it is usually
    // described as a 12-electrode headset; all listed names are kept.
    r.push_back(FromNames("emotiv", {"AF3", "F7", "F3", "FC5", "T7", "P7", "O1", "O2",
                                     "P8", "T8", "FC6", "F4", "F8", "AF4"}));
    for (const char* g : {"t", "f", "c", "fp", "af", "po", "fc", "cp", "o", "p"}) {
      r.push_back(Region(g));
    }
    r.push_back(FromNames("channel-33", {"hEOG"}));
    return r;
  }();
  return registry;
}

}  // namespace

const std::array<std::string_view, kDeapChannels>& DeapChannelNames() {
  static constexpr std::array<std::string_view, kDeapChannels> names = {
      "Fp1", "AF3", "F3",  "F7",  "FC5", "FC1",  "C3",   "T7",   "CP5",   "CP1",
      "P3",  "P7",  "PO3", "O1",  "Oz",  "Pz",   "Fp2",  "AF4",  "Fz",    "F4",
      "F8",  "FC6", "FC2", "Cz",  "C4",  "T8",   "CP6",  "CP2",  "P4",    "P8",
      "PO4", "O2",  "hEOG", "vEOG", "zEMG", "tEMG", "GSR", "RESP", "PLETH", "TEMP"};
  return names;
}

std::optional<int> DeapIndexOf(std::string_view name) {
  const std::string key = Upper(name);
  const auto& names = DeapChannelNames();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (Upper(names[i]) == key) return static_cast<int>(i + 1);
  }
  return std::nullopt;
}

std::string RegionPrefix(std::string_view electrode) {
  std::string letters;
  for (char c : electrode) {
    if (!std::isalpha(static_cast<unsigned char>(c))) break;
    letters.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  // Midline electrodes (Fz, Cz, Pz, Oz) belong to the region of their letters.
  if (letters.size() > 1 && letters.back() == 'Z') letters.pop_back();
  return letters;
}

std::vector<std::string> SubsetNames() {
  std::vector<std::string> names;
  for (const ChannelSubset& s : Registry()) names.push_back(s.name);
  return names;
}

ChannelSubset ResolveSubset(std::string_view name) {
  const std::string key = Lower(name);
  for (const ChannelSubset& s : Registry()) {
    if (s.name == key) return s;
  }
  if (key.rfind("channel-", 0) == 0 && key.size() > 8) {
    const std::string digits = key.substr(8);
    if (std::all_of(digits.begin(), digits.end(),
                    [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }) &&
        digits.size() <= 2) {
      const int index = std::stoi(digits);
      if (index >= 1 && index <= static_cast<int>(kDeapChannels)) {
        return FromRange(key, index, index);
      }
    }
  }
  throw Error(ErrorKind::kUnknownSubset, "no channel subset named '" + std::string(name) + "'");
}

std::string SubsetRegistryJson() {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const ChannelSubset& s : Registry()) {
    out[s.name] = {{"electrodes", s.channel_names}, {"indices", s.indices}};
  }
  return out.dump(2);
}

std::vector<std::size_t> SubsetPositions(const ChannelSubset& subset,
                                         std::span<const std::string> dataset_channels) {
  std::map<std::string, std::size_t> by_name;
  for (std::size_t i = 0; i < dataset_channels.size(); ++i) {
    by_name.emplace(Upper(dataset_channels[i]), i);
  }
  std::vector<std::size_t> positions;
  for (const std::string& name : subset.channel_names) {
    const auto it = by_name.find(Upper(name));
    if (it == by_name.end()) {
      throw Error(ErrorKind::kUnknownSubset, "subset '" + subset.name + "' needs channel '" +
                                                 name + "' which the dataset lacks");
    }
    positions.push_back(it->second);
  }
  return positions;
}

ChannelRanking PcaRankChannels(std::span<const Trial> trials,
                               std::span<const std::string> channel_names) {
  if (trials.size() < 2) {
    throw Error(ErrorKind::kDegenerateData, "PCA ranking needs at least 2 trials");
  }
  const std::size_t n_ch = trials.front().n_channels;
  if (channel_names.size() != n_ch) {
    throw Error(ErrorKind::kBadShape, "channel name count != channel count");
  }

  Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_ch),
                                                  static_cast<Eigen::Index>(n_ch));
  double observations = 0.0;
  for (const Trial& trial : trials) {
    if (trial.n_channels != n_ch) {
      throw Error(ErrorKind::kDegenerateData, "trials do not share a channel layout");
    }
    const auto n_s = static_cast<Eigen::Index>(trial.n_samples);
    Eigen::MatrixXd centred(static_cast<Eigen::Index>(n_ch), n_s);
    for (std::size_t c = 0; c < n_ch; ++c) {
      const auto row = trial.channel(c);
      Eigen::Map<const Eigen::VectorXf> v(row.data(), n_s);
      const Eigen::VectorXd d = v.cast<double>();
      centred.row(static_cast<Eigen::Index>(c)) = (d.array() - d.mean()).matrix().transpose();
    }
    scatter.selfadjointView<Eigen::Lower>().rankUpdate(centred);
    observations += static_cast<double>(n_s);
  }
  Eigen::MatrixXd covariance = scatter.selfadjointView<Eigen::Lower>();
  covariance /= observations;
  if (!covariance.allFinite()) {
    throw Error(ErrorKind::kDegenerateData, "channel covariance is not finite");
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::kDegenerateData, "eigendecomposition failed");
  }
  const Eigen::VectorXd eigenvalues = solver.eigenvalues().cwiseMax(0.0);
  const double total = eigenvalues.sum();
  if (!(total > 0.0)) {
    throw Error(ErrorKind::kDegenerateData, "all channels have zero variance");
  }
  const Eigen::VectorXd evr = eigenvalues / total;
  // Column j of the eigenvector matrix holds component j's loadings.
  const Eigen::VectorXd scores =
      solver.eigenvectors().cwiseAbs2() * evr;

  ChannelRanking ranking;
  for (std::size_t c = 0; c < n_ch; ++c) {
    ranking.channels.push_back({c, channel_names[c], scores(static_cast<Eigen::Index>(c))});
  }
  std::stable_sort(ranking.channels.begin(), ranking.channels.end(),
                   [](const RankedChannel& a, const RankedChannel& b) {
                     return a.score > b.score;
                   });
  double running = 0.0;
  for (const RankedChannel& ch : ranking.channels) {
    running += ch.score;
    ranking.cumulative.push_back(running);
  }
  return ranking;
}

ChannelSubset TopK(const ChannelRanking& ranking, std::size_t k) {
  if (k < 1 || k > ranking.size()) {
    throw Error(ErrorKind::kBadK, "k=" + std::to_string(k) + " outside 1.." +
                                      std::to_string(ranking.size()));
  }
  ChannelSubset subset;
  subset.name = "pca-" + std::to_string(k);
  for (std::size_t i = 0; i < k; ++i) {
    subset.channel_names.push_back(ranking.channels[i].name);
    subset.indices.push_back(static_cast<int>(ranking.channels[i].position + 1));
  }
  return subset;
}

}  // namespace eegvit
