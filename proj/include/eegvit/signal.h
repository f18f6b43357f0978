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


#ifndef EEGVIT_SIGNAL_H_
#define EEGVIT_SIGNAL_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace eegvit {

// Valence/arousal quadrants. Integer codes are part of the file format and
// the classifier's class indices.
enum class Quadrant : std::uint8_t {
  kQ1 = 0,  // high arousal, high valence
  kQ2 = 1,  // high arousal, low valence
  kQ3 = 2,  // low arousal, low valence
  kQ4 = 3,  // low arousal, high valence
};

inline constexpr int kNumQuadrants = 4;

std::string_view QuadrantName(Quadrant q);
Quadrant QuadrantFromCode(int code);

inline constexpr double kSamMin = 1.0;
inline constexpr double kSamMax = 9.0;
inline constexpr double kDefaultRatingThreshold = 5.0;

struct Labels {
  Quadrant vaq = Quadrant::kQ1;
  double sam_valence = 5.0;
  double sam_arousal = 5.0;
};

// One participant x video recording. Samples are channel-major:
// samples[c * n_samples + t].
struct Trial {
  int participant_id = 1;
  int video_id = 1;
  std::size_t n_channels = 0;
  std::size_t n_samples = 0;
  std::vector<float> samples;
  Labels labels;

  std::span<const float> channel(std::size_t c) const {
    return {samples.data() + c * n_samples, n_samples};
  }
  std::span<float> channel(std::size_t c) {
    return {samples.data() + c * n_samples, n_samples};
  }
};

// Throws Error(kBadShape / kNonFinite / kOutOfRange) when a trial breaks the
// layout or label invariants.
void ValidateTrial(const Trial& trial);
void ValidateChannelNames(std::span<const std::string> names,
                          std::size_t n_channels);

// (x - mean) / population stddev. A constant signal maps to zeros.
std::vector<double> ZScoreNormalize(std::span<const double> signal);
std::vector<double> ZScoreNormalize(std::span<const float> signal);

// Strict comparison: a rating equal to the threshold counts as low.
Quadrant QuadrantFromRatings(double valence, double arousal,
                             double threshold = kDefaultRatingThreshold);

}  // namespace eegvit

#endif  // EEGVIT_SIGNAL_H_
