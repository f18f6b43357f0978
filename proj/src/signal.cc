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


#include "eegvit/signal.h"

#include <cmath>
#include <set>

#include "eegvit/error.h"

namespace eegvit {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNonFinite: return "NonFinite";
    case ErrorKind::kOutOfRange: return "OutOfRange";
    case ErrorKind::kTooFewItems: return "TooFewItems";
    case ErrorKind::kBadRange: return "BadRange";
    case ErrorKind::kBadSize: return "BadSize";
    case ErrorKind::kBadShape: return "BadShape";
    case ErrorKind::kUnknownSubset: return "UnknownSubset";
    case ErrorKind::kDegenerateData: return "DegenerateData";
    case ErrorKind::kBadK: return "BadK";
    case ErrorKind::kEmptyData: return "EmptyData";
    case ErrorKind::kBadConfig: return "BadConfig";
    case ErrorKind::kBadMagic: return "BadMagic";
    case ErrorKind::kVersionMismatch: return "VersionMismatch";
    case ErrorKind::kTruncated: return "Truncated";
    case ErrorKind::kChecksumMismatch: return "ChecksumMismatch";
    case ErrorKind::kIo: return "Io";
  }
  return "Unknown";
}

std::string_view QuadrantName(Quadrant q) {
  switch (q) {
    case Quadrant::kQ1: return "Q1";
    case Quadrant::kQ2: return "Q2";
    case Quadrant::kQ3: return "Q3";
    case Quadrant::kQ4: return "Q4";
  }
  return "?";
}

Quadrant QuadrantFromCode(int code) {
  if (code < 0 || code >= kNumQuadrants) {
    throw Error(ErrorKind::kOutOfRange,
                "quadrant code " + std::to_string(code) + " not in 0..3");
  }
  return static_cast<Quadrant>(code);
}

void ValidateTrial(const Trial& trial) {
  if (trial.n_channels < 1 || trial.n_samples < 2) {
    throw Error(ErrorKind::kBadShape, "trial needs >= 1 channel and >= 2 samples");
  }
  if (trial.samples.size() != trial.n_channels * trial.n_samples) {
    throw Error(ErrorKind::kBadShape, "sample matrix size does not match dims");
  }
  for (float v : trial.samples) {
    if (!std::isfinite(v)) throw Error(ErrorKind::kNonFinite, "trial sample");
  }
  for (double r : {trial.labels.sam_valence, trial.labels.sam_arousal}) {
    if (!(r >= kSamMin && r <= kSamMax)) {
      throw Error(ErrorKind::kOutOfRange,
                  "SAM rating " + std::to_string(r) + " outside [1, 9]");
    }
  }
}

void ValidateChannelNames(std::span<const std::string> names,
                          std::size_t n_channels) {
  if (names.size() != n_channels) {
    throw Error(ErrorKind::kBadShape, "channel name count != channel count");
  }
  std::set<std::string> seen(names.begin(), names.end());
  if (seen.size() != names.size()) {
    throw Error(ErrorKind::kBadShape, "duplicate channel names");
  }
}

namespace {

template <typename T>
std::vector<double> ZScoreImpl(std::span<const T> signal) {
  if (signal.size() < 2) {
    throw Error(ErrorKind::kTooFewItems, "z-score needs at least 2 samples");
  }
  double mean = 0.0;
  for (T v : signal) {
    if (!std::isfinite(v)) throw Error(ErrorKind::kNonFinite, "z-score input");
    mean += v;
  }
  mean /= static_cast<double>(signal.size());
  double var = 0.0;
  for (T v : signal) var += (v - mean) * (v - mean);
  var /= static_cast<double>(signal.size());

  std::vector<double> out(signal.size(), 0.0);
  const double sd = std::sqrt(var);
  // Flatlined channels (relative spread at rounding level) normalize to zeros.
  if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) return out;
  for (std::size_t i = 0; i < signal.size(); ++i) out[i] = (signal[i] - mean) / sd;
  return out;
}

}  // namespace

std::vector<double> ZScoreNormalize(std::span<const double> signal) {
  return ZScoreImpl(signal);
}

std::vector<double> ZScoreNormalize(std::span<const float> signal) {
  return ZScoreImpl(signal);
}

Quadrant QuadrantFromRatings(double valence, double arousal, double threshold) {
  for (double r : {valence, arousal}) {
    if (!(r >= kSamMin && r <= kSamMax)) {
      throw Error(ErrorKind::kOutOfRange,
                  "rating " + std::to_string(r) + " outside [1, 9]");
    }
  }
  const bool high_valence = valence > threshold;
  const bool high_arousal = arousal > threshold;
  if (high_arousal) return high_valence ? Quadrant::kQ1 : Quadrant::kQ2;
  return high_valence ? Quadrant::kQ4 : Quadrant::kQ3;
}

}  // namespace eegvit
