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


#ifndef EEGVIT_SYNTH_H_
#define EEGVIT_SYNTH_H_

#include <cstdint>

#include "eegvit/dataset.h"

namespace eegvit {

struct SynthConfig {
  int n_participants = 8;
  int n_videos = 8;
  int n_channels = 40;
  double fs_hz = 128.0;
  double duration_s = 4.0;
  double noise_sigma = 0.3;
  std::uint64_t seed = 0;

  void Validate() const;
};

inline constexpr double kHighValenceToneHz = 10.0;
inline constexpr double kLowValenceToneHz = 6.0;
inline constexpr double kHighArousalAmplitude = 2.0;
inline constexpr double kLowArousalAmplitude = 1.0;

// Stand-in dataset whose quadrant is carried by a tone in every channel:
// valence picks the frequency (10 Hz high, 6 Hz low) and arousal the
// amplitude (2.0 high, 1.0 low), plus white noise. Quadrants go round-robin
// over videos (video v gets Q((v - 1) mod 4)). SAM ratings are 7 (high) or
// 3 (low) plus uniform jitter in [-1, 1). Samples are clipped to
// +-(amplitude + 6 noise_sigma). Channel names follow the DEAP layout for
// up to 40 channels.
PortableDataset SynthGenerate(const SynthConfig& config);

}  // namespace eegvit

#endif  // EEGVIT_SYNTH_H_
