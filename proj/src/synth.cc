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


#include "eegvit/synth.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "eegvit/channels.h"
#include "eegvit/error.h"
#include "eegvit/rng.h"

namespace eegvit {

void SynthConfig::Validate() const {
  if (n_participants < 1 || n_participants > 65535 || n_videos < 1 || n_videos > 65535 ||
      n_channels < 1 || n_channels > 65535) {
    throw Error(ErrorKind::kBadConfig, "participants, videos and channels must be in 1..65535");
  }
  if (!(fs_hz > 0.0) || !(duration_s > 0.0)) {
    throw Error(ErrorKind::kBadConfig, "fs and duration must be positive");
  }
  if (!(noise_sigma >= 0.0)) throw Error(ErrorKind::kBadConfig, "noise_sigma must be >= 0");
  if (fs_hz / 2.0 <= kHighValenceToneHz) {
    throw Error(ErrorKind::kBadConfig, "fs too low for the 10 Hz tone");
  }
  if (static_cast<std::size_t>(std::llround(fs_hz * duration_s)) < 2) {
    throw Error(ErrorKind::kBadConfig, "need at least 2 samples per trial");
  }
}

PortableDataset SynthGenerate(const SynthConfig& config) {
  config.Validate();
  const auto n_samples = static_cast<std::size_t>(std::llround(config.fs_hz * config.duration_s));
  const auto n_channels = static_cast<std::size_t>(config.n_channels);

  PortableDataset ds;
  ds.source = "synthetic";
  ds.sample_rate_hz = static_cast<float>(config.fs_hz);
  for (std::size_t c = 0; c < n_channels; ++c) {
    ds.channel_names.push_back(c < kDeapChannels ? std::string(DeapChannelNames()[c])
                                                 : "ch" + std::to_string(c + 1));
  }

  Rng rng(config.seed);
  for (int p = 1; p <= config.n_participants; ++p) {
    for (int v = 1; v <= config.n_videos; ++v) {
      Trial t;
      t.participant_id = p;
      t.video_id = v;
      t.n_channels = n_channels;
      t.n_samples = n_samples;
      const Quadrant q = QuadrantFromCode((v - 1) % kNumQuadrants);
      const bool high_valence = q == Quadrant::kQ1 || q == Quadrant::kQ4;
      const bool high_arousal = q == Quadrant::kQ1 || q == Quadrant::kQ2;
      const double tone_hz = high_valence ? kHighValenceToneHz : kLowValenceToneHz;
      const double amplitude = high_arousal ? kHighArousalAmplitude : kLowArousalAmplitude;

      t.labels.vaq = q;
      t.labels.sam_valence = static_cast<float>((high_valence ? 7.0 : 3.0) + rng.Uniform(-1.0, 1.0));
      t.labels.sam_arousal = static_cast<float>((high_arousal ? 7.0 : 3.0) + rng.Uniform(-1.0, 1.0));

      const double bound = amplitude + 6.0 * config.noise_sigma;
      const double omega = 2.0 * std::numbers::pi * tone_hz / config.fs_hz;
      t.samples.resize(n_channels * n_samples);
      for (std::size_t c = 0; c < n_channels; ++c) {
        const double phase = rng.Uniform(0.0, 2.0 * std::numbers::pi);
        std::span<float> row = t.channel(c);
        for (std::size_t i = 0; i < n_samples; ++i) {
          double x = amplitude * std::sin(omega * static_cast<double>(i) + phase);
          if (config.noise_sigma > 0.0) x += config.noise_sigma * rng.Normal();
          row[i] = static_cast<float>(std::clamp(x, -bound, bound));
        }
      }
      ds.trials.push_back(std::move(t));
    }
  }
  return ds;
}

}  // namespace eegvit
