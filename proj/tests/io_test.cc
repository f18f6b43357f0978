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


#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <cstring>
#include <filesystem>
#include <numbers>
#include <zlib.h>

#include "eegvit/binary_io.h"
#include "eegvit/checkpoint.h"
#include "eegvit/dataset.h"
#include "eegvit/error.h"
#include "eegvit/rng.h"
#include "eegvit/synth.h"
#include "oracles.h"

namespace eegvit {
namespace {

namespace fs = std::filesystem;

PortableDataset RandomDataset(std::size_t trials, std::size_t channels, std::size_t samples,
                              std::uint64_t seed) {
  Rng rng(seed);
  PortableDataset d;
  d.sample_rate_hz = 128.0;
  for (std::size_t c = 0; c < channels; ++c) d.channel_names.push_back("ch" + std::to_string(c));
  for (std::size_t i = 0; i < trials; ++i) {
    Trial t;
    t.participant_id = static_cast<int>(rng.Below(32)) + 1;
    t.video_id = static_cast<int>(rng.Below(40)) + 1;
    t.n_channels = channels;
    t.n_samples = samples;
    t.labels.sam_valence = static_cast<float>(rng.Uniform(1, 9));
    t.labels.sam_arousal = static_cast<float>(rng.Uniform(1, 9));
    t.labels.vaq = QuadrantFromCode(static_cast<int>(rng.Below(4)));
    t.samples.resize(channels * samples);
    for (float& v : t.samples) v = static_cast<float>(rng.Normal() * 50.0);
    d.trials.push_back(std::move(t));
  }
  return d;
}


ErrorKind CaughtKind(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kIo;
}

TEST(PortableTest, RoundTripIsBitIdentical) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const PortableDataset d = RandomDataset(2 + seed, 1 + seed % 4, 16 + 7 * seed, seed);
    const auto bytes = EncodePortable(d);
    const PortableDataset back = DecodePortable(bytes);
    EXPECT_EQ(EncodePortable(back), bytes);
    ASSERT_EQ(back.trials.size(), d.trials.size());
    for (std::size_t i = 0; i < d.trials.size(); ++i) {
      EXPECT_EQ(std::memcmp(back.trials[i].samples.data(), d.trials[i].samples.data(),
                            d.trials[i].samples.size() * sizeof(float)),
                0);
      EXPECT_EQ(back.trials[i].labels.vaq, d.trials[i].labels.vaq);
      EXPECT_EQ(back.trials[i].participant_id, d.trials[i].participant_id);
    }
    EXPECT_EQ(back.channel_names, d.channel_names);
  }
}

TEST(PortableTest, LayoutMatchesFormat) {
  const PortableDataset d = RandomDataset(2, 3, 5, 9);
  const auto bytes = EncodePortable(d);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "EEGP");
  io::ByteReader r(bytes);
  r.Bytes(4);
  EXPECT_EQ(r.U16(), kPortableVersion);
  EXPECT_EQ(r.U32(), 2u);
  EXPECT_EQ(r.U16(), 3u);
  EXPECT_EQ(r.U32(), 5u);
  EXPECT_EQ(r.F32(), 128.0f);
  const std::uint32_t meta = r.U32();
  r.Bytes(meta);
  const std::size_t per_trial = 2 + 2 + 1 + 4 + 4 + 4 * 15;
  EXPECT_EQ(r.remaining(), 2 * per_trial + 4);
  // Trailer is the zlib CRC-32 of everything before it.
  const uLong crc = crc32(0L, bytes.data(), static_cast<uInt>(bytes.size() - 4));
  std::uint32_t stored = 0;
  std::memcpy(&stored, bytes.data() + bytes.size() - 4, 4);
  EXPECT_EQ(stored, static_cast<std::uint32_t>(crc));
}

TEST(PortableTest, RejectsCorruption) {
  const auto good = EncodePortable(RandomDataset(3, 2, 20, 4));
  auto bad_magic = good;
  bad_magic[0] = 'X';
  EXPECT_EQ(CaughtKind([&] { DecodePortable(bad_magic); }), ErrorKind::kBadMagic);
  auto bad_version = good;
  bad_version[4] = 99;
  EXPECT_EQ(CaughtKind([&] { DecodePortable(bad_version); }), ErrorKind::kVersionMismatch);
  for (std::size_t cut : {std::size_t{0}, std::size_t{3}, std::size_t{10}, good.size() / 2,
                          good.size() - 1}) {
    const std::vector<std::uint8_t> truncated(good.begin(), good.begin() + cut);
    const ErrorKind k = CaughtKind([&] { DecodePortable(truncated); });
    EXPECT_TRUE(k == ErrorKind::kTruncated || k == ErrorKind::kBadMagic) << cut;
  }
  auto flipped = good;
  flipped[good.size() - 20] ^= 0x40;
  EXPECT_EQ(CaughtKind([&] { DecodePortable(flipped); }), ErrorKind::kChecksumMismatch);
  // Declared sample count far larger than the payload: rejected before any read.
  auto inflated = good;
  const std::uint32_t huge = 0x7fffffff;
  std::memcpy(inflated.data() + 12, &huge, 4);
  EXPECT_EQ(CaughtKind([&] { DecodePortable(inflated); }), ErrorKind::kTruncated);
  auto longer = good;
  longer.push_back(0);
  EXPECT_EQ(CaughtKind([&] { DecodePortable(longer); }), ErrorKind::kBadShape);
}

TEST(PortableTest, FileRoundTripAndLabelsCsv) {
  const fs::path dir = fs::temp_directory_path() / "eegvit_io_test";
  fs::create_directories(dir);
  const PortableDataset d = RandomDataset(4, 2, 8, 5);
  WritePortable(d, dir / "d.eegp");
  EXPECT_FALSE(fs::exists(dir / "d.eegp.tmp"));
  EXPECT_EQ(EncodePortable(ReadPortable(dir / "d.eegp")), EncodePortable(d));
  EXPECT_EQ(CaughtKind([&] { ReadPortable(dir / "missing.eegp"); }), ErrorKind::kIo);
  const std::string csv = LabelsCsv(d);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "participant,video,vaq,sam_valence,sam_arousal");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  fs::remove_all(dir);
}

TEST(CheckpointTest, RoundTripAndRejection) {
  ModelConfig c = ModelConfig::Small(3, HeadKind::kRegress2);
  c.dropout_rate = 0.25;
  const ModelParams p = InitParams(c, 42);
  const auto bytes = EncodeCheckpoint(c, p);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "SDVM");
  const Checkpoint back = DecodeCheckpoint(bytes);
  EXPECT_TRUE(back.config == c);
  std::vector<const Tensor*> want;
  p.ForEach([&](const std::string&, const Tensor& t) { want.push_back(&t); });
  std::size_t i = 0;
  back.params.ForEach([&](const std::string& name, const Tensor& t) {
    const Tensor& w = *want[i++];
    ASSERT_EQ(t.shape, w.shape) << name;
    for (std::size_t j = 0; j < t.size(); ++j) {
      EXPECT_EQ(t.data[j], static_cast<double>(static_cast<float>(w.data[j]))) << name;
    }
  });
  EXPECT_EQ(EncodeCheckpoint(back.config, back.params), bytes);

  auto bad = bytes;
  bad[1] = 'X';
  EXPECT_EQ(CaughtKind([&] { DecodeCheckpoint(bad); }), ErrorKind::kBadMagic);
  bad = bytes;
  bad[4] = 7;
  EXPECT_EQ(CaughtKind([&] { DecodeCheckpoint(bad); }), ErrorKind::kVersionMismatch);
  const std::vector<std::uint8_t> cut(bytes.begin(), bytes.begin() + bytes.size() / 2);
  EXPECT_EQ(CaughtKind([&] { DecodeCheckpoint(cut); }), ErrorKind::kTruncated);
}

TEST(SynthTest, NoiselessPeakAtEncodedTone) {
  SynthConfig c;
  c.noise_sigma = 0.0;
  c.n_participants = 2;
  c.n_videos = 4;
  c.n_channels = 3;
  c.seed = 2;
  const PortableDataset d = SynthGenerate(c);
  for (const Trial& t : d.trials) {
    const bool high_v = t.labels.vaq == Quadrant::kQ1 || t.labels.vaq == Quadrant::kQ4;
    for (std::size_t ch = 0; ch < t.n_channels; ++ch) {
      // Direct DFT magnitude over bins 1..n/2.
      const std::size_t n = t.n_samples;
      std::size_t best = 0;
      double best_mag = -1;
      for (std::size_t k = 1; k <= n / 2; ++k) {
        std::complex<double> acc = 0;
        for (std::size_t i = 0; i < n; ++i) {
          acc += static_cast<double>(t.samples[ch * n + i]) *
                 std::polar(1.0, -2 * std::numbers::pi * k * i / n);
        }
        if (std::abs(acc) > best_mag) best_mag = std::abs(acc), best = k;
      }
      EXPECT_DOUBLE_EQ(best * c.fs_hz / n, high_v ? 10.0 : 6.0);
    }
  }
}

TEST(SynthTest, BalancedLabelledDeterministicAndBounded) {
  SynthConfig c;
  c.seed = 7;
  const PortableDataset a = SynthGenerate(c), b = SynthGenerate(c);
  EXPECT_EQ(EncodePortable(a), EncodePortable(b));
  c.seed = 8;
  EXPECT_NE(EncodePortable(SynthGenerate(c)), EncodePortable(a));
  EXPECT_EQ(a.trials.size(), 64u);
  EXPECT_EQ(a.n_samples(), 512u);
  EXPECT_EQ(a.channel_names.front(), "Fp1");
  std::array<int, 4> counts{};
  for (const Trial& t : a.trials) {
    ++counts[static_cast<int>(t.labels.vaq)];
    EXPECT_GE(t.labels.sam_valence, 1.0f);
    EXPECT_LE(t.labels.sam_valence, 9.0f);
    EXPECT_EQ(QuadrantFromRatings(t.labels.sam_valence, t.labels.sam_arousal), t.labels.vaq);
    const bool high_a = t.labels.vaq == Quadrant::kQ1 || t.labels.vaq == Quadrant::kQ2;
    const double bound = (high_a ? 2.0 : 1.0) + 6 * c.noise_sigma;
    for (float v : t.samples) EXPECT_LE(std::abs(v), bound + 1e-6);
  }
  EXPECT_EQ(counts, (std::array<int, 4>{16, 16, 16, 16}));
  SynthConfig bad;
  bad.n_channels = 0;
  EXPECT_THROW(SynthGenerate(bad), Error);
}

}  // namespace
}  // namespace eegvit
