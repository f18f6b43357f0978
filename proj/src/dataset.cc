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


#include "eegvit/dataset.h"

#include <zlib.h>

#include <nlohmann/json.hpp>
#include <sstream>

#include "eegvit/binary_io.h"
#include "eegvit/error.h"

namespace eegvit {
namespace {

constexpr char kMagic[4] = {'E', 'E', 'G', 'P'};
constexpr std::size_t kFixedHeaderBytes = 4 + 2 + 4 + 2 + 4 + 4;
constexpr std::size_t kTrialHeaderBytes = 2 + 2 + 1 + 4 + 4;

std::uint32_t Crc32(std::span<const std::uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed large buffers in chunks.
  std::size_t offset = 0;
  while (offset < bytes.size()) {
    const std::size_t chunk = std::min<std::size_t>(bytes.size() - offset, 1u << 30);
    crc = crc32(crc, bytes.data() + offset, static_cast<uInt>(chunk));
    offset += chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

}  // namespace

void PortableDataset::Validate() const {
  ValidateChannelNames(channel_names, channel_names.size());
  if (!(sample_rate_hz > 0.0)) throw Error(ErrorKind::kBadShape, "sample rate must be > 0");
  for (const Trial& t : trials) {
    if (t.n_channels != n_channels() || t.n_samples != n_samples()) {
      throw Error(ErrorKind::kBadShape, "trials do not share one channel layout");
    }
    ValidateTrial(t);
  }
  if (source == "deap" && trials.size() != 32 * 40) {
    throw Error(ErrorKind::kBadShape,
                "DEAP dataset must hold 1280 trials, found " + std::to_string(trials.size()));
  }
}

std::vector<std::uint8_t> EncodePortable(const PortableDataset& ds) {
  ds.Validate();
  io::ByteWriter w;
  w.Raw(kMagic, 4);
  w.U16(kPortableVersion);
  w.U32(static_cast<std::uint32_t>(ds.trials.size()));
  w.U16(static_cast<std::uint16_t>(ds.n_channels()));
  w.U32(static_cast<std::uint32_t>(ds.n_samples()));
  w.F32(static_cast<float>(ds.sample_rate_hz));
  const nlohmann::ordered_json meta = {{"channel_names", ds.channel_names},
                                       {"source", ds.source},
                                       {"format_version", kPortableVersion}};
  const std::string meta_text = meta.dump();
  w.U32(static_cast<std::uint32_t>(meta_text.size()));
  w.Bytes(meta_text);
  for (const Trial& t : ds.trials) {
    w.U16(static_cast<std::uint16_t>(t.participant_id));
    w.U16(static_cast<std::uint16_t>(t.video_id));
    w.U8(static_cast<std::uint8_t>(t.labels.vaq));
    w.F32(static_cast<float>(t.labels.sam_valence));
    w.F32(static_cast<float>(t.labels.sam_arousal));
    w.F32Array(t.samples);
  }
  w.U32(Crc32(w.bytes()));
  return std::move(w.bytes());
}

PortableDataset DecodePortable(std::span<const std::uint8_t> bytes) {
  io::ByteReader r(bytes);
  if (bytes.size() < 4 || r.Bytes(4) != std::string_view(kMagic, 4)) {
    throw Error(ErrorKind::kBadMagic, "not an EEGP file");
  }
  const std::uint16_t version = r.U16();
  if (version != kPortableVersion) {
    throw Error(ErrorKind::kVersionMismatch, "EEGP version " + std::to_string(version) +
                                                 ", expected " +
                                                 std::to_string(kPortableVersion));
  }
  PortableDataset ds;
  ds.format_version = version;
  const std::size_t n_trials = r.U32();
  const std::size_t n_channels = r.U16();
  const std::size_t n_samples = r.U32();
  ds.sample_rate_hz = r.F32();
  const std::size_t meta_len = r.U32();
  const std::string meta_text = r.Bytes(meta_len);

  // Check the declared sizes against the payload before touching it.
  std::size_t per_trial = 0, payload = 0, expected = 0;
  if (__builtin_mul_overflow(n_channels * 4, n_samples, &per_trial) ||
      __builtin_add_overflow(per_trial, kTrialHeaderBytes, &per_trial) ||
      __builtin_mul_overflow(n_trials, per_trial, &payload) ||
      __builtin_add_overflow(payload, kFixedHeaderBytes + 4 + meta_len + 4, &expected)) {
    throw Error(ErrorKind::kTruncated, "declared dimensions exceed any possible payload");
  }
  if (bytes.size() < expected) {
    throw Error(ErrorKind::kTruncated, "file has " + std::to_string(bytes.size()) +
                                           " bytes, header declares " +
                                           std::to_string(expected));
  }
  if (bytes.size() > expected) {
    throw Error(ErrorKind::kBadShape, "declared dimensions leave " +
                                          std::to_string(bytes.size() - expected) +
                                          " unexplained trailing bytes");
  }
  std::uint32_t stored_crc;
  std::memcpy(&stored_crc, bytes.data() + expected - 4, 4);
  if (Crc32(bytes.first(expected - 4)) != stored_crc) {
    throw Error(ErrorKind::kChecksumMismatch, "EEGP CRC-32 does not match");
  }

  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(meta_text);
    ds.channel_names = meta.at("channel_names").get<std::vector<std::string>>();
    ds.source = meta.value("source", "unknown");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kBadShape, std::string("EEGP metadata: ") + e.what());
  }
  if (ds.channel_names.size() != n_channels) {
    throw Error(ErrorKind::kBadShape, "metadata channel names disagree with header");
  }

  ds.trials.resize(n_trials);
  for (Trial& t : ds.trials) {
    t.participant_id = r.U16();
    t.video_id = r.U16();
    t.labels.vaq = QuadrantFromCode(r.U8());
    t.labels.sam_valence = r.F32();
    t.labels.sam_arousal = r.F32();
    t.n_channels = n_channels;
    t.n_samples = n_samples;
    t.samples.resize(n_channels * n_samples);
    r.F32Array(t.samples);
  }
  ds.Validate();
  return ds;
}

void WritePortable(const PortableDataset& dataset, const std::filesystem::path& path) {
  io::WriteFileAtomic(path, EncodePortable(dataset));
}

PortableDataset ReadPortable(const std::filesystem::path& path) {
  return DecodePortable(io::ReadFile(path));
}

std::string LabelsCsv(const PortableDataset& dataset) {
  std::ostringstream out;
  out << "participant,video,vaq,sam_valence,sam_arousal\n";
  out.precision(9);
  for (const Trial& t : dataset.trials) {
    out << t.participant_id << ',' << t.video_id << ',' << QuadrantName(t.labels.vaq) << ','
        << t.labels.sam_valence << ',' << t.labels.sam_arousal << '\n';
  }
  return out.str();
}

}  // namespace eegvit
