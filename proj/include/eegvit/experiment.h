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


#ifndef EEGVIT_EXPERIMENT_H_
#define EEGVIT_EXPERIMENT_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eegvit/channels.h"
#include "eegvit/cwt.h"
#include "eegvit/dataset.h"
#include "eegvit/folds.h"
#include "eegvit/model.h"
#include "eegvit/raster.h"
#include "eegvit/training.h"

namespace eegvit {

enum class LabelSource { kVaq, kSam, kSamContinuous };

std::string_view LabelSourceName(LabelSource source);

// Trial -> model input: per-channel z-score, Morlet CWT magnitude, min-max
// normalization, bilinear resize.
struct PreprocessConfig {
  double f_min_hz = kDefaultFMinHz;
  double f_max_hz = kDefaultFMaxHz;
  std::size_t n_scales = kDefaultScales;
  double omega0 = kDefaultOmega0;
  std::size_t image_h = kDefaultImageSize;
  std::size_t image_w = kDefaultImageSize;
};

// Raster of one channel of one trial.
RasterImage ChannelRaster(const Trial& trial, std::size_t channel, const CwtPlan& plan,
                          const PreprocessConfig& config);

// Images for every trial, each [subset size x image_h x image_w]. Channels are
// processed on up to `jobs` threads; the result does not depend on jobs.
struct PreparedInputs {
  std::size_t n_channels = 0;
  std::size_t image_h = 0;
  std::size_t image_w = 0;
  std::vector<std::vector<double>> images;
};

PreparedInputs PrepareInputs(const PortableDataset& dataset, const ChannelSubset& subset,
                             const PreprocessConfig& config, std::size_t jobs = 1);

struct Targets {
  HeadKind task = HeadKind::kClassify4;
  std::vector<int> classes;
  std::vector<std::array<double, 2>> values;
};

// kVaq / kSam give quadrant classes; kSamContinuous gives (valence, arousal).
Targets MakeTargets(const PortableDataset& dataset, LabelSource source);

// Reassigns labels across trials with a seeded shuffle (null-experiment
// control).
Targets PermuteTargets(const Targets& targets, std::uint64_t seed);

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double lr = 0.0;
  double train_loss = 0.0;
  double test_loss = 0.0;
  std::optional<double> validation_loss;
  double metric = 0.0;  // accuracy or RMSE on the test fold
};

struct FoldResult {
  int fold_index = 0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  double metric = 0.0;
  std::vector<EpochRecord> history;
  std::size_t stopped_epoch = 0;
  std::size_t best_epoch = 0;
  ModelParams best_params;
};

struct ExperimentReport {
  std::string subset;
  std::size_t n_channels = 0;
  LabelSource labels = LabelSource::kVaq;
  HeadKind task = HeadKind::kClassify4;
  FoldMode fold_mode = FoldMode::kRandomTrial;
  std::uint64_t seed = 0;
  std::vector<FoldResult> folds;
  double mean = 0.0;
  double threshold = 0.0;
  bool relevant = false;

  std::vector<double> FoldMetrics() const;
};

// Trains one fold: early stopping on the test loss (or on a held-out part of
// the training indices when validation_fraction > 0), best-epoch
// restoration, then evaluation on the test indices.
FoldResult TrainFold(const PreparedInputs& inputs, const Targets& targets,
                     std::span<const std::size_t> train_indices,
                     std::span<const std::size_t> test_indices, int fold_index,
                     const TrainConfig& train, const ModelConfig& model);

struct RunOptions {
  std::size_t jobs = 1;  // folds trained concurrently
};

// Cross-validated protocol over a fold assignment. Reports do not depend on
// jobs.
ExperimentReport RunExperiment(const PreparedInputs& inputs, const Targets& targets,
                               const FoldAssignment& folds, const TrainConfig& train,
                               const ModelConfig& model, const RunOptions& options = {});

// Convenience over PrepareInputs + MakeTargets + RunExperiment.
ExperimentReport RunExperiment(const PortableDataset& dataset, const ChannelSubset& subset,
                               LabelSource labels, const FoldAssignment& folds,
                               const TrainConfig& train, const ModelConfig& model,
                               const PreprocessConfig& preprocess,
                               const RunOptions& options = {});

// Gathers the given trials into a batch view over prepared images.
Batch MakeBatch(const PreparedInputs& inputs, const Targets& targets,
                std::span<const std::size_t> indices);

}  // namespace eegvit

#endif  // EEGVIT_EXPERIMENT_H_
