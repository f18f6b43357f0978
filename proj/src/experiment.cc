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


#include "eegvit/experiment.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "eegvit/error.h"
#include "eegvit/rng.h"
#include "eegvit/signal.h"

namespace eegvit {
namespace {

// Runs fn(i) for i in [0, n) on up to `jobs` threads. The first exception (by
// index) is rethrown after all workers finish.
template <typename Fn>
void ParallelFor(std::size_t n, std::size_t jobs, Fn&& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  std::vector<std::exception_ptr> errors(n);
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : workers) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Per-purpose stream tags for Rng::Mix.
constexpr std::uint64_t kInitTag = 0x1000;
constexpr std::uint64_t kShuffleTag = 0x2000;
constexpr std::uint64_t kValidationTag = 0x3000;
constexpr std::uint64_t kDropoutTag = 0x4000;

}  // namespace

std::string_view LabelSourceName(LabelSource source) {
  switch (source) {
    case LabelSource::kVaq: return "VAQ";
    case LabelSource::kSam: return "SAM";
    case LabelSource::kSamContinuous: return "SAM-continuous";
  }
  return "?";
}

RasterImage ChannelRaster(const Trial& trial, std::size_t channel, const CwtPlan& plan,
                          const PreprocessConfig& config) {
  const std::vector<double> normalized = ZScoreNormalize(trial.channel(channel));
  const CoefficientMatrix coeffs = plan.Forward(normalized);
  const Scaleogram sg = MakeScaleogram(coeffs, plan.grid(), "");
  return Rasterize(sg, config.image_h, config.image_w);
}

PreparedInputs PrepareInputs(const PortableDataset& dataset, const ChannelSubset& subset,
                             const PreprocessConfig& config, std::size_t jobs) {
  if (dataset.trials.empty()) throw Error(ErrorKind::kEmptyData, "dataset has no trials");
  const std::vector<std::size_t> positions = SubsetPositions(subset, dataset.channel_names);
  const ScaleGrid grid = MakeScaleGrid(config.f_min_hz, config.f_max_hz, config.n_scales,
                                       dataset.sample_rate_hz, config.omega0);
  const CwtPlan plan(grid, dataset.n_samples());

  PreparedInputs out;
  out.n_channels = positions.size();
  out.image_h = config.image_h;
  out.image_w = config.image_w;
  const std::size_t plane = config.image_h * config.image_w;
  out.images.assign(dataset.trials.size(), std::vector<double>(out.n_channels * plane));

  const std::size_t work = dataset.trials.size() * positions.size();
  ParallelFor(work, jobs, [&](std::size_t item) {
    const std::size_t trial = item / positions.size();
    const std::size_t slot = item % positions.size();
    const RasterImage raster =
        ChannelRaster(dataset.trials[trial], positions[slot], plan, config);
    std::copy(raster.pixels.begin(), raster.pixels.end(),
              out.images[trial].begin() + static_cast<std::ptrdiff_t>(slot * plane));
  });
  return out;
}

Targets MakeTargets(const PortableDataset& dataset, LabelSource source) {
  Targets t;
  t.task = source == LabelSource::kSamContinuous ? HeadKind::kRegress2 : HeadKind::kClassify4;
  for (const Trial& trial : dataset.trials) {
    const Labels& l = trial.labels;
    switch (source) {
      case LabelSource::kVaq:
        t.classes.push_back(static_cast<int>(l.vaq));
        break;
      case LabelSource::kSam:
        t.classes.push_back(static_cast<int>(QuadrantFromRatings(l.sam_valence, l.sam_arousal)));
        break;
      case LabelSource::kSamContinuous:
        t.values.push_back({l.sam_valence, l.sam_arousal});
        break;
    }
  }
  return t;
}

Targets PermuteTargets(const Targets& targets, std::uint64_t seed) {
  Targets out = targets;
  Rng rng(seed);
  if (!out.classes.empty()) rng.Shuffle(std::span<int>(out.classes));
  if (!out.values.empty()) rng.Shuffle(std::span<std::array<double, 2>>(out.values));
  return out;
}

std::vector<double> ExperimentReport::FoldMetrics() const {
  std::vector<double> out;
  for (const FoldResult& f : folds) out.push_back(f.metric);
  return out;
}

Batch MakeBatch(const PreparedInputs& inputs, const Targets& targets,
                std::span<const std::size_t> indices) {
  Batch batch;
  for (std::size_t i : indices) {
    batch.images.emplace_back(inputs.images.at(i));
    if (targets.task == HeadKind::kClassify4) {
      batch.classes.push_back(targets.classes.at(i));
    } else {
      batch.values.push_back(targets.values.at(i));
    }
  }
  return batch;
}

namespace {

struct Evaluation {
  double loss;
  double metric;
};

Evaluation Evaluate(const ModelParams& params, const ModelConfig& model,
                    const TrainConfig& train, const Batch& data) {
  const Tensor outputs = Predict(params, model, data, std::max<std::size_t>(train.batch_size, 16));
  const double loss = BatchLoss(outputs, data, model.head, train.huber_delta);
  const double metric = model.head == HeadKind::kClassify4
                            ? ClassificationAccuracy(outputs, data.classes)
                            : PooledRmse(outputs, data.values);
  return {loss, metric};
}

}  // namespace

FoldResult TrainFold(const PreparedInputs& inputs, const Targets& targets,
                     std::span<const std::size_t> train_indices,
                     std::span<const std::size_t> test_indices, int fold_index,
                     const TrainConfig& train, const ModelConfig& model) {
  train.Validate();
  model.Validate();
  if (model.head != targets.task) {
    throw Error(ErrorKind::kBadConfig, "model head does not match the label source");
  }
  if (model.n_channels != inputs.n_channels || model.image_h != inputs.image_h ||
      model.image_w != inputs.image_w) {
    throw Error(ErrorKind::kBadConfig, "model input shape does not match prepared images");
  }
  if (train_indices.empty() || test_indices.empty()) {
    throw Error(ErrorKind::kEmptyData, "fold has an empty train or test side");
  }

  const std::uint64_t fold_tag = static_cast<std::uint64_t>(fold_index);
  std::vector<std::size_t> fit(train_indices.begin(), train_indices.end());
  std::vector<std::size_t> validation;
  if (train.validation_fraction > 0.0) {
    Rng split(Rng::Mix(train.seed, kValidationTag + fold_tag));
    split.Shuffle(std::span<std::size_t>(fit));
    const auto n_val = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(train.validation_fraction * fit.size())), 1,
        fit.size() - 1);
    validation.assign(fit.begin(), fit.begin() + static_cast<std::ptrdiff_t>(n_val));
    fit.erase(fit.begin(), fit.begin() + static_cast<std::ptrdiff_t>(n_val));
    std::sort(validation.begin(), validation.end());
    std::sort(fit.begin(), fit.end());
  }

  const Batch test_batch = MakeBatch(inputs, targets, test_indices);
  const Batch validation_batch = MakeBatch(inputs, targets, validation);

  FoldResult result;
  result.fold_index = fold_index;
  result.n_train = train_indices.size();
  result.n_test = test_indices.size();

  ModelParams params = InitParams(model, Rng::Mix(train.seed, kInitTag + fold_tag));
  AdamState adam = MakeAdamState(model);
  result.best_params = params;
  double best_loss = std::numeric_limits<double>::infinity();
  std::vector<double> watched_losses;
  Rng shuffle(Rng::Mix(train.seed, kShuffleTag + fold_tag));
  const std::uint64_t dropout_base = Rng::Mix(train.seed, kDropoutTag + fold_tag);

  for (std::size_t epoch = 0; epoch < train.max_epochs; ++epoch) {
    const double lr = ScheduledLr(train, epoch);
    shuffle.Shuffle(std::span<std::size_t>(fit));
    double loss_sum = 0.0;
    for (std::size_t begin = 0; begin < fit.size(); begin += train.batch_size) {
      const std::size_t end = std::min(fit.size(), begin + train.batch_size);
      const Batch batch =
          MakeBatch(inputs, targets, std::span<const std::size_t>(fit).subspan(begin, end - begin));
      const LossAndGradient lg = ComputeLossAndGradient(
          batch, params, model, train, true, Rng::Mix(dropout_base, adam.step));
      AdamStep(params, lg.grads, adam, lr, train);
      loss_sum += lg.loss * static_cast<double>(end - begin);
    }

    EpochRecord rec;
    rec.epoch = epoch + 1;
    rec.lr = lr;
    rec.train_loss = loss_sum / static_cast<double>(fit.size());
    if (!std::isfinite(rec.train_loss)) {
      throw Error(ErrorKind::kNonFinite, "fold " + std::to_string(fold_index + 1) +
                                             " diverged at epoch " + std::to_string(rec.epoch));
    }
    const Evaluation test_eval = Evaluate(params, model, train, test_batch);
    rec.test_loss = test_eval.loss;
    rec.metric = test_eval.metric;
    double watched = rec.test_loss;
    if (!validation.empty()) {
      rec.validation_loss = Evaluate(params, model, train, validation_batch).loss;
      watched = *rec.validation_loss;
    }
    result.history.push_back(rec);
    watched_losses.push_back(watched);
    if (watched < best_loss) {
      best_loss = watched;
      result.best_params = params;
      result.best_epoch = rec.epoch;
      result.metric = rec.metric;
    }
    result.stopped_epoch = rec.epoch;
    if (EarlyStopCheck(watched_losses, train.patience)) break;
  }
  return result;
}

ExperimentReport RunExperiment(const PreparedInputs& inputs, const Targets& targets,
                               const FoldAssignment& folds, const TrainConfig& train,
                               const ModelConfig& model, const RunOptions& options) {
  if (folds.fold_of.size() != inputs.images.size()) {
    throw Error(ErrorKind::kBadShape, "fold assignment does not cover the dataset");
  }
  ExperimentReport report;
  report.n_channels = inputs.n_channels;
  report.task = model.head;
  report.fold_mode = folds.mode;
  report.seed = train.seed;
  report.folds.resize(static_cast<std::size_t>(folds.k));

  ParallelFor(report.folds.size(), options.jobs, [&](std::size_t f) {
    const int fold = static_cast<int>(f);
    const std::vector<std::size_t> train_idx = folds.TrainIndices(fold);
    const std::vector<std::size_t> test_idx = folds.TestIndices(fold);
    report.folds[f] = TrainFold(inputs, targets, train_idx, test_idx, fold, train, model);
  });

  double sum = 0.0;
  for (const FoldResult& f : report.folds) sum += f.metric;
  report.mean = sum / static_cast<double>(report.folds.size());
  report.threshold = RelevanceThreshold(model.head);
  report.relevant = IsRelevant(model.head, report.mean);
  return report;
}

ExperimentReport RunExperiment(const PortableDataset& dataset, const ChannelSubset& subset,
                               LabelSource labels, const FoldAssignment& folds,
                               const TrainConfig& train, const ModelConfig& model,
                               const PreprocessConfig& preprocess, const RunOptions& options) {
  const PreparedInputs inputs = PrepareInputs(dataset, subset, preprocess, options.jobs);
  ExperimentReport report =
      RunExperiment(inputs, MakeTargets(dataset, labels), folds, train, model, options);
  report.subset = subset.name;
  report.labels = labels;
  return report;
}

}  // namespace eegvit
