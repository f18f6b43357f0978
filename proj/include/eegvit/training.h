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


#ifndef EEGVIT_TRAINING_H_
#define EEGVIT_TRAINING_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "eegvit/model.h"

namespace eegvit {

enum class SchedulerKind { kCosineDecay, kStepDecay };

std::string_view SchedulerName(SchedulerKind kind);
SchedulerKind ParseScheduler(std::string_view name);

struct TrainConfig {
  double lr = 1e-4;
  SchedulerKind scheduler = SchedulerKind::kCosineDecay;
  double final_lr_fraction = 0.01;  // cosine: lr decays to this fraction
  std::size_t step_epochs = 10;     // step: decay period
  double step_gamma = 0.5;          // step: decay factor
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::size_t batch_size = 8;
  std::size_t max_epochs = 50;
  std::size_t patience = 5;
  std::uint64_t seed = 0;
  double huber_delta = 1.0;
  // Fraction of each training fold held out for early stopping. Zero means
  // early stopping watches the test fold's loss.
  double validation_fraction = 0.0;

  void Validate() const;

  // Patience 5 for classification, 10 for regression.
  static TrainConfig ForTask(HeadKind head);
};

// -log softmax(logits)[target] with max subtraction. grad, when given,
// receives dloss/dlogits.
double CrossEntropy(std::span<const double> logits, int target,
                    std::span<double> grad = {});

// Mean over components of 0.5 e^2 (|e| <= delta) or delta (|e| - delta / 2).
double Huber(std::span<const double> pred, std::span<const double> target, double delta,
             std::span<double> grad = {});

// Learning rate for a 0-based epoch.
double ScheduledLr(const TrainConfig& config, std::size_t epoch);

struct AdamState {
  ModelParams m;
  ModelParams v;
  std::size_t step = 0;
};

AdamState MakeAdamState(const ModelConfig& config);

// One bias-corrected Adam update at learning rate lr. Advances state.step
// and throws kNonFinite if a gradient is not finite.
void AdamStep(ModelParams& params, const ModelParams& grads, AdamState& state, double lr,
              const TrainConfig& config);

// True when each of the last `patience` losses is strictly above the minimum
// of the whole history.
bool EarlyStopCheck(std::span<const double> test_losses, std::size_t patience);

// Index of the largest value; ties go to the lowest index.
std::size_t ArgMax(std::span<const double> values);

struct LossAndGradient {
  double loss = 0.0;  // mean over the batch
  Tensor outputs;
  ModelParams grads;
};

// Forward + loss + backward for one batch; the loss is averaged over the
// batch. loss_scale multiplies the loss (and therefore every gradient).
LossAndGradient ComputeLossAndGradient(const Batch& batch, const ModelParams& params,
                                       const ModelConfig& model, const TrainConfig& train,
                                       bool train_mode, std::uint64_t dropout_seed,
                                       double loss_scale = 1.0);

// Mean loss of a batch without gradients.
double BatchLoss(const Tensor& outputs, const Batch& batch, HeadKind head,
                 double huber_delta);

// Outputs for every item of data, evaluated in chunks of batch_size with
// dropout off. Throws kEmptyData.
Tensor Predict(const ModelParams& params, const ModelConfig& config, const Batch& data,
               std::size_t batch_size = 16);

double ClassificationAccuracy(const Tensor& logits, std::span<const int> labels);
// sqrt(mean over all 2N squared errors).
double PooledRmse(const Tensor& predictions, std::span<const std::array<double, 2>> targets);

// Evaluate a model over a whole data set in batches; throws kEmptyData.
double EvaluateClassification(const ModelParams& params, const ModelConfig& config,
                              const Batch& data, std::size_t batch_size = 16);
double EvaluateRegression(const ModelParams& params, const ModelConfig& config,
                          const Batch& data, std::size_t batch_size = 16);

// Product of binary valence and arousal accuracies; throws kOutOfRange.
double CombinedBinaryAccuracy(double acc_valence, double acc_arousal);

// Twice chance for four classes (0.50); half the reported expected random
// RMSE for regression (1.6995).
double RelevanceThreshold(HeadKind task);
bool IsRelevant(HeadKind task, double metric);

// Expected pooled RMSE of a predictor drawing uniformly from [1, 9]:
//   sqrt(mean over label components y of (64/12 + (5 - y)^2)).
double BaselineRandomRmse(std::span<const std::array<double, 2>> labels);

}  // namespace eegvit

#endif  // EEGVIT_TRAINING_H_
