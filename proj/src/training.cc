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


#include "eegvit/training.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "eegvit/error.h"

namespace eegvit {

std::string_view SchedulerName(SchedulerKind kind) {
  return kind == SchedulerKind::kCosineDecay ? "cosine" : "step";
}

SchedulerKind ParseScheduler(std::string_view name) {
  if (name == "cosine") return SchedulerKind::kCosineDecay;
  if (name == "step") return SchedulerKind::kStepDecay;
  throw Error(ErrorKind::kBadConfig, "unknown scheduler '" + std::string(name) + "'");
}

void TrainConfig::Validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::kBadConfig, msg); };
  if (!(lr > 0.0)) fail("lr must be > 0");
  if (patience < 1) fail("patience must be >= 1");
  if (!(beta1 > 0.0 && beta1 < 1.0 && beta2 > 0.0 && beta2 < 1.0)) fail("betas in (0, 1)");
  if (!(eps > 0.0)) fail("eps must be > 0");
  if (batch_size < 1 || max_epochs < 1) fail("batch_size and max_epochs must be >= 1");
  if (!(huber_delta > 0.0)) fail("huber_delta must be > 0");
  if (!(validation_fraction >= 0.0 && validation_fraction < 1.0)) {
    fail("validation_fraction must be in [0, 1)");
  }
  if (!(final_lr_fraction > 0.0 && final_lr_fraction <= 1.0)) {
    fail("final_lr_fraction must be in (0, 1]");
  }
  if (step_epochs < 1 || !(step_gamma > 0.0 && step_gamma <= 1.0)) {
    fail("step scheduler needs step_epochs >= 1 and gamma in (0, 1]");
  }
}

TrainConfig TrainConfig::ForTask(HeadKind head) {
  TrainConfig c;
  c.patience = head == HeadKind::kClassify4 ? 5 : 10;
  return c;
}

double CrossEntropy(std::span<const double> logits, int target, std::span<double> grad) {
  if (target < 0 || static_cast<std::size_t>(target) >= logits.size()) {
    throw Error(ErrorKind::kOutOfRange, "class target out of range");
  }
  const double mx = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double z : logits) sum += std::exp(z - mx);
  const double log_sum = std::log(sum);
  if (!grad.empty()) {
    for (std::size_t i = 0; i < logits.size(); ++i) {
      grad[i] = std::exp(logits[i] - mx - log_sum);
    }
    grad[static_cast<std::size_t>(target)] -= 1.0;
  }
  return log_sum - (logits[static_cast<std::size_t>(target)] - mx);
}

double Huber(std::span<const double> pred, std::span<const double> target, double delta,
             std::span<double> grad) {
  const double inv_n = 1.0 / static_cast<double>(pred.size());
  double loss = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double e = pred[i] - target[i];
    const double a = std::abs(e);
    if (a <= delta) {
      loss += 0.5 * e * e;
      if (!grad.empty()) grad[i] = e * inv_n;
    } else {
      loss += delta * (a - 0.5 * delta);
      if (!grad.empty()) grad[i] = (e > 0 ? delta : -delta) * inv_n;
    }
  }
  return loss * inv_n;
}

double ScheduledLr(const TrainConfig& c, std::size_t epoch) {
  if (c.scheduler == SchedulerKind::kStepDecay) {
    return c.lr * std::pow(c.step_gamma, static_cast<double>(epoch / c.step_epochs));
  }
  const double lo = c.lr * c.final_lr_fraction;
  const double span = c.max_epochs > 1 ? static_cast<double>(c.max_epochs - 1) : 1.0;
  const double progress = std::min(1.0, static_cast<double>(epoch) / span);
  return lo + 0.5 * (c.lr - lo) * (1.0 + std::cos(std::numbers::pi * progress));
}

AdamState MakeAdamState(const ModelConfig& config) {
  return {ZeroParams(config), ZeroParams(config), 0};
}

void AdamStep(ModelParams& params, const ModelParams& grads, AdamState& state, double lr,
              const TrainConfig& c) {
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(c.beta1, t);
  const double correction2 = 1.0 - std::pow(c.beta2, t);

  std::vector<const Tensor*> g_list;
  grads.ForEach([&](const std::string&, const Tensor& g) { g_list.push_back(&g); });
  std::vector<Tensor*> m_list, v_list;
  state.m.ForEach([&](const std::string&, Tensor& m) { m_list.push_back(&m); });
  state.v.ForEach([&](const std::string&, Tensor& v) { v_list.push_back(&v); });

  std::size_t idx = 0;
  params.ForEach([&](const std::string& name, Tensor& p) {
    const Tensor& g = *g_list[idx];
    Tensor& m = *m_list[idx];
    Tensor& v = *v_list[idx];
    ++idx;
    if (!g.SameShape(p)) throw Error(ErrorKind::kBadShape, "gradient shape for " + name);
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double gi = g.data[i];
      if (!std::isfinite(gi)) throw Error(ErrorKind::kNonFinite, "gradient of " + name);
      m.data[i] = c.beta1 * m.data[i] + (1.0 - c.beta1) * gi;
      v.data[i] = c.beta2 * v.data[i] + (1.0 - c.beta2) * gi * gi;
      const double m_hat = m.data[i] / correction1;
      const double v_hat = v.data[i] / correction2;
      p.data[i] -= lr * m_hat / (std::sqrt(v_hat) + c.eps);
    }
  });
}

bool EarlyStopCheck(std::span<const double> losses, std::size_t patience) {
  if (losses.empty() || patience == 0 || losses.size() <= patience) return false;
  const double best = *std::min_element(losses.begin(), losses.end());
  return std::all_of(losses.end() - static_cast<std::ptrdiff_t>(patience), losses.end(),
                     [best](double l) { return l > best; });
}

std::size_t ArgMax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

namespace {

void CheckTargets(const Batch& batch, HeadKind head) {
  if (head == HeadKind::kClassify4 && batch.classes.size() != batch.size()) {
    throw Error(ErrorKind::kBadShape, "batch lacks class targets");
  }
  if (head == HeadKind::kRegress2 && batch.values.size() != batch.size()) {
    throw Error(ErrorKind::kBadShape, "batch lacks regression targets");
  }
}

// Mean loss; fills d_outputs with d(mean loss)/d(outputs) when non-null.
double LossWithGradient(const Tensor& outputs, const Batch& batch, HeadKind head,
                        double huber_delta, Tensor* d_outputs) {
  CheckTargets(batch, head);
  const std::size_t n = outputs.rows(), k = outputs.cols();
  const double inv_n = 1.0 / static_cast<double>(n);
  double total = 0.0;
  std::vector<double> grad(k);
  for (std::size_t b = 0; b < n; ++b) {
    std::span<const double> row(outputs.row(b), k);
    std::span<double> g = d_outputs ? std::span<double>(grad) : std::span<double>();
    if (head == HeadKind::kClassify4) {
      total += CrossEntropy(row, batch.classes[b], g);
    } else {
      total += Huber(row, batch.values[b], huber_delta, g);
    }
    if (d_outputs) {
      for (std::size_t j = 0; j < k; ++j) (*d_outputs)(b, j) = grad[j] * inv_n;
    }
  }
  return total * inv_n;
}

Batch Slice(const Batch& data, std::size_t begin, std::size_t end) {
  Batch out;
  out.images.assign(data.images.begin() + static_cast<std::ptrdiff_t>(begin),
                    data.images.begin() + static_cast<std::ptrdiff_t>(end));
  if (!data.classes.empty()) {
    out.classes.assign(data.classes.begin() + static_cast<std::ptrdiff_t>(begin),
                       data.classes.begin() + static_cast<std::ptrdiff_t>(end));
  }
  if (!data.values.empty()) {
    out.values.assign(data.values.begin() + static_cast<std::ptrdiff_t>(begin),
                      data.values.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return out;
}

}  // namespace

Tensor Predict(const ModelParams& params, const ModelConfig& config, const Batch& data,
               std::size_t batch_size) {
  if (data.size() == 0) throw Error(ErrorKind::kEmptyData, "no trials to evaluate");
  Tensor all = Tensor::Matrix(data.size(), config.output_dim());
  for (std::size_t begin = 0; begin < data.size(); begin += batch_size) {
    const std::size_t end = std::min(data.size(), begin + batch_size);
    const ForwardResult fr = Forward(Slice(data, begin, end), params, config);
    std::copy(fr.outputs.data.begin(), fr.outputs.data.end(),
              all.data.begin() + static_cast<std::ptrdiff_t>(begin * config.output_dim()));
  }
  return all;
}

LossAndGradient ComputeLossAndGradient(const Batch& batch, const ModelParams& params,
                                       const ModelConfig& model, const TrainConfig& train,
                                       bool train_mode, std::uint64_t dropout_seed,
                                       double loss_scale) {
  ForwardOptions options;
  options.train_mode = train_mode;
  options.dropout_seed = dropout_seed;
  options.keep_cache = true;
  ForwardResult fr = Forward(batch, params, model, options);
  Tensor d_outputs = Tensor::Matrix(fr.outputs.rows(), fr.outputs.cols());
  LossAndGradient out;
  out.loss = loss_scale *
             LossWithGradient(fr.outputs, batch, model.head, train.huber_delta, &d_outputs);
  if (!std::isfinite(out.loss)) throw Error(ErrorKind::kNonFinite, "training loss diverged");
  if (loss_scale != 1.0) {
    for (double& g : d_outputs.data) g *= loss_scale;
  }
  out.grads = Backward(fr, d_outputs, params, model);
  out.outputs = std::move(fr.outputs);
  return out;
}

double BatchLoss(const Tensor& outputs, const Batch& batch, HeadKind head,
                 double huber_delta) {
  return LossWithGradient(outputs, batch, head, huber_delta, nullptr);
}

double ClassificationAccuracy(const Tensor& logits, std::span<const int> labels) {
  if (labels.empty()) throw Error(ErrorKind::kEmptyData, "no labels");
  std::size_t correct = 0;
  for (std::size_t b = 0; b < labels.size(); ++b) {
    const std::size_t pred = ArgMax(std::span<const double>(logits.row(b), logits.cols()));
    if (static_cast<int>(pred) == labels[b]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(labels.size());
}

double PooledRmse(const Tensor& predictions, std::span<const std::array<double, 2>> targets) {
  if (targets.empty()) throw Error(ErrorKind::kEmptyData, "no targets");
  double sum = 0.0;
  for (std::size_t b = 0; b < targets.size(); ++b) {
    for (std::size_t j = 0; j < 2; ++j) {
      const double e = predictions(b, j) - targets[b][j];
      sum += e * e;
    }
  }
  return std::sqrt(sum / static_cast<double>(2 * targets.size()));
}

double EvaluateClassification(const ModelParams& params, const ModelConfig& config,
                              const Batch& data, std::size_t batch_size) {
  if (config.head != HeadKind::kClassify4) {
    throw Error(ErrorKind::kBadConfig, "classification metric needs a Classify4 head");
  }
  CheckTargets(data, config.head);
  return ClassificationAccuracy(Predict(params, config, data, batch_size), data.classes);
}

double EvaluateRegression(const ModelParams& params, const ModelConfig& config,
                          const Batch& data, std::size_t batch_size) {
  if (config.head != HeadKind::kRegress2) {
    throw Error(ErrorKind::kBadConfig, "regression metric needs a Regress2 head");
  }
  CheckTargets(data, config.head);
  return PooledRmse(Predict(params, config, data, batch_size), data.values);
}

double CombinedBinaryAccuracy(double acc_valence, double acc_arousal) {
  for (double a : {acc_valence, acc_arousal}) {
    if (!(a >= 0.0 && a <= 1.0)) throw Error(ErrorKind::kOutOfRange, "accuracy outside [0, 1]");
  }
  return acc_valence * acc_arousal;
}

double RelevanceThreshold(HeadKind task) {
  return task == HeadKind::kClassify4 ? 0.50 : 1.6995;
}

bool IsRelevant(HeadKind task, double metric) {
  return task == HeadKind::kClassify4 ? metric > RelevanceThreshold(task)
                                      : metric < RelevanceThreshold(task);
}

double BaselineRandomRmse(std::span<const std::array<double, 2>> labels) {
  if (labels.empty()) throw Error(ErrorKind::kEmptyData, "no labels");
  constexpr double kUniformVariance = 64.0 / 12.0;  // U[1, 9]
  double sum = 0.0;
  for (const auto& pair : labels) {
    for (double y : pair) sum += kUniformVariance + (5.0 - y) * (5.0 - y);
  }
  return std::sqrt(sum / static_cast<double>(2 * labels.size()));
}

}  // namespace eegvit
