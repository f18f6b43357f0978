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

#include <algorithm>
#include <numeric>

#include "eegvit/error.h"
#include "eegvit/experiment.h"
#include "eegvit/report.h"
#include "eegvit/synth.h"

namespace eegvit {
namespace {

class ExperimentFixture : public ::testing::Test {
 protected:
  void SetUp() override {
    SynthConfig sc;
    sc.n_participants = 3;
    sc.n_videos = 8;
    sc.n_channels = 4;
    sc.duration_s = 2.0;
    sc.seed = 21;
    data = SynthGenerate(sc);
    subset.name = "pair";
    subset.channel_names = {"F3", "AF3"};
    pre.n_scales = 24;
    pre.image_h = pre.image_w = 16;
    model.image_h = model.image_w = 16;
    model.patch_size = 8;
    model.embed_dim = 8;
    model.depth = 1;
    model.n_heads = 2;
    model.linformer_k = 4;
    model.mlp_hidden = 16;
    model.n_channels = 2;
    train.lr = 3e-3;
    train.max_epochs = 4;
    train.batch_size = 4;
    train.patience = 2;
    train.seed = 5;
  }

  FoldAssignment Folds(int k = 3) const {
    return MakeFolds(std::span<const Trial>(data.trials), k, 5, FoldMode::kRandomTrial);
  }

  PortableDataset data;
  ChannelSubset subset;
  PreprocessConfig pre;
  ModelConfig model;
  TrainConfig train;
};

TEST_F(ExperimentFixture, PreparedInputsIndependentOfJobs) {
  const PreparedInputs a = PrepareInputs(data, subset, pre, 1);
  const PreparedInputs b = PrepareInputs(data, subset, pre, 3);
  EXPECT_EQ(a.images, b.images);
  ASSERT_EQ(a.images.size(), data.trials.size());
  EXPECT_EQ(a.images[0].size(), 2u * 16 * 16);
  // Channel order follows the subset, not the dataset layout.
  ChannelSubset swapped = subset;
  std::swap(swapped.channel_names[0], swapped.channel_names[1]);
  const PreparedInputs s = PrepareInputs(data, swapped, pre, 1);
  EXPECT_TRUE(std::equal(s.images[0].begin(), s.images[0].begin() + 256, a.images[0].begin() + 256));
}

TEST_F(ExperimentFixture, ReportIsIndependentOfJobsAndConsistent) {
  const FoldAssignment folds = Folds();
  const ExperimentReport a =
      RunExperiment(data, subset, LabelSource::kVaq, folds, train, model, pre, {1});
  const ExperimentReport b =
      RunExperiment(data, subset, LabelSource::kVaq, folds, train, model, pre, {3});
  EXPECT_EQ(ReportJson(a), ReportJson(b));
  ASSERT_EQ(a.folds.size(), 3u);
  double sum = 0;
  std::size_t n_test = 0;
  for (const FoldResult& f : a.folds) {
    sum += f.metric;
    n_test += f.n_test;
    EXPECT_EQ(f.n_train + f.n_test, data.trials.size());
    EXPECT_LE(f.stopped_epoch - f.best_epoch, train.patience);
    EXPECT_GE(f.best_epoch, 1u);
    EXPECT_EQ(f.history.size(), f.stopped_epoch);
    EXPECT_DOUBLE_EQ(f.metric, f.history[f.best_epoch - 1].metric);
    for (const EpochRecord& e : f.history) EXPECT_TRUE(std::isfinite(e.train_loss));
  }
  EXPECT_EQ(n_test, data.trials.size());
  EXPECT_NEAR(a.mean, sum / 3.0, 1e-12);
  EXPECT_EQ(a.threshold, 0.5);
  EXPECT_EQ(a.relevant, a.mean > 0.5);
}

TEST_F(ExperimentFixture, LabelSourcesShareFolds) {
  const Targets vaq = MakeTargets(data, LabelSource::kVaq);
  const Targets sam = MakeTargets(data, LabelSource::kSam);
  // Synthetic SAM ratings agree with the stored quadrants.
  EXPECT_EQ(vaq.classes, sam.classes);
  const Targets cont = MakeTargets(data, LabelSource::kSamContinuous);
  EXPECT_EQ(cont.task, HeadKind::kRegress2);
  EXPECT_EQ(cont.values.size(), data.trials.size());
  const FoldAssignment folds = Folds();
  const ExperimentReport a =
      RunExperiment(data, subset, LabelSource::kVaq, folds, train, model, pre);
  const ExperimentReport b =
      RunExperiment(data, subset, LabelSource::kSam, folds, train, model, pre);
  EXPECT_EQ(a.FoldMetrics(), b.FoldMetrics());
  EXPECT_EQ(b.labels, LabelSource::kSam);
}

TEST_F(ExperimentFixture, PermutationKeepsClassCounts) {
  const Targets t = MakeTargets(data, LabelSource::kVaq);
  const Targets p = PermuteTargets(t, 13);
  auto a = t.classes, b = p.classes;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  EXPECT_EQ(a, b);
  EXPECT_NE(t.classes, p.classes);
  EXPECT_EQ(PermuteTargets(t, 13).classes, p.classes);
}

TEST_F(ExperimentFixture, RegressionWithValidationSplit) {
  model.head = HeadKind::kRegress2;
  train.validation_fraction = 0.25;
  const ExperimentReport r =
      RunExperiment(data, subset, LabelSource::kSamContinuous, Folds(), train, model, pre);
  EXPECT_EQ(r.task, HeadKind::kRegress2);
  EXPECT_EQ(r.threshold, 1.6995);
  for (const FoldResult& f : r.folds) {
    EXPECT_GT(f.metric, 0.0);
    for (const EpochRecord& e : f.history) EXPECT_TRUE(e.validation_loss.has_value());
  }
}

TEST_F(ExperimentFixture, MismatchedHeadIsRejected) {
  model.head = HeadKind::kRegress2;
  EXPECT_THROW(RunExperiment(data, subset, LabelSource::kVaq, Folds(), train, model, pre), Error);
}

}  // namespace
}  // namespace eegvit
