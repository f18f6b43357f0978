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
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "eegvit/error.h"
#include "eegvit/folds.h"
#include "eegvit/rng.h"
#include "eegvit/signal.h"

namespace eegvit {
namespace {

TEST(ZScoreTest, WorkedExamples) {
  const auto a = ZScoreNormalize(std::vector<double>{1, 2, 3});
  EXPECT_NEAR(a[0], -std::sqrt(1.5), 1e-12);  // (1-2)/sqrt(2/3)
  EXPECT_NEAR(a[1], 0.0, 1e-12);
  EXPECT_NEAR(a[2], 1.224745, 1e-6);
  EXPECT_EQ(ZScoreNormalize(std::vector<double>{5, 5, 5, 5}), std::vector<double>(4, 0.0));
  const auto b = ZScoreNormalize(std::vector<double>{0, 0, 1, 1});
  EXPECT_EQ(b, (std::vector<double>{-1, -1, 1, 1}));
}

TEST(ZScoreTest, RejectsBadInput) {
  EXPECT_THROW(ZScoreNormalize(std::vector<double>{1.0}), Error);
  try {
    ZScoreNormalize(std::vector<double>{1.0, NAN, 2.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNonFinite);
  }
}

TEST(ZScoreTest, PropertiesOnRandomSignals) {
  std::mt19937_64 gen(11);
  std::normal_distribution<double> d(3.0, 7.0);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> x(2 + rep * 17);
    for (double& v : x) v = d(gen);
    const auto z = ZScoreNormalize(x);
    double mean = 0, sq = 0;
    for (double v : z) mean += v;
    mean /= static_cast<double>(z.size());
    for (double v : z) sq += (v - mean) * (v - mean);
    EXPECT_NEAR(mean, 0.0, 1e-12);
    EXPECT_NEAR(sq / static_cast<double>(z.size()), 1.0, 1e-12);
    const auto zz = ZScoreNormalize(z);
    for (std::size_t i = 0; i < z.size(); ++i) EXPECT_NEAR(zz[i], z[i], 1e-12);
    // Affine invariance (positive gain).
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = 4.5 * x[i] - 100.0;
    const auto zy = ZScoreNormalize(y);
    for (std::size_t i = 0; i < z.size(); ++i) EXPECT_NEAR(zy[i], z[i], 1e-9);
  }
}

TEST(QuadrantTest, WorkedExamples) {
  EXPECT_EQ(QuadrantFromRatings(7, 7), Quadrant::kQ1);
  EXPECT_EQ(QuadrantFromRatings(3, 7), Quadrant::kQ2);
  EXPECT_EQ(QuadrantFromRatings(5, 5), Quadrant::kQ3);
  EXPECT_EQ(QuadrantFromRatings(7, 3), Quadrant::kQ4);
  EXPECT_EQ(QuadrantFromRatings(3, 3), Quadrant::kQ3);
  EXPECT_EQ(QuadrantFromRatings(5.0001, 5.0), Quadrant::kQ4);
  EXPECT_THROW(QuadrantFromRatings(0.5, 5), Error);
  EXPECT_THROW(QuadrantFromRatings(5, 9.5), Error);
  EXPECT_THROW(QuadrantFromRatings(NAN, 5), Error);
  EXPECT_THROW(QuadrantFromCode(4), Error);
}

TEST(QuadrantTest, InvariantUnderMonotoneMapsFixingThreshold) {
  // f(x) = 5 + sign(x-5)|x-5|^0.5 * 2: strictly increasing, f(5) = 5, maps
  // [1,9] into [1,9].
  auto f = [](double x) { return 5.0 + std::copysign(std::sqrt(std::abs(x - 5.0)), x - 5.0) * 2.0; };
  Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    const double v = rng.Uniform(1.0, 9.0), a = rng.Uniform(1.0, 9.0);
    EXPECT_EQ(QuadrantFromRatings(v, a), QuadrantFromRatings(f(v), f(a)));
  }
}

TEST(FoldsTest, RandomTrialBalance) {
  std::vector<int> people(10, 1);
  const FoldAssignment f = MakeFolds(people, 5, 42, FoldMode::kRandomTrial);
  EXPECT_EQ(f.FoldSizes(), std::vector<std::size_t>(5, 2));
  for (int n : {11, 64, 1280}) {
    const FoldAssignment g = MakeFolds(std::vector<int>(n, 1), 5, 1, FoldMode::kRandomTrial);
    const auto sizes = g.FoldSizes();
    EXPECT_LE(*std::max_element(sizes.begin(), sizes.end()) -
                  *std::min_element(sizes.begin(), sizes.end()),
              1u);
  }
}

TEST(FoldsTest, CrossPersonCounts) {
  std::vector<int> people(32);
  for (int i = 0; i < 32; ++i) people[i] = i + 1;
  const FoldAssignment f = MakeFolds(people, 5, 9, FoldMode::kCrossPerson);
  auto sizes = f.FoldSizes();
  std::sort(sizes.begin(), sizes.end());
  EXPECT_EQ(sizes, (std::vector<std::size_t>{6, 6, 6, 7, 7}));
}

TEST(FoldsTest, CrossPersonNeverSplitsAParticipant) {
  std::vector<int> people;
  for (int p = 1; p <= 32; ++p) {
    for (int v = 0; v < 40; ++v) people.push_back(p);
  }
  const FoldAssignment f = MakeFolds(people, 5, 3, FoldMode::kCrossPerson);
  std::map<int, std::set<int>> folds_of_person;
  for (std::size_t i = 0; i < people.size(); ++i) folds_of_person[people[i]].insert(f.fold_of[i]);
  for (const auto& [p, s] : folds_of_person) EXPECT_EQ(s.size(), 1u) << p;
}

TEST(FoldsTest, PartitionAndDeterminism) {
  std::vector<int> people;
  for (int i = 0; i < 64; ++i) people.push_back(i / 8 + 1);
  for (FoldMode mode : {FoldMode::kRandomTrial, FoldMode::kCrossPerson}) {
    const FoldAssignment a = MakeFolds(people, 5, 77, mode);
    const FoldAssignment b = MakeFolds(people, 5, 77, mode);
    EXPECT_EQ(a.fold_of, b.fold_of);
    std::vector<int> seen(people.size(), 0);
    for (int k = 0; k < 5; ++k) {
      const auto test = a.TestIndices(k);
      const auto train = a.TrainIndices(k);
      EXPECT_EQ(test.size() + train.size(), people.size());
      for (std::size_t i : test) ++seen[i];
    }
    EXPECT_EQ(seen, std::vector<int>(people.size(), 1));
  }
  EXPECT_NE(MakeFolds(people, 5, 1, FoldMode::kRandomTrial).fold_of,
            MakeFolds(people, 5, 2, FoldMode::kRandomTrial).fold_of);
}

TEST(FoldsTest, Errors) {
  EXPECT_THROW(MakeFolds(std::vector<int>(10, 1), 1, 0, FoldMode::kRandomTrial), Error);
  EXPECT_THROW(MakeFolds(std::vector<int>(3, 1), 5, 0, FoldMode::kRandomTrial), Error);
  EXPECT_THROW(MakeFolds(std::vector<int>{1, 1, 2, 2, 3, 3}, 5, 0, FoldMode::kCrossPerson), Error);
  EXPECT_EQ(ParseFoldMode("cross-person"), FoldMode::kCrossPerson);
  EXPECT_THROW(ParseFoldMode("sideways"), Error);
}

TEST(RngTest, ReproducibleAndInRange) {
  Rng a(123), b(123);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.Next(), b.Next());
  Rng c(5);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto v = c.Below(7);
    ASSERT_LT(v, 7u);
    ++counts[v];
  }
  for (int n : counts) EXPECT_NEAR(n, 10000, 500);
  double sum = 0, sq = 0;
  for (int i = 0; i < 100000; ++i) {
    const double x = c.Normal();
    sum += x;
    sq += x * x;
  }
  EXPECT_NEAR(sum / 1e5, 0.0, 0.02);
  EXPECT_NEAR(sq / 1e5, 1.0, 0.02);
  for (int i = 0; i < 10000; ++i) EXPECT_LE(std::abs(c.TruncatedNormal(0.02)), 0.04);
}

}  // namespace
}  // namespace eegvit
