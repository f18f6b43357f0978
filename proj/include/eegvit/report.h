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


#ifndef EEGVIT_REPORT_H_
#define EEGVIT_REPORT_H_

#include <span>
#include <string>
#include <vector>

#include "eegvit/experiment.h"

namespace eegvit {

// Full report: summary, per-fold metrics and per-epoch history.
std::string ReportJson(const ExperimentReport& report);

// Summary fields only (history and parameters are not restored).
ExperimentReport ReportFromJson(const std::string& text);

// Table layout: subset, n_channels, fold1..foldK, mean. Accuracies are
// written in percent with two decimals, RMSE with four.
std::string ReportCsv(std::span<const ExperimentReport> reports);

struct BoxStats {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

// Quartiles by linear interpolation between order statistics.
BoxStats ComputeBoxStats(std::span<const double> values);

// One box per report over its fold metrics, mean marker, and a dashed line
// at the relevance threshold.
std::string BoxplotSvg(std::span<const ExperimentReport> reports, const std::string& title);

}  // namespace eegvit

#endif  // EEGVIT_REPORT_H_
