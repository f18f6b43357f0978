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


#include "eegvit/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <sstream>

#include "eegvit/error.h"

namespace eegvit {
namespace {

using Json = nlohmann::ordered_json;

std::string Fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string TableValue(HeadKind task, double v) {
  return task == HeadKind::kClassify4 ? Fixed(100.0 * v, 2) : Fixed(v, 4);
}

std::string EscapeXml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

LabelSource ParseLabelSource(const std::string& s) {
  if (s == "VAQ") return LabelSource::kVaq;
  if (s == "SAM") return LabelSource::kSam;
  if (s == "SAM-continuous") return LabelSource::kSamContinuous;
  throw Error(ErrorKind::kBadShape, "unknown label source '" + s + "' in report");
}

}  // namespace

std::string ReportJson(const ExperimentReport& r) {
  Json folds = Json::array();
  for (const FoldResult& f : r.folds) {
    Json history = Json::array();
    for (const EpochRecord& e : f.history) {
      Json rec = {{"epoch", e.epoch},
                  {"lr", e.lr},
                  {"train_loss", e.train_loss},
                  {"test_loss", e.test_loss}};
      if (e.validation_loss) rec["validation_loss"] = *e.validation_loss;
      rec["metric"] = e.metric;
      history.push_back(rec);
    }
    folds.push_back({{"fold", f.fold_index + 1},
                     {"n_train", f.n_train},
                     {"n_test", f.n_test},
                     {"metric", f.metric},
                     {"best_epoch", f.best_epoch},
                     {"stopped_epoch", f.stopped_epoch},
                     {"history", history}});
  }
  const Json out = {{"subset", r.subset},
                    {"n_channels", r.n_channels},
                    {"labels", LabelSourceName(r.labels)},
                    {"task", HeadKindName(r.task)},
                    {"metric", r.task == HeadKind::kClassify4 ? "accuracy" : "rmse"},
                    {"fold_mode", FoldModeName(r.fold_mode)},
                    {"seed", r.seed},
                    {"fold_metrics", r.FoldMetrics()},
                    {"mean", r.mean},
                    {"threshold", r.threshold},
                    {"relevant", r.relevant},
                    {"folds", folds}};
  return out.dump(2) + "\n";
}

ExperimentReport ReportFromJson(const std::string& text) {
  ExperimentReport r;
  try {
    const Json j = Json::parse(text);
    r.subset = j.at("subset").get<std::string>();
    r.n_channels = j.at("n_channels").get<std::size_t>();
    r.labels = ParseLabelSource(j.at("labels").get<std::string>());
    r.task = j.at("task").get<std::string>() == "regress2" ? HeadKind::kRegress2
                                                           : HeadKind::kClassify4;
    r.fold_mode = ParseFoldMode(j.at("fold_mode").get<std::string>());
    r.seed = j.at("seed").get<std::uint64_t>();
    int index = 0;
    for (double m : j.at("fold_metrics").get<std::vector<double>>()) {
      FoldResult f;
      f.fold_index = index++;
      f.metric = m;
      r.folds.push_back(std::move(f));
    }
    r.mean = j.at("mean").get<double>();
    r.threshold = j.at("threshold").get<double>();
    r.relevant = j.at("relevant").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kBadShape, std::string("report JSON: ") + e.what());
  }
  return r;
}

std::string ReportCsv(std::span<const ExperimentReport> reports) {
  std::size_t k = 0;
  for (const ExperimentReport& r : reports) k = std::max(k, r.folds.size());
  std::ostringstream out;
  out << "subset,n_channels";
  for (std::size_t i = 1; i <= k; ++i) out << ",fold" << i;
  out << ",mean\n";
  for (const ExperimentReport& r : reports) {
    out << r.subset << ',' << r.n_channels;
    for (std::size_t i = 0; i < k; ++i) {
      out << ',';
      if (i < r.folds.size()) out << TableValue(r.task, r.folds[i].metric);
    }
    out << ',' << TableValue(r.task, r.mean) << '\n';
  }
  return out.str();
}

BoxStats ComputeBoxStats(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::kEmptyData, "no values for box statistics");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  BoxStats s;
  s.min = v.front();
  s.max = v.back();
  s.q1 = quantile(0.25);
  s.median = quantile(0.5);
  s.q3 = quantile(0.75);
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  return s;
}

std::string BoxplotSvg(std::span<const ExperimentReport> reports, const std::string& title) {
  constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 70, kPlotH = 300;
  constexpr double kSlot = 70;
  const double width = kLeft + kRight + kSlot * static_cast<double>(std::max<std::size_t>(1, reports.size()));
  const double height = kTop + kPlotH + kBottom;

  const bool classify = reports.empty() || reports.front().task == HeadKind::kClassify4;
  const double scale = classify ? 100.0 : 1.0;
  double y_max = classify ? 100.0 : 0.0;
  const double threshold = reports.empty() ? 0.5 : reports.front().threshold;
  if (!classify) {
    y_max = threshold;
    for (const ExperimentReport& r : reports) {
      for (double m : r.FoldMetrics()) y_max = std::max(y_max, m);
    }
    y_max = std::ceil(y_max * 1.1 * 2.0) / 2.0;
  }
  auto y = [&](double v) { return kTop + kPlotH * (1.0 - (v * scale) / y_max); };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
    << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
    << EscapeXml(title) << "</text>\n";
  // Axis and ticks.
  s << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
    << kTop + kPlotH << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double v = y_max * i / 5.0;
    const double py = kTop + kPlotH * (1.0 - i / 5.0);
    s << "<line x1=\"" << kLeft - 4 << "\" y1=\"" << py << "\" x2=\"" << kLeft << "\" y2=\""
      << py << "\" stroke=\"black\"/>\n";
    s << "<text x=\"" << kLeft - 8 << "\" y=\"" << py + 4 << "\" text-anchor=\"end\">"
      << Fixed(v, classify ? 0 : 2) << "</text>\n";
  }
  s << "<text x=\"16\" y=\"" << kTop + kPlotH / 2 << "\" transform=\"rotate(-90 16 "
    << kTop + kPlotH / 2 << ")\" text-anchor=\"middle\">"
    << (classify ? "Accuracy (%)" : "RMSE") << "</text>\n";

  for (std::size_t i = 0; i < reports.size(); ++i) {
    const ExperimentReport& r = reports[i];
    const BoxStats b = ComputeBoxStats(r.FoldMetrics());
    const double cx = kLeft + kSlot * (static_cast<double>(i) + 0.5);
    const double half = kSlot * 0.3;
    s << "<g class=\"box\" data-subset=\"" << EscapeXml(r.subset) << "\">\n";
    s << "<line x1=\"" << cx << "\" y1=\"" << y(b.min) << "\" x2=\"" << cx << "\" y2=\""
      << y(b.q1) << "\" stroke=\"black\"/>\n";
    s << "<line x1=\"" << cx << "\" y1=\"" << y(b.q3) << "\" x2=\"" << cx << "\" y2=\""
      << y(b.max) << "\" stroke=\"black\"/>\n";
    for (double v : {b.min, b.max}) {
      s << "<line x1=\"" << cx - half / 2 << "\" y1=\"" << y(v) << "\" x2=\"" << cx + half / 2
        << "\" y2=\"" << y(v) << "\" stroke=\"black\"/>\n";
    }
    s << "<rect x=\"" << cx - half << "\" y=\"" << y(b.q3) << "\" width=\"" << 2 * half
      << "\" height=\"" << std::max(0.0, y(b.q1) - y(b.q3))
      << "\" fill=\"#9ecae1\" stroke=\"black\"/>\n";
    s << "<line x1=\"" << cx - half << "\" y1=\"" << y(b.median) << "\" x2=\"" << cx + half
      << "\" y2=\"" << y(b.median) << "\" stroke=\"#d95f02\" stroke-width=\"2\"/>\n";
    s << "<path d=\"M " << cx << ' ' << y(b.mean) - 5 << " L " << cx + 5 << ' ' << y(b.mean)
      << " L " << cx << ' ' << y(b.mean) + 5 << " L " << cx - 5 << ' ' << y(b.mean)
      << " Z\" fill=\"#1b9e77\"/>\n";
    s << "<text x=\"" << cx << "\" y=\"" << kTop + kPlotH + 18
      << "\" text-anchor=\"middle\">" << EscapeXml(r.subset) << "</text>\n";
    s << "</g>\n";
  }
  const double ty = y(threshold);
  s << "<line class=\"threshold\" x1=\"" << kLeft << "\" y1=\"" << ty << "\" x2=\""
    << width - kRight << "\" y2=\"" << ty
    << "\" stroke=\"red\" stroke-dasharray=\"6 4\"/>\n";
  s << "<text x=\"" << width - kRight << "\" y=\"" << ty - 4
    << "\" text-anchor=\"end\" fill=\"red\">threshold " << TableValue(reports.empty() ? HeadKind::kClassify4 : reports.front().task, threshold)
    << "</text>\n";
  s << "</svg>\n";
  return s.str();
}

}  // namespace eegvit
