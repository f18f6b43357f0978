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


#include "eegvit/cli.h"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "eegvit/binary_io.h"
#include "eegvit/channels.h"
#include "eegvit/checkpoint.h"
#include "eegvit/cwt.h"
#include "eegvit/dataset.h"
#include "eegvit/error.h"
#include "eegvit/experiment.h"
#include "eegvit/folds.h"
#include "eegvit/model.h"
#include "eegvit/raster.h"
#include "eegvit/report.h"
#include "eegvit/signal.h"
#include "eegvit/synth.h"
#include "eegvit/training.h"

namespace eegvit {
namespace {

namespace fs = std::filesystem;

// Thrown for flag combinations CLI11 cannot express.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int ExitCodeFor(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::kNonFinite:
      return kExitNumerical;
    case ErrorKind::kUnknownSubset:
    case ErrorKind::kBadConfig:
    case ErrorKind::kBadK:
    case ErrorKind::kBadRange:
      return kExitUsage;
    default:
      return kExitData;
  }
}

fs::path ResolveData(const std::string& arg) {
  fs::path p(arg);
  if (p.is_relative() && !fs::exists(p)) {
    if (const char* dir = std::getenv(kDataDirEnv); dir != nullptr && *dir != '\0') {
      fs::path candidate = fs::path(dir) / p;
      if (fs::exists(candidate)) return candidate;
    }
  }
  return p;
}

std::string Format(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

// Resolves registry names plus "pca-K" (top K of a ranking over the data).
ChannelSubset ResolveSubsetFor(const std::string& name, const PortableDataset& data) {
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower.rfind("pca-", 0) == 0) {
    std::size_t k = 0;
    try {
      std::size_t used = 0;
      k = std::stoul(lower.substr(4), &used);
      if (used != lower.size() - 4) throw std::invalid_argument(lower);
    } catch (const std::exception&) {
      throw Error(ErrorKind::kUnknownSubset, "unknown subset '" + name + "'");
    }
    return TopK(PcaRankChannels(data.trials, data.channel_names), k);
  }
  return ResolveSubset(name);
}

LabelSource ParseLabels(const std::string& labels, const std::string& task) {
  if (task == "regress") {
    if (labels != "sam") throw UsageError("--task regress requires --labels sam");
    return LabelSource::kSamContinuous;
  }
  return labels == "sam" ? LabelSource::kSam : LabelSource::kVaq;
}

struct ModelFlags {
  std::string preset = "default";
  std::optional<std::size_t> image_size, patch_size, embed_dim, depth, heads, linformer_k,
      mlp_hidden;
  std::optional<double> dropout;

  void Add(CLI::App* app) {
    app->add_option("--preset", preset, "Model size preset")
        ->check(CLI::IsMember({"default", "small"}))
        ->capture_default_str();
    app->add_option("--image-size", image_size, "Raster height and width");
    app->add_option("--patch", patch_size, "Patch side in pixels");
    app->add_option("--embed-dim", embed_dim, "Token width");
    app->add_option("--depth", depth, "Encoder layers");
    app->add_option("--heads", heads, "Attention heads");
    app->add_option("--linformer-k", linformer_k, "Projected sequence length");
    app->add_option("--mlp-hidden", mlp_hidden, "Feed-forward width");
    app->add_option("--dropout", dropout, "Dropout rate");
  }

  ModelConfig Build(std::size_t n_channels, HeadKind head) const {
    ModelConfig c = preset == "small" ? ModelConfig::Small(n_channels, head) : ModelConfig{};
    c.n_channels = n_channels;
    c.head = head;
    if (image_size) c.image_h = c.image_w = *image_size;
    if (patch_size) c.patch_size = *patch_size;
    if (embed_dim) c.embed_dim = *embed_dim;
    if (depth) c.depth = *depth;
    if (heads) c.n_heads = *heads;
    if (linformer_k) c.linformer_k = *linformer_k;
    if (mlp_hidden) c.mlp_hidden = *mlp_hidden;
    if (dropout) c.dropout_rate = *dropout;
    c.Validate();
    return c;
  }
};

struct PreprocessFlags {
  double f_min = kDefaultFMinHz;
  double f_max = kDefaultFMaxHz;
  std::size_t scales = kDefaultScales;
  double omega0 = kDefaultOmega0;

  void Add(CLI::App* app) {
    app->add_option("--fmin", f_min, "Lowest analysed frequency (Hz)")->capture_default_str();
    app->add_option("--fmax", f_max, "Highest analysed frequency (Hz)")->capture_default_str();
    app->add_option("--scales", scales, "Number of wavelet scales")->capture_default_str();
    app->add_option("--omega0", omega0, "Morlet centre frequency")->capture_default_str();
  }

  PreprocessConfig Build(const ModelConfig& model) const {
    PreprocessConfig p;
    p.f_min_hz = f_min;
    p.f_max_hz = f_max;
    p.n_scales = scales;
    p.omega0 = omega0;
    p.image_h = model.image_h;
    p.image_w = model.image_w;
    return p;
  }
};

// --- subcommands -----------------------------------------------------------

struct SynthArgs {
  std::string out;
  std::string labels_csv;
  SynthConfig config;
};

void RunSynth(const SynthArgs& a, std::ostream& out) {
  const PortableDataset data = SynthGenerate(a.config);
  WritePortable(data, a.out);
  if (!a.labels_csv.empty()) io::WriteFileAtomic(a.labels_csv, LabelsCsv(data));
  out << "wrote " << data.trials.size() << " trials x " << data.n_channels() << " channels x "
      << data.n_samples() << " samples to " << a.out << "\n";
}

struct PcaArgs {
  std::string data;
  std::string out;
};

void RunPca(const PcaArgs& a, std::ostream& out) {
  const PortableDataset data = ReadPortable(ResolveData(a.data));
  const ChannelRanking ranking = PcaRankChannels(data.trials, data.channel_names);
  std::ostringstream csv;
  csv << "rank,index,name,score,cumulative\n";
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    const RankedChannel& c = ranking.channels[i];
    csv << i + 1 << ',' << c.position + 1 << ',' << c.name << ',' << Format(c.score, 6) << ','
        << Format(ranking.cumulative[i], 6) << '\n';
  }
  if (a.out.empty()) {
    out << csv.str();
  } else {
    io::WriteFileAtomic(a.out, csv.str());
  }
}

struct PreviewArgs {
  std::string data;
  std::size_t trial = 0;
  std::string channel;
  std::string out;
  std::size_t height = kDefaultImageSize;
  std::size_t width = kDefaultImageSize;
  PreprocessFlags pre;
};

void RunPreview(const PreviewArgs& a, std::ostream& out) {
  const PortableDataset data = ReadPortable(ResolveData(a.data));
  if (a.trial >= data.trials.size()) {
    throw UsageError("--trial must be below " + std::to_string(data.trials.size()));
  }
  // Channel by dataset name, else by 1-based position.
  std::optional<std::size_t> channel;
  for (std::size_t i = 0; i < data.channel_names.size(); ++i) {
    if (CLI::detail::to_lower(data.channel_names[i]) == CLI::detail::to_lower(a.channel)) {
      channel = i;
    }
  }
  if (!channel) {
    std::size_t used = 0;
    std::size_t n = 0;
    try {
      n = std::stoul(a.channel, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != a.channel.size() || n < 1 || n > data.channel_names.size()) {
      throw UsageError("unknown channel '" + a.channel + "'");
    }
    channel = n - 1;
  }
  const ScaleGrid grid = MakeScaleGrid(a.pre.f_min, a.pre.f_max, a.pre.scales,
                                       data.sample_rate_hz, a.pre.omega0);
  const CwtPlan plan(grid, data.n_samples());
  PreprocessConfig p;
  p.image_h = a.height;
  p.image_w = a.width;
  const RasterImage img = ChannelRaster(data.trials[a.trial], *channel, plan, p);
  io::WriteFileAtomic(a.out, EncodePgm(img));
  out << "wrote " << a.width << "x" << a.height << " scaleogram of trial " << a.trial
      << " channel " << data.channel_names[*channel] << " to " << a.out << "\n";
}

struct TrainArgs {
  std::string data;
  std::string subset;
  std::string labels = "vaq";
  std::string task = "classify";
  int folds = 5;
  std::string fold_mode = "random-trial";
  std::uint64_t seed = 0;
  std::string out;
  std::size_t jobs = 1;
  std::optional<std::uint64_t> permute_seed;
  bool checkpoints = true;
  ModelFlags model;
  PreprocessFlags pre;
  std::optional<double> lr;
  std::optional<std::size_t> epochs, batch, patience, step_epochs;
  std::optional<std::string> scheduler;
  std::optional<double> huber_delta, val_fraction, step_gamma;
};

void RunTrain(const TrainArgs& a, std::ostream& out) {
  const LabelSource labels = ParseLabels(a.labels, a.task);
  const HeadKind head = a.task == "regress" ? HeadKind::kRegress2 : HeadKind::kClassify4;
  const PortableDataset data = ReadPortable(ResolveData(a.data));
  const ChannelSubset subset = ResolveSubsetFor(a.subset, data);
  const ModelConfig model = a.model.Build(subset.channel_names.size(), head);
  const PreprocessConfig pre = a.pre.Build(model);

  TrainConfig train = TrainConfig::ForTask(head);
  train.seed = a.seed;
  if (a.model.preset == "small") train.lr = 1e-3;
  if (a.lr) train.lr = *a.lr;
  if (a.epochs) train.max_epochs = *a.epochs;
  if (a.batch) train.batch_size = *a.batch;
  if (a.patience) train.patience = *a.patience;
  if (a.scheduler) train.scheduler = ParseScheduler(*a.scheduler);
  if (a.step_epochs) train.step_epochs = *a.step_epochs;
  if (a.step_gamma) train.step_gamma = *a.step_gamma;
  if (a.huber_delta) train.huber_delta = *a.huber_delta;
  if (a.val_fraction) train.validation_fraction = *a.val_fraction;
  train.Validate();

  std::vector<int> participants;
  participants.reserve(data.trials.size());
  for (const Trial& t : data.trials) participants.push_back(t.participant_id);
  const FoldAssignment folds =
      MakeFolds(participants, a.folds, a.seed, ParseFoldMode(a.fold_mode));

  out << "subset " << subset.name << " (" << subset.channel_names.size() << " channels), "
      << ParameterCount(model) << " parameters\n";
  const PreparedInputs inputs = PrepareInputs(data, subset, pre, a.jobs);
  Targets targets = MakeTargets(data, labels);
  if (a.permute_seed) targets = PermuteTargets(targets, *a.permute_seed);
  ExperimentReport report =
      RunExperiment(inputs, targets, folds, train, model, RunOptions{a.jobs});
  report.subset = subset.name;
  report.labels = labels;

  const fs::path dir(a.out);
  fs::create_directories(dir);
  if (a.checkpoints) {
    for (const FoldResult& f : report.folds) {
      SaveCheckpoint(dir / ("fold" + std::to_string(f.fold_index + 1) + ".sdvm"), model,
                     f.best_params);
    }
  }
  const std::vector<ExperimentReport> one{report};
  io::WriteFileAtomic(dir / "report.csv", ReportCsv(one));
  io::WriteFileAtomic(dir / "boxplot.svg", BoxplotSvg(one, subset.name));
  io::WriteFileAtomic(dir / "report.json", ReportJson(report));

  const bool classify = head == HeadKind::kClassify4;
  for (const FoldResult& f : report.folds) {
    out << "fold " << f.fold_index + 1 << ": "
        << (classify ? Format(100.0 * f.metric, 2) + "%" : Format(f.metric, 4))
        << " (best epoch " << f.best_epoch << ", stopped " << f.stopped_epoch << ")\n";
  }
  out << "mean " << (classify ? Format(100.0 * report.mean, 2) + "%" : Format(report.mean, 4))
      << ", relevant: " << (report.relevant ? "yes" : "no") << "\n";
}

struct EvalArgs {
  std::string model;
  std::string data;
  std::string subset;
  std::string labels = "vaq";
  PreprocessFlags pre;
};

void RunEval(const EvalArgs& a, std::ostream& out) {
  const Checkpoint ckpt = LoadCheckpoint(a.model);
  const HeadKind head = ckpt.config.head;
  const LabelSource labels = ParseLabels(a.labels, head == HeadKind::kRegress2 ? "regress" : "classify");
  const PortableDataset data = ReadPortable(ResolveData(a.data));
  ChannelSubset subset;
  if (a.subset.empty()) {
    // Default: the first n dataset channels, n taken from the checkpoint.
    if (ckpt.config.n_channels > data.channel_names.size()) {
      throw Error(ErrorKind::kBadShape, "checkpoint expects more channels than the dataset has");
    }
    subset.name = "first-" + std::to_string(ckpt.config.n_channels);
    subset.channel_names.assign(data.channel_names.begin(),
                                data.channel_names.begin() +
                                    static_cast<std::ptrdiff_t>(ckpt.config.n_channels));
  } else {
    subset = ResolveSubsetFor(a.subset, data);
  }
  if (subset.channel_names.size() != ckpt.config.n_channels) {
    throw Error(ErrorKind::kBadShape, "subset '" + subset.name + "' has " +
                                          std::to_string(subset.channel_names.size()) +
                                          " channels, checkpoint expects " +
                                          std::to_string(ckpt.config.n_channels));
  }
  const PreparedInputs inputs = PrepareInputs(data, subset, a.pre.Build(ckpt.config));
  const Targets targets = MakeTargets(data, labels);
  std::vector<std::size_t> all(data.trials.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const Batch batch = MakeBatch(inputs, targets, all);
  nlohmann::ordered_json j;
  j["model"] = a.model;
  j["subset"] = subset.name;
  j["labels"] = LabelSourceName(labels);
  j["task"] = HeadKindName(head);
  j["parameters"] = ParameterCount(ckpt.config);
  j["n_trials"] = all.size();
  if (head == HeadKind::kClassify4) {
    j["accuracy"] = EvaluateClassification(ckpt.params, ckpt.config, batch);
    j["relevant"] = IsRelevant(head, j["accuracy"].get<double>());
  } else {
    j["rmse"] = EvaluateRegression(ckpt.params, ckpt.config, batch);
    j["relevant"] = IsRelevant(head, j["rmse"].get<double>());
  }
  j["threshold"] = RelevanceThreshold(head);
  out << j.dump(2) << "\n";
}

struct ReportArgs {
  std::vector<std::string> runs;
  std::string out;
  std::string title = "eegvit";
};

void RunReport(const ReportArgs& a, std::ostream& out) {
  std::vector<ExperimentReport> reports;
  for (const std::string& run : a.runs) {
    fs::path p(run);
    if (fs::is_directory(p)) p /= "report.json";
    const std::vector<std::uint8_t> bytes = io::ReadFile(p);
    reports.push_back(ReportFromJson(std::string(bytes.begin(), bytes.end())));
  }
  for (const ExperimentReport& r : reports) {
    if (r.task != reports.front().task) throw UsageError("reports mix classification and regression");
  }
  const fs::path dir(a.out);
  fs::create_directories(dir);
  io::WriteFileAtomic(dir / "report.csv", ReportCsv(reports));
  io::WriteFileAtomic(dir / "boxplot.svg", BoxplotSvg(reports, a.title));
  out << "combined " << reports.size() << " runs into " << dir.string() << "\n";
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scaleogram vision-transformer pipeline for EEG emotion recognition", "eegvit"};
  app.require_subcommand(1);

  SynthArgs synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "Generate a synthetic dataset");
  synth_cmd->add_option("--out", synth.out, "Output .eegp file")->required();
  synth_cmd->add_option("--seed", synth.config.seed)->capture_default_str();
  synth_cmd->add_option("--participants", synth.config.n_participants)->capture_default_str();
  synth_cmd->add_option("--videos", synth.config.n_videos)->capture_default_str();
  synth_cmd->add_option("--channels", synth.config.n_channels)->capture_default_str();
  synth_cmd->add_option("--duration", synth.config.duration_s, "Seconds per trial")
      ->capture_default_str();
  synth_cmd->add_option("--noise", synth.config.noise_sigma)->capture_default_str();
  synth_cmd->add_option("--fs", synth.config.fs_hz, "Sample rate (Hz)")->capture_default_str();
  synth_cmd->add_option("--labels-csv", synth.labels_csv, "Also write labels as CSV");

  app.add_subcommand("subsets", "Print the channel subset registry as JSON");

  PcaArgs pca;
  CLI::App* pca_cmd = app.add_subcommand("pca", "Rank channels by explained variance");
  pca_cmd->add_option("--data", pca.data)->required();
  pca_cmd->add_option("--out", pca.out, "CSV path (default: stdout)");

  PreviewArgs preview;
  CLI::App* preview_cmd = app.add_subcommand("cwt-preview", "Write one scaleogram as PGM");
  preview_cmd->add_option("--data", preview.data)->required();
  preview_cmd->add_option("--trial", preview.trial, "0-based trial index")->required();
  preview_cmd->add_option("--channel", preview.channel, "Channel name or 1-based index")
      ->required();
  preview_cmd->add_option("--out", preview.out)->required();
  preview_cmd->add_option("--height", preview.height)->capture_default_str();
  preview_cmd->add_option("--width", preview.width)->capture_default_str();
  preview.pre.Add(preview_cmd);

  TrainArgs train;
  CLI::App* train_cmd = app.add_subcommand("train", "Run the cross-validated protocol");
  train_cmd->add_option("--data", train.data)->required();
  train_cmd->add_option("--subset", train.subset, "Registry name or pca-K")->required();
  train_cmd->add_option("--labels", train.labels)
      ->check(CLI::IsMember({"vaq", "sam"}))
      ->capture_default_str();
  train_cmd->add_option("--task", train.task)
      ->check(CLI::IsMember({"classify", "regress"}))
      ->capture_default_str();
  train_cmd->add_option("--folds", train.folds)->capture_default_str();
  train_cmd->add_option("--fold-mode", train.fold_mode)
      ->check(CLI::IsMember({"random-trial", "cross-person"}))
      ->capture_default_str();
  train_cmd->add_option("--seed", train.seed)->capture_default_str();
  train_cmd->add_option("--out", train.out, "Run directory")->required();
  train_cmd->add_option("--jobs", train.jobs, "Threads")->check(CLI::PositiveNumber)
      ->capture_default_str();
  train_cmd->add_option("--permute-labels", train.permute_seed,
                        "Shuffle labels across trials with this seed (null control)");
  train_cmd->add_flag("!--no-checkpoints", train.checkpoints, "Skip per-fold checkpoints");
  train_cmd->add_option("--lr", train.lr, "Peak learning rate");
  train_cmd->add_option("--epochs", train.epochs, "Maximum epochs");
  train_cmd->add_option("--batch", train.batch, "Mini-batch size");
  train_cmd->add_option("--patience", train.patience, "Early-stopping patience");
  train_cmd->add_option("--scheduler", train.scheduler)
      ->check(CLI::IsMember({"cosine", "step"}));
  train_cmd->add_option("--step-epochs", train.step_epochs);
  train_cmd->add_option("--step-gamma", train.step_gamma);
  train_cmd->add_option("--huber-delta", train.huber_delta);
  train_cmd->add_option("--val-fraction", train.val_fraction);
  train.model.Add(train_cmd);
  train.pre.Add(train_cmd);

  EvalArgs eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint on a dataset");
  eval_cmd->add_option("--model", eval.model)->required();
  eval_cmd->add_option("--data", eval.data)->required();
  eval_cmd->add_option("--subset", eval.subset, "Channel subset the model was trained on");
  eval_cmd->add_option("--labels", eval.labels)
      ->check(CLI::IsMember({"vaq", "sam"}))
      ->capture_default_str();
  eval.pre.Add(eval_cmd);

  ReportArgs report;
  CLI::App* report_cmd = app.add_subcommand("report", "Combine run reports into a table");
  report_cmd->add_option("--runs", report.runs, "Run directories or report.json files")
      ->required();
  report_cmd->add_option("--out", report.out)->required();
  report_cmd->add_option("--title", report.title)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const CLI::App* cmd = app.get_subcommands().front();
    const std::string name = cmd->get_name();
    if (name == "synth") {
      RunSynth(synth, out);
    } else if (name == "subsets") {
      out << SubsetRegistryJson() << "\n";
    } else if (name == "pca") {
      RunPca(pca, out);
    } else if (name == "cwt-preview") {
      RunPreview(preview, out);
    } else if (name == "train") {
      RunTrain(train, out);
    } else if (name == "eval") {
      RunEval(eval, out);
    } else if (name == "report") {
      RunReport(report, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\nRun with --help for usage.\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    if (ExitCodeFor(e) == kExitUsage) err << "Run with --help for usage.\n";
    return ExitCodeFor(e);
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace eegvit
