// Copyright 2026 The PainSeq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "painseq_cli/cli.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>

#include "CLI11.hpp"
#include "painseq/data/dataset.hpp"
#include "painseq/data/fseq.hpp"
#include "painseq/data/manifest.hpp"
#include "painseq/data/synth.hpp"
#include "painseq/errors.hpp"
#include "painseq/eval/metrics.hpp"
#include "painseq/eval/report.hpp"
#include "painseq/eval/voting.hpp"
#include "painseq/extractor/image.hpp"
#include "painseq/extractor/vgg.hpp"
#include "painseq/io/checkpoint.hpp"
#include "painseq/io/key_value.hpp"
#include "painseq/log.hpp"
#include "painseq/models/lstm_model.hpp"
#include "painseq/models/params.hpp"
#include "painseq/models/simple_ann.hpp"
#include "painseq/models/train.hpp"
#include "painseq/models/validation.hpp"

namespace painseq::cli {
namespace {

namespace fs = std::filesystem;

// Bad flags, missing or malformed config: exit code 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct Options {
  std::string config;
  std::string manifest;
  std::string model;
  std::string weights;
  std::string out;
  std::string frames;
  std::string bbox;
  std::string split = "validation";
  std::string format = "text";
  std::string name;
  std::optional<std::uint64_t> seed;
  double fps = 30.0;
  bool force = false;
  VerifyOptions verify;
};

io::KeyValueConfig load_config(const std::string& path) {
  if (path.empty()) return io::KeyValueConfig::parse("", "<defaults>");
  if (!fs::is_regular_file(path)) throw UsageError("config file not found: " + path);
  return io::KeyValueConfig::load(path);
}

void require_absent(const fs::path& path, bool force) {
  if (fs::exists(path) && !force) {
    throw UsageError(path.string() + " already exists (use --force to overwrite)");
  }
}

fs::path require_file(const std::string& path, const char* what) {
  if (path.empty()) throw UsageError(std::string(what) + " is required");
  if (!fs::is_regular_file(path)) throw UsageError(std::string(what) + " not found: " + path);
  return path;
}

std::string default_display_name(std::string_view kind) {
  return kind == "ann" ? "Simple ANN + Voting" : "LSTM";
}

// ---- synth ---------------------------------------------------------------

int cmd_synth(const Options& o, std::ostream& out) {
  if (o.out.empty()) throw UsageError("--out is required");
  auto config = data::SynthConfig::from_key_value(load_config(o.config));
  if (o.seed) config.seed = *o.seed;
  const fs::path dir = o.out;
  require_absent(dir / "manifest.csv", o.force);
  const auto manifest = data::synth_dataset(config, dir);

  out << fmt::format("{:<12}{:>8}{:>9}{:>10}{:>11}\n", "split", "NoPain", "LowPain", "HighPain",
                     "segments");
  for (auto split : {data::Split::kTrain, data::Split::kValidation, data::Split::kTest}) {
    std::array<std::size_t, kNumClasses> videos{};
    for (const auto& e : manifest.entries) {
      if (e.split == split) ++videos[static_cast<std::size_t>(to_index(e.label))];
    }
    const auto segs = data::dataset_counts(manifest, split, data::UnitLevel::kSequence);
    out << fmt::format("{:<12}{:>8}{:>9}{:>10}{:>11}\n", data::split_name(split), videos[0],
                       videos[1], videos[2], segs[0] + segs[1] + segs[2]);
  }
  out << "manifest: " << (dir / "manifest.csv").string() << "\n";
  return kExitOk;
}

// ---- extract -------------------------------------------------------------

int cmd_extract(const Options& o, std::ostream& out) {
  const fs::path weights_path = require_file(o.weights, "--weights");
  if (o.frames.empty()) throw UsageError("--frames is required");
  if (o.out.empty()) throw UsageError("--out is required");
  const fs::path out_path = o.out;
  require_absent(out_path, o.force);
  if (!fs::is_directory(o.frames)) throw InvalidInputError("frames directory not found: " + o.frames);

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(o.frames)) {
    if (entry.is_regular_file() && entry.path().extension() == ".ppm") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw InvalidInputError("no .ppm frames in " + o.frames);

  std::map<std::size_t, extractor::BBox> boxes;
  if (!o.bbox.empty()) boxes = extractor::read_bbox_file(require_file(o.bbox, "--bbox"));

  const auto weights = extractor::load_extractor_weights(weights_path);
  std::vector<extractor::ImageTensor> frames;
  frames.reserve(files.size());
  for (std::size_t i = 0; i < files.size(); ++i) {
    const auto image = extractor::read_ppm(files[i]);
    extractor::BBox box{0, 0, static_cast<long long>(image.width),
                        static_cast<long long>(image.height)};
    if (!o.bbox.empty()) {
      auto it = boxes.find(i);
      if (it == boxes.end()) {
        throw InvalidBBoxError("no bounding box for frame " + std::to_string(i) + " (" +
                               files[i].filename().string() + ")");
      }
      box = it->second;
    }
    frames.push_back(extractor::preprocess_frame(image, box).image);
  }
  extractor::FeatureCache cache;
  auto seq = extractor::extract_video(weights, frames, o.fps, &cache);
  if (!out_path.parent_path().empty()) fs::create_directories(out_path.parent_path());
  data::write_fseq(seq, out_path);
  logger()->info("{}: {} frames ({} distinct)", o.frames, seq.frames(), cache.size());
  out << fmt::format("{} frames={} dim={}\n", out_path.string(), seq.frames(), seq.dim());
  return kExitOk;
}

// ---- init-extractor ------------------------------------------------------

int cmd_init_extractor(const Options& o, std::ostream& out) {
  if (o.out.empty()) throw UsageError("--out is required");
  const fs::path path = o.out;
  require_absent(path, o.force);
  if (!path.parent_path().empty()) fs::create_directories(path.parent_path());
  extractor::save_extractor_weights(extractor::ExtractorWeights::random(o.seed.value_or(0)), path);
  out << path.string() << "\n";
  return kExitOk;
}

// ---- train ---------------------------------------------------------------

struct SplitData {
  std::vector<data::LabeledSequence> train;
  std::vector<data::LabeledSequence> validation;
};

SplitData load_training_data(const data::Manifest& manifest) {
  if (manifest.in_split(data::Split::kTrain).empty()) {
    throw UsageError("manifest has no train split");
  }
  if (manifest.in_split(data::Split::kValidation).empty()) {
    throw UsageError("manifest has no validation split");
  }
  SplitData d;
  d.train = data::load_split(manifest, data::Split::kTrain, data::SplitUse::kTrainSegments).units;
  auto val = data::load_split(manifest, data::Split::kValidation, data::SplitUse::kFirstN);
  if (!val.skipped.empty()) {
    logger()->warn("{} validation video(s) shorter than {} frames excluded", val.skipped.size(),
                   data::kSegmentFrames);
  }
  d.validation = std::move(val.units);
  if (d.train.empty()) throw InvalidInputError("no training segments of 300 frames");
  if (d.validation.empty()) throw InvalidInputError("no usable validation videos");
  return d;
}

template <typename T>
models::TrainResult<models::SimpleAnn<T>> train_ann(const SplitData& d,
                                                    const models::TrainConfig& config,
                                                    io::Checkpoint& checkpoint) {
  auto arch = models::AnnArchitecture::standard(config.ann_wide_first);
  arch.input_dim = d.train.front().features.dim();
  arch.dropout = config.dropout;
  auto model = models::SimpleAnn<T>::build(arch, config.seed);
  const auto set = models::make_frame_set<T>(d.train);
  auto result = models::train<models::SimpleAnn<T>>(
      model, set, [&](const models::SimpleAnn<T>& m) { return models::validate_ann(m, d.validation); },
      config);
  checkpoint = model.to_checkpoint();
  models::add_optimizer_state(checkpoint, result.optimizer);
  return result;
}

template <typename T>
models::TrainResult<models::LstmModel<T>> train_lstm(const SplitData& d,
                                                     const models::TrainConfig& config,
                                                     io::Checkpoint& checkpoint) {
  models::LstmArchitecture arch;
  arch.input_dim = d.train.front().features.dim();
  arch.dropout = config.dropout;
  auto model = models::LstmModel<T>::build(arch, config.seed);
  const auto set = models::make_sequence_set<T>(d.train, arch.seq_len);
  auto result = models::train<models::LstmModel<T>>(
      model, set,
      [&](const models::LstmModel<T>& m) { return models::validate_lstm(m, d.validation); },
      config);
  checkpoint = model.to_checkpoint();
  models::add_optimizer_state(checkpoint, result.optimizer);
  return result;
}

int cmd_train(const Options& o, std::ostream& out) {
  if (o.model != "ann" && o.model != "lstm") throw UsageError("--model must be ann or lstm");
  if (o.out.empty()) throw UsageError("--out is required");
  auto config = models::TrainConfig::from_key_value(load_config(o.config));
  if (o.seed) config.seed = *o.seed;
  const fs::path dir = o.out;
  const fs::path ckpt_path = dir / "model.psqw";
  const fs::path history_path = dir / "history.csv";
  require_absent(ckpt_path, o.force);
  const auto manifest = data::load_manifest(require_file(o.manifest, "--manifest"));
  const auto d = load_training_data(manifest);

  io::Checkpoint checkpoint;
  models::TrainHistory history;
  const bool f64 = config.precision == models::Precision::kF64;
  if (o.model == "ann") {
    history = f64 ? train_ann<double>(d, config, checkpoint).history
                  : train_ann<float>(d, config, checkpoint).history;
  } else {
    history = f64 ? train_lstm<double>(d, config, checkpoint).history
                  : train_lstm<float>(d, config, checkpoint).history;
  }
  fs::create_directories(dir);
  io::write_checkpoint(checkpoint, ckpt_path);
  models::write_history_csv(history, history_path);
  const auto& best = history.best();
  out << fmt::format(
      "model={} epochs={} best_epoch={} stop_reason={} val_loss={:.6f} val_accuracy={:.4f} "
      "checkpoint={}\n",
      o.model, history.epochs.size(), history.best_epoch, models::to_string(history.stop_reason),
      best.val_loss, best.val_accuracy, ckpt_path.string());
  return kExitOk;
}

// ---- eval ----------------------------------------------------------------

template <typename Predict>
eval::EvalReport evaluate(const std::vector<data::LabeledSequence>& videos, Predict&& predict,
                          std::string name, const std::string& split) {
  std::vector<int> truth;
  std::vector<int> predicted;
  for (const auto& v : videos) {
    truth.push_back(to_index(v.label));
    predicted.push_back(to_index(predict(v)));
  }
  return eval::metrics(eval::confusion(predicted, truth), std::move(name), split);
}

template <typename T>
eval::EvalReport eval_checkpoint(const io::Checkpoint& c, bool ann,
                                 const std::vector<data::LabeledSequence>& videos,
                                 const std::string& name, const std::string& split) {
  if (ann) {
    const auto model = models::SimpleAnn<T>::from_checkpoint(c);
    return evaluate(
        videos,
        [&](const data::LabeledSequence& v) {
          return eval::majority_vote(model.predict_frames(v.features)).label;
        },
        name, split);
  }
  const auto model = models::LstmModel<T>::from_checkpoint(c);
  return evaluate(
      videos,
      [&](const data::LabeledSequence& v) {
        const auto p = model.predict_sequence(v.features);
        std::size_t best = 0;
        for (std::size_t k = 1; k < kNumClasses; ++k) {
          if (p[k] > p[best]) best = k;
        }
        return static_cast<Label>(best);
      },
      name, split);
}

int cmd_eval(const Options& o, std::ostream& out) {
  const auto format = [&] {
    try {
      return eval::parse_report_format(o.format);
    } catch (const ConfigError& e) {
      throw UsageError(e.what());
    }
  }();
  const data::Split split = [&] {
    try {
      return data::parse_split(o.split);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }();
  const auto checkpoint = io::read_checkpoint(require_file(o.weights, "--weights"));
  const bool is_ann = models::is_ann_checkpoint(checkpoint);
  if (!is_ann && !models::is_lstm_checkpoint(checkpoint)) {
    throw TopologyError("checkpoint holds neither an ann nor an lstm model");
  }
  std::string kind = is_ann ? "ann" : "lstm";
  if (!o.model.empty() && o.model != kind) {
    throw TopologyError("--model " + o.model + " but the checkpoint holds an " + kind + " model");
  }
  const auto manifest = data::load_manifest(require_file(o.manifest, "--manifest"));
  if (manifest.in_split(split).empty()) {
    throw UsageError("manifest has no " + std::string(data::split_name(split)) + " split");
  }
  auto loaded = data::load_split(manifest, split, data::SplitUse::kFirstN);
  if (!loaded.skipped.empty()) {
    std::string ids;
    for (const auto& s : loaded.skipped) ids += (ids.empty() ? "" : ", ") + s;
    logger()->warn("{} short video(s) excluded: {}", loaded.skipped.size(), ids);
  }
  if (loaded.units.empty()) throw InvalidInputError("no usable videos in the split");

  const std::string name = o.name.empty() ? default_display_name(kind) : o.name;
  const std::string split_text(data::split_name(split));
  const bool f64 =
      checkpoint.require(is_ann ? "dense1.weight" : "lstm1.w_input").dtype == io::DType::kF64;
  const std::size_t ties_before = eval::tie_break_count();
  const auto report =
      f64 ? eval_checkpoint<double>(checkpoint, is_ann, loaded.units, name, split_text)
          : eval_checkpoint<float>(checkpoint, is_ann, loaded.units, name, split_text);
  if (is_ann) {
    logger()->info("majority vote tie-breaks: {} of {} videos",
                   eval::tie_break_count() - ties_before, loaded.units.size());
  }
  const std::string doc = eval::render_report(std::span(&report, 1), format);
  if (o.out.empty()) {
    out << doc;
  } else {
    const fs::path path = o.out;
    if (!path.parent_path().empty()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InvalidInputError("cannot write " + path.string());
    f << doc;
  }
  return kExitOk;
}

// ---- verify --------------------------------------------------------------

int cmd_verify(const Options& o, std::ostream& out) {
  const auto results = run_verify(o.verify);
  std::size_t failed = 0;
  for (const auto& r : results) {
    out << (r.passed ? "[PASS] " : "[FAIL] ") << r.name;
    if (!r.detail.empty()) out << "  (" << r.detail << ")";
    out << "\n";
    if (!r.passed) ++failed;
  }
  out << fmt::format("{} checks, {} failed\n", results.size(), failed);
  return failed == 0 ? kExitOk : kExitFailure;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"painseq: pain-level classification from facial video features"};
  app.require_subcommand(1);
  Options o;
  bool verbose = false;
  bool quiet = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");
  app.add_flag("-q,--quiet", quiet, "Warnings and errors only");

  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "Seed override")->envname("PAINSEQ_SEED");
  };

  auto* synth = app.add_subcommand("synth", "Generate a synthetic feature dataset");
  synth->add_option("--config", o.config, "SynthConfig key = value file");
  synth->add_option("--out", o.out, "Output directory")->required();
  synth->add_flag("--force", o.force, "Overwrite an existing manifest");
  add_seed(synth);

  auto* extract = app.add_subcommand("extract", "Extract per-frame features from PPM frames");
  extract->add_option("--weights", o.weights, "Extractor checkpoint (PSQW)")->required();
  extract->add_option("--frames", o.frames, "Directory of .ppm frames, sorted by name")->required();
  extract->add_option("--bbox", o.bbox, "Bounding-box sidecar (index,x,y,w,h per line)");
  extract->add_option("--fps", o.fps, "Frame rate recorded in the output");
  extract->add_option("--out", o.out, "Output FSEQ file")->required();
  extract->add_flag("--force", o.force, "Overwrite an existing output");

  auto* init = app.add_subcommand("init-extractor",
                                  "Write seeded random extractor weights (pipeline testing)");
  init->add_option("--out", o.out, "Output PSQW file")->required();
  init->add_flag("--force", o.force, "Overwrite an existing output");
  add_seed(init);

  auto* train = app.add_subcommand("train", "Train a classifier");
  train->add_option("--manifest", o.manifest, "Dataset manifest CSV")->required();
  train->add_option("--model", o.model, "ann or lstm")->required();
  train->add_option("--config", o.config, "TrainConfig key = value file");
  train->add_option("--out", o.out, "Output directory (model.psqw, history.csv)")->required();
  train->add_flag("--force", o.force, "Overwrite an existing checkpoint");
  add_seed(train);

  auto* evalc = app.add_subcommand("eval", "Evaluate a checkpoint on a manifest split");
  evalc->add_option("--manifest", o.manifest, "Dataset manifest CSV")->required();
  evalc->add_option("--weights,--checkpoint", o.weights, "Model checkpoint (PSQW)")->required();
  evalc->add_option("--model", o.model, "Expected model kind (ann or lstm)");
  evalc->add_option("--split", o.split, "train, validation or test");
  evalc->add_option("--format", o.format, "text, csv or json");
  evalc->add_option("--name", o.name, "Model name shown in the report");
  evalc->add_option("--out", o.out, "Write the report here instead of stdout");

  auto* verify = app.add_subcommand("verify", "Run the property and oracle suite");
  verify->add_option("--seeds", o.verify.seeds, "Random seeds per gradient check");
  verify->add_flag("--inject-grad-fault", o.verify.inject_grad_fault)->group("");
  verify->add_flag("--corrupt-fseq", o.verify.corrupt_fseq)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (verbose) logger()->set_level(spdlog::level::debug);
  if (quiet) logger()->set_level(spdlog::level::warn);
  if (o.verify.seeds == 0) {
    err << "error: --seeds must be >= 1\n";
    return kExitUsage;
  }

  try {
    if (synth->parsed()) return cmd_synth(o, out);
    if (extract->parsed()) return cmd_extract(o, out);
    if (init->parsed()) return cmd_init_extractor(o, out);
    if (train->parsed()) return cmd_train(o, out);
    if (evalc->parsed()) return cmd_eval(o, out);
    if (verify->parsed()) return cmd_verify(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("painseq");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace painseq::cli
