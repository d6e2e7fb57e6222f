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

#include "painseq/data/synth.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "painseq/data/fseq.hpp"
#include "painseq/errors.hpp"
#include "painseq/nn/init.hpp"

namespace painseq::data {
namespace {

std::vector<std::vector<double>> orthonormal_directions(std::size_t count, std::size_t dim,
                                                        nn::Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::vector<double>> dirs;
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<double> v(dim);
    for (auto& x : v) x = normal(rng);
    for (const auto& u : dirs) {
      double dot = 0.0;
      for (std::size_t i = 0; i < dim; ++i) dot += v[i] * u[i];
      for (std::size_t i = 0; i < dim; ++i) v[i] -= dot * u[i];
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (auto& x : v) x /= norm;
    dirs.push_back(std::move(v));
  }
  return dirs;
}

std::string participant_name(std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "P%03zu", index + 1);
  return buf;
}

}  // namespace

void SynthConfig::validate() const {
  auto positive = [](std::size_t v, const char* name) {
    if (v == 0) throw ConfigError(std::string("synth: ") + name + " must be >= 1");
  };
  positive(train_participants, "train_participants");
  positive(validation_participants, "validation_participants");
  positive(test_participants, "test_participants");
  positive(repetitions, "repetitions");
  positive(no_pain_frames, "no_pain_frames");
  positive(pain_frames, "pain_frames");
  positive(dim, "dim");
  if (dim < kNumClasses) throw ConfigError("synth: dim must be >= 3 for orthogonal class means");
  if (!(fps > 0.0)) throw ConfigError("synth: fps must be positive");
  if (!(noise_scale >= 0.0)) throw ConfigError("synth: noise_scale must be >= 0");
  if (!(participant_scale >= 0.0)) throw ConfigError("synth: participant_scale must be >= 0");
  if (!(drift_scale >= 0.0)) throw ConfigError("synth: drift_scale must be >= 0");
  if (!std::isfinite(class_separation)) throw ConfigError("synth: class_separation must be finite");
}

SynthConfig SynthConfig::from_key_value(const io::KeyValueConfig& kv) {
  kv.reject_unknown({"train_participants", "validation_participants", "test_participants",
                     "repetitions", "no_pain_frames", "pain_frames", "dim", "fps",
                     "class_separation", "participant_scale", "noise_scale", "drift_scale",
                     "seed"});
  SynthConfig c;
  c.train_participants = kv.get_uint("train_participants", c.train_participants);
  c.validation_participants = kv.get_uint("validation_participants", c.validation_participants);
  c.test_participants = kv.get_uint("test_participants", c.test_participants);
  c.repetitions = kv.get_uint("repetitions", c.repetitions);
  c.no_pain_frames = kv.get_uint("no_pain_frames", c.no_pain_frames);
  c.pain_frames = kv.get_uint("pain_frames", c.pain_frames);
  c.dim = kv.get_uint("dim", c.dim);
  c.fps = kv.get_double("fps", c.fps);
  c.class_separation = kv.get_double("class_separation", c.class_separation);
  c.participant_scale = kv.get_double("participant_scale", c.participant_scale);
  c.noise_scale = kv.get_double("noise_scale", c.noise_scale);
  c.drift_scale = kv.get_double("drift_scale", c.drift_scale);
  c.seed = kv.get_uint("seed", c.seed);
  c.validate();
  return c;
}

void synth_generate(const SynthConfig& config,
                    const std::function<void(const ManifestEntry&, FeatureSequence&&)>& sink) {
  config.validate();
  nn::Rng rng(config.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t dim = config.dim;
  const auto class_dirs = orthonormal_directions(kNumClasses, dim, rng);
  // One drift period is ten seconds of video.
  const double omega = 2.0 * std::numbers::pi / (10.0 * config.fps);

  auto make_sequence = [&](const std::vector<double>& base, std::size_t frames) {
    std::vector<double> drift_dir(dim);
    double norm = 0.0;
    for (auto& x : drift_dir) {
      x = normal(rng);
      norm += x * x;
    }
    norm = std::sqrt(norm);
    const double phase = 2.0 * std::numbers::pi * nn::uniform01(rng);
    const double drift_amp = config.noise_scale * config.drift_scale;
    std::vector<float> values(frames * dim);
    for (std::size_t t = 0; t < frames; ++t) {
      const double drift = drift_amp * std::sin(omega * static_cast<double>(t) + phase) / norm;
      for (std::size_t i = 0; i < dim; ++i) {
        double v = base[i] + drift * drift_dir[i];
        if (config.noise_scale > 0.0) v += config.noise_scale * normal(rng);
        values[t * dim + i] = static_cast<float>(v);
      }
    }
    return FeatureSequence::from_values(frames, dim, config.fps, std::move(values));
  };

  const std::array<std::pair<Split, std::size_t>, 3> splits = {{
      {Split::kTrain, config.train_participants},
      {Split::kValidation, config.validation_participants},
      {Split::kTest, config.test_participants},
  }};
  std::size_t participant_index = 0;
  for (const auto& [split, count] : splits) {
    for (std::size_t p = 0; p < count; ++p, ++participant_index) {
      const std::string pid = participant_name(participant_index);
      std::vector<double> offset(dim);
      for (auto& x : offset) x = config.participant_scale * normal(rng);

      auto emit = [&](Label label, const std::string& suffix, std::size_t frames) {
        std::vector<double> base(dim);
        const auto& u = class_dirs[static_cast<std::size_t>(to_index(label))];
        for (std::size_t i = 0; i < dim; ++i) {
          base[i] = config.class_separation * u[i] + offset[i];
        }
        ManifestEntry e;
        e.sample_id = pid + "_" + suffix;
        e.participant_id = pid;
        e.label = label;
        e.split = split;
        e.path = std::filesystem::path("features") / (e.sample_id + ".fseq");
        FeatureSequence seq = make_sequence(base, frames);
        seq.source_id = e.sample_id;
        seq.participant_id = pid;
        sink(e, std::move(seq));
      };

      emit(Label::kNoPain, "nopain", config.no_pain_frames);
      for (std::size_t r = 0; r < config.repetitions; ++r) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "low_%02zu", r + 1);
        emit(Label::kLowPain, buf, config.pain_frames);
        std::snprintf(buf, sizeof buf, "high_%02zu", r + 1);
        emit(Label::kHighPain, buf, config.pain_frames);
      }
    }
  }
}

std::vector<SynthSample> synth_sequences(const SynthConfig& config) {
  std::vector<SynthSample> out;
  synth_generate(config, [&](const ManifestEntry& e, FeatureSequence&& seq) {
    out.push_back({e, std::move(seq)});
  });
  return out;
}

Manifest synth_dataset(const SynthConfig& config, const std::filesystem::path& out_dir) {
  Manifest m;
  m.base_dir = out_dir;
  std::filesystem::create_directories(out_dir / "features");
  synth_generate(config, [&](const ManifestEntry& e, FeatureSequence&& seq) {
    write_fseq(seq, out_dir / e.path);
    m.entries.push_back(e);
  });
  write_manifest(m, out_dir / "manifest.csv");
  return m;
}

}  // namespace painseq::data
