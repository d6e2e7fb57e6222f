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

#pragma once

// Synthetic stand-in for a private pain-video feature dataset.
//
// Each participant gets one no-pain recording of `no_pain_frames` frames and
// `repetitions` recordings of `pain_frames` frames for each pain class. Frame
// features are
//
//   class_separation * u_label + participant offset + temporal variation
//
// where u_0, u_1, u_2 are orthonormal directions, the participant offset is
// N(0, participant_scale^2) per feature, and temporal variation is white
// N(0, noise_scale^2) noise plus a slow sinusoidal drift of amplitude
// noise_scale * drift_scale along a random unit direction per recording.
// noise_scale = 0 therefore makes every frame of a (participant, class)
// identical. Generation is a pure function of the config.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "painseq/data/feature_sequence.hpp"
#include "painseq/data/manifest.hpp"
#include "painseq/io/key_value.hpp"

namespace painseq::data {

struct SynthConfig {
  std::size_t train_participants = 12;
  std::size_t validation_participants = 4;
  std::size_t test_participants = 4;
  std::size_t repetitions = 4;
  std::size_t no_pain_frames = 1800;
  std::size_t pain_frames = 300;
  std::size_t dim = 1024;
  double fps = 30.0;
  double class_separation = 4.0;
  double participant_scale = 0.5;
  double noise_scale = 1.0;
  double drift_scale = 0.5;
  std::uint64_t seed = 2024;

  // ConfigError describing the first invalid field.
  void validate() const;

  static SynthConfig from_key_value(const io::KeyValueConfig& kv);
};

struct SynthSample {
  ManifestEntry entry;
  FeatureSequence features;
};

// Calls `sink` once per recording in manifest order.
void synth_generate(const SynthConfig& config,
                    const std::function<void(const ManifestEntry&, FeatureSequence&&)>& sink);

std::vector<SynthSample> synth_sequences(const SynthConfig& config);

// Writes <out_dir>/features/<sample_id>.fseq and <out_dir>/manifest.csv.
Manifest synth_dataset(const SynthConfig& config, const std::filesystem::path& out_dir);

}  // namespace painseq::data
