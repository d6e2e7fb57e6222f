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

#include <array>
#include <span>
#include <string>
#include <vector>

#include "painseq/data/feature_sequence.hpp"
#include "painseq/data/manifest.hpp"
#include "painseq/data/segment.hpp"

namespace painseq::data {

// One labeled training or evaluation unit.
struct LabeledSequence {
  std::string sample_id;
  std::string participant_id;
  Label label = Label::kNoPain;
  FeatureSequence features;
};

// How a split's videos become units.
enum class SplitUse {
  kTrainSegments,  // non-overlapping windows, trailing partial window dropped
  kFirstN,         // first `window` frames of every video; shorter videos skipped
};

enum class UnitLevel { kSequence, kFrame };

struct LoadedSplit {
  std::vector<LabeledSequence> units;
  std::vector<std::string> skipped;  // sample ids too short to use
};

LoadedSplit load_split(const Manifest& manifest, Split split, SplitUse use,
                       std::size_t window = kSegmentFrames);

// Same transformation for in-memory videos.
LoadedSplit prepare_units(std::span<const LabeledSequence> videos, SplitUse use,
                          std::size_t window = kSegmentFrames);

// Per-class unit counts; frame level counts every frame of every unit.
// EmptyClassError if any class has no units.
std::array<std::size_t, kNumClasses> dataset_counts(std::span<const LabeledSequence> units,
                                                    UnitLevel level);

// Counts for a manifest split after segmentation, reading FSEQ headers only.
std::array<std::size_t, kNumClasses> dataset_counts(const Manifest& manifest, Split split,
                                                    UnitLevel level,
                                                    std::size_t window = kSegmentFrames);

}  // namespace painseq::data
