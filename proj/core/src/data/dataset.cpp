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

#include "painseq/data/dataset.hpp"

#include "painseq/data/fseq.hpp"
#include "painseq/errors.hpp"
#include "painseq/log.hpp"

namespace painseq::data {
namespace {

void append_units(LoadedSplit& out, const LabeledSequence& video, SplitUse use,
                  std::size_t window) {
  if (use == SplitUse::kTrainSegments) {
    for (auto& seg : segment_sequence(video.features, window, window)) {
      out.units.push_back({video.sample_id, video.participant_id, video.label, std::move(seg)});
    }
    return;
  }
  if (video.features.frames() < window) {
    logger()->warn("skipping '{}': {} frames, needs {}", video.sample_id,
                   video.features.frames(), window);
    out.skipped.push_back(video.sample_id);
    return;
  }
  out.units.push_back({video.sample_id, video.participant_id, video.label,
                       take_first_n(video.features, window, video.sample_id)});
}

void check_nonempty(const std::array<std::size_t, kNumClasses>& counts) {
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    if (counts[c] == 0) {
      throw EmptyClassError("class " + std::string(label_name(static_cast<Label>(c))) +
                            " has no units");
    }
  }
}

}  // namespace

LoadedSplit prepare_units(std::span<const LabeledSequence> videos, SplitUse use,
                          std::size_t window) {
  LoadedSplit out;
  for (const auto& v : videos) append_units(out, v, use, window);
  return out;
}

LoadedSplit load_split(const Manifest& manifest, Split split, SplitUse use, std::size_t window) {
  LoadedSplit out;
  for (const auto& e : manifest.entries) {
    if (e.split != split) continue;
    LabeledSequence video{e.sample_id, e.participant_id, e.label,
                          read_fseq(manifest.resolve(e))};
    video.features.source_id = e.sample_id;
    video.features.participant_id = e.participant_id;
    append_units(out, video, use, window);
  }
  return out;
}

std::array<std::size_t, kNumClasses> dataset_counts(std::span<const LabeledSequence> units,
                                                    UnitLevel level) {
  std::array<std::size_t, kNumClasses> counts{};
  for (const auto& u : units) {
    counts[static_cast<std::size_t>(to_index(u.label))] +=
        level == UnitLevel::kFrame ? u.features.frames() : 1;
  }
  check_nonempty(counts);
  return counts;
}

std::array<std::size_t, kNumClasses> dataset_counts(const Manifest& manifest, Split split,
                                                    UnitLevel level, std::size_t window) {
  if (window == 0) throw InvalidInputError("window must be >= 1");
  std::array<std::size_t, kNumClasses> counts{};
  for (const auto& e : manifest.entries) {
    if (e.split != split) continue;
    const auto header = read_fseq_header(manifest.resolve(e));
    const std::size_t segments = header.frames / window;
    counts[static_cast<std::size_t>(to_index(e.label))] +=
        level == UnitLevel::kFrame ? segments * window : segments;
  }
  check_nonempty(counts);
  return counts;
}

}  // namespace painseq::data
