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

#include <string_view>
#include <vector>

#include "painseq/data/feature_sequence.hpp"

namespace painseq::data {

inline constexpr std::size_t kSegmentFrames = 300;  // 10 s at 30 fps

// Consecutive windows starting every `hop` frames; a trailing partial window
// is dropped. Returns an empty list (and logs) when frames < window.
std::vector<FeatureSequence> segment_sequence(const FeatureSequence& seq,
                                              std::size_t window = kSegmentFrames,
                                              std::size_t hop = kSegmentFrames);

// First n frames. ShortVideoError naming `sample_id` if the sequence is shorter.
FeatureSequence take_first_n(const FeatureSequence& seq, std::size_t n = kSegmentFrames,
                             std::string_view sample_id = {});

}  // namespace painseq::data
