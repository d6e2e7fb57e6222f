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
#include <cstddef>

#include "painseq/labels.hpp"
#include "painseq/nn/tensor.hpp"

namespace painseq::eval {

struct VoteResult {
  Label label = Label::kNoPain;
  std::array<std::size_t, kNumClasses> counts{};  // frame argmax histogram
  bool tie_broken = false;  // the modal count was shared by several classes
};

// Per-frame argmax (lowest index among equal probabilities), then the modal
// class. A tie for the mode goes to the tied class with the larger summed
// probability over all frames, then to the lower class index. Every tie-break
// is logged. InvalidInputError for zero frames, DimensionError unless the
// input is (frames x 3).
template <typename T>
VoteResult majority_vote(const nn::Tensor<T>& frame_probs);

// Number of majority_vote calls in this process that needed a tie-break.
std::size_t tie_break_count();

}  // namespace painseq::eval
