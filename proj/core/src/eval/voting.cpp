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

#include "painseq/eval/voting.hpp"

#include <atomic>

#include "painseq/errors.hpp"
#include "painseq/log.hpp"

namespace painseq::eval {
namespace {

std::atomic<std::size_t> g_tie_breaks{0};

}  // namespace

template <typename T>
VoteResult majority_vote(const nn::Tensor<T>& frame_probs) {
  if (frame_probs.rank() != 2 || frame_probs.dim(1) != kNumClasses) {
    throw DimensionError("majority_vote expects (frames x 3), got " +
                         nn::shape_string(frame_probs.shape()));
  }
  const std::size_t frames = frame_probs.dim(0);
  if (frames == 0) throw InvalidInputError("majority_vote needs at least one frame");

  VoteResult r;
  std::array<double, kNumClasses> mass{};
  for (std::size_t f = 0; f < frames; ++f) {
    std::size_t best = 0;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      mass[c] += static_cast<double>(frame_probs.at(f, c));
      if (frame_probs.at(f, c) > frame_probs.at(f, best)) best = c;
    }
    ++r.counts[best];
  }

  std::size_t top = 0;
  std::size_t tied = 0;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    if (r.counts[c] > r.counts[top]) top = c;
  }
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    if (r.counts[c] == r.counts[top]) ++tied;
  }
  if (tied > 1) {
    std::size_t pick = top;
    for (std::size_t c = top + 1; c < kNumClasses; ++c) {
      if (r.counts[c] == r.counts[top] && mass[c] > mass[pick]) pick = c;
    }
    top = pick;
    r.tie_broken = true;
    ++g_tie_breaks;
    logger()->debug("majority vote tie ({}/{}/{} frames), broken in favour of {}", r.counts[0],
                   r.counts[1], r.counts[2], label_name(static_cast<Label>(top)));
  }
  r.label = static_cast<Label>(top);
  return r;
}

std::size_t tie_break_count() { return g_tie_breaks.load(); }

template VoteResult majority_vote(const nn::Tensor<float>&);
template VoteResult majority_vote(const nn::Tensor<double>&);

}  // namespace painseq::eval
