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

#include "painseq/models/validation.hpp"

#include <algorithm>
#include <cmath>

#include "painseq/errors.hpp"
#include "painseq/eval/voting.hpp"

namespace painseq::models {
namespace {

// Matches the clamp used by the training loss.
double neg_log(double p) { return -std::log(std::max(p, 1e-300)); }

}  // namespace

template <typename T>
Validation validate_ann(const SimpleAnn<T>& model, std::span<const data::LabeledSequence> videos) {
  if (videos.empty()) throw InvalidInputError("validation set is empty");
  double loss = 0.0;
  std::size_t frames = 0;
  std::size_t correct = 0;
  for (const auto& v : videos) {
    const auto probs = model.predict_frames(v.features);
    const auto y = static_cast<std::size_t>(to_index(v.label));
    for (std::size_t f = 0; f < probs.dim(0); ++f) loss += neg_log(probs.at(f, y));
    frames += probs.dim(0);
    if (eval::majority_vote(probs).label == v.label) ++correct;
  }
  return {loss / static_cast<double>(frames),
          static_cast<double>(correct) / static_cast<double>(videos.size())};
}

template <typename T>
Validation validate_lstm(const LstmModel<T>& model,
                         std::span<const data::LabeledSequence> sequences) {
  if (sequences.empty()) throw InvalidInputError("validation set is empty");
  const auto& arch = model.architecture();
  constexpr std::size_t kChunk = 32;
  double loss = 0.0;
  std::size_t correct = 0;
  for (std::size_t start = 0; start < sequences.size(); start += kChunk) {
    const std::size_t n = std::min(kChunk, sequences.size() - start);
    nn::Tensor<T> x({n, arch.seq_len, arch.input_dim});
    for (std::size_t i = 0; i < n; ++i) {
      const auto& s = sequences[start + i];
      if (s.features.frames() != arch.seq_len) {
        throw ShortVideoError("sequence '" + s.sample_id + "' has " +
                              std::to_string(s.features.frames()) + " frames, expected " +
                              std::to_string(arch.seq_len));
      }
      if (s.features.dim() != arch.input_dim) {
        throw DimensionError("sequence '" + s.sample_id + "' has dim " +
                             std::to_string(s.features.dim()));
      }
      s.features.copy_rows(0, arch.seq_len, x.data() + i * arch.seq_len * arch.input_dim);
    }
    const auto probs = model.predict_batch(x);
    for (std::size_t i = 0; i < n; ++i) {
      const auto y = static_cast<std::size_t>(to_index(sequences[start + i].label));
      loss += neg_log(probs.at(i, y));
      std::size_t best = 0;
      for (std::size_t c = 1; c < kNumClasses; ++c) {
        if (probs.at(i, c) > probs.at(i, best)) best = c;
      }
      if (best == y) ++correct;
    }
  }
  const double n = static_cast<double>(sequences.size());
  return {loss / n, static_cast<double>(correct) / n};
}

template Validation validate_ann(const SimpleAnn<float>&, std::span<const data::LabeledSequence>);
template Validation validate_ann(const SimpleAnn<double>&,
                                 std::span<const data::LabeledSequence>);
template Validation validate_lstm(const LstmModel<float>&,
                                  std::span<const data::LabeledSequence>);
template Validation validate_lstm(const LstmModel<double>&,
                                  std::span<const data::LabeledSequence>);

}  // namespace painseq::models
