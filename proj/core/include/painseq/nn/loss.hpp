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

#include "painseq/labels.hpp"
#include "painseq/nn/tensor.hpp"

namespace painseq::nn {

enum class ClassWeightMode { kInverseFrequency, kUniform };

struct ClassWeights {
  std::array<double, kNumClasses> weight{1.0, 1.0, 1.0};
  ClassWeightMode mode = ClassWeightMode::kUniform;

  static ClassWeights uniform() { return {}; }
};

// w_c = N / (K n_c). The count-weighted mean of the result is exactly 1 and it
// is invariant under scaling all counts by a common factor.
ClassWeights class_weights_from_counts(std::span<const std::size_t> counts);

template <typename T>
struct LossResult {
  double loss = 0.0;
  Tensor<T> grad_logits;  // d(loss)/d(pre-softmax logits)
};

// Mean over the batch of -w[y_i] log p[i, y_i]. `probs` rows must lie on the
// simplex (within 1e-6); the returned gradient is taken with respect to the
// logits that produced them (p - onehot, weighted, divided by batch size).
template <typename T>
LossResult<T> weighted_ce_loss(const Tensor<T>& probs, std::span<const int> labels,
                               const ClassWeights& weights);

// Same loss computed from logits through a stable log-softmax.
template <typename T>
LossResult<T> weighted_ce_from_logits(const Tensor<T>& logits, std::span<const int> labels,
                                      const ClassWeights& weights);

}  // namespace painseq::nn
