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

#include "painseq/nn/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "painseq/errors.hpp"
#include "painseq/nn/dense.hpp"

namespace painseq::nn {

ClassWeights class_weights_from_counts(std::span<const std::size_t> counts) {
  if (counts.size() != kNumClasses) {
    throw DimensionError("expected " + std::to_string(kNumClasses) + " class counts, got " +
                         std::to_string(counts.size()));
  }
  std::size_t total = 0;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) {
      throw EmptyClassError("class " + std::string(label_name(static_cast<Label>(c))) +
                            " has no training samples");
    }
    total += counts[c];
  }
  ClassWeights w;
  w.mode = ClassWeightMode::kInverseFrequency;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    w.weight[c] = static_cast<double>(total) /
                  (static_cast<double>(kNumClasses) * static_cast<double>(counts[c]));
  }
  return w;
}

namespace {

template <typename T>
void check_batch(const Tensor<T>& t, std::span<const int> labels) {
  if (t.rank() != 2 || t.dim(1) != kNumClasses) {
    throw DimensionError("loss input must be (batch x 3), got " + shape_string(t.shape()));
  }
  if (labels.size() != t.dim(0)) {
    throw DimensionError("loss got " + std::to_string(labels.size()) + " labels for batch of " +
                         std::to_string(t.dim(0)));
  }
  for (int y : labels) label_from_index(y);
}

}  // namespace

template <typename T>
LossResult<T> weighted_ce_loss(const Tensor<T>& probs, std::span<const int> labels,
                               const ClassWeights& weights) {
  check_batch(probs, labels);
  const std::size_t batch = probs.dim(0);
  for (std::size_t i = 0; i < batch; ++i) {
    double s = 0.0;
    for (std::size_t c = 0; c < kNumClasses; ++c) s += probs.at(i, c);
    if (std::abs(s - 1.0) > 1e-6) {
      throw InvalidInputError("probability row " + std::to_string(i) + " sums to " +
                              std::to_string(s));
    }
  }
  LossResult<T> r;
  r.grad_logits = Tensor<T>(probs.shape());
  const double inv_b = 1.0 / static_cast<double>(batch);
  double total = 0.0;
  for (std::size_t i = 0; i < batch; ++i) {
    const auto y = static_cast<std::size_t>(labels[i]);
    const double w = weights.weight[y];
    // Clamp keeps the loss finite for a hard zero probability.
    const double p = std::max(static_cast<double>(probs.at(i, y)), 1e-300);
    total -= w * std::log(p);
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      const double onehot = c == y ? 1.0 : 0.0;
      r.grad_logits.at(i, c) = static_cast<T>(w * (probs.at(i, c) - onehot) * inv_b);
    }
  }
  r.loss = total * inv_b;
  return r;
}

template <typename T>
LossResult<T> weighted_ce_from_logits(const Tensor<T>& logits, std::span<const int> labels,
                                      const ClassWeights& weights) {
  check_batch(logits, labels);
  const std::size_t batch = logits.dim(0);
  const Tensor<T> probs = softmax_rows(logits);
  LossResult<T> r;
  r.grad_logits = Tensor<T>(logits.shape());
  const double inv_b = 1.0 / static_cast<double>(batch);
  double total = 0.0;
  for (std::size_t i = 0; i < batch; ++i) {
    const auto y = static_cast<std::size_t>(labels[i]);
    const double w = weights.weight[y];
    double mx = logits.at(i, 0);
    for (std::size_t c = 1; c < kNumClasses; ++c) mx = std::max(mx, double(logits.at(i, c)));
    double sum = 0.0;
    for (std::size_t c = 0; c < kNumClasses; ++c) sum += std::exp(logits.at(i, c) - mx);
    const double log_p = logits.at(i, y) - mx - std::log(sum);
    total -= w * log_p;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      const double onehot = c == y ? 1.0 : 0.0;
      r.grad_logits.at(i, c) = static_cast<T>(w * (probs.at(i, c) - onehot) * inv_b);
    }
  }
  r.loss = total * inv_b;
  return r;
}

template LossResult<float> weighted_ce_loss(const Tensor<float>&, std::span<const int>,
                                            const ClassWeights&);
template LossResult<double> weighted_ce_loss(const Tensor<double>&, std::span<const int>,
                                             const ClassWeights&);
template LossResult<float> weighted_ce_from_logits(const Tensor<float>&, std::span<const int>,
                                                   const ClassWeights&);
template LossResult<double> weighted_ce_from_logits(const Tensor<double>&,
                                                    std::span<const int>, const ClassWeights&);

}  // namespace painseq::nn
