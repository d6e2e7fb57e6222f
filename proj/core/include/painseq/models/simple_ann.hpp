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

// Frame-wise classifier: a stack of dense layers with relu on hidden layers,
// softmax on the output and dropout between consecutive layers. Videos are
// labelled by majority vote over per-frame predictions (see eval/voting.hpp).

#include <cstdint>
#include <span>
#include <vector>

#include "painseq/data/feature_sequence.hpp"
#include "painseq/io/checkpoint.hpp"
#include "painseq/labels.hpp"
#include "painseq/nn/dense.hpp"
#include "painseq/nn/dropout.hpp"
#include "painseq/nn/init.hpp"
#include "painseq/nn/loss.hpp"

namespace painseq::models {

struct AnnArchitecture {
  std::size_t input_dim = 1024;
  std::vector<std::size_t> hidden{128, 32};
  std::size_t classes = kNumClasses;
  double dropout = 0.3;

  // Default reading of the widths (1024, 128, 32, 3): the first is the input.
  // `wide_first` adds a trainable 1024-unit layer in front instead.
  static AnnArchitecture standard(bool wide_first = false);

  std::size_t parameter_count() const;
};

template <typename T>
class SimpleAnn {
 public:
  using value_type = T;

  static SimpleAnn build(const AnnArchitecture& arch, std::uint64_t seed);
  // All weights and biases zero.
  static SimpleAnn zeros(const AnnArchitecture& arch);

  const AnnArchitecture& architecture() const { return arch_; }
  const std::vector<nn::DenseLayer<T>>& layers() const { return layers_; }
  std::vector<nn::DenseLayer<T>>& layers() { return layers_; }

  // Blocks "dense<k>.weight" / "dense<k>.bias", k from 1.
  std::vector<nn::ParamRef<T>> parameters();
  std::size_t parameter_count() const;

  // Train-mode forward and backward on (batch x input_dim). Fills the
  // gradients behind parameters() and returns the weighted loss.
  double loss_and_grads(const nn::Tensor<T>& x, std::span<const int> labels,
                        const nn::ClassWeights& weights, nn::Rng& rng);

  // Inference: dropout off, rows on the simplex.
  nn::Tensor<T> predict_batch(const nn::Tensor<T>& x) const;
  // One row per frame. DimensionError unless seq.dim() == input_dim.
  nn::Tensor<T> predict_frames(const data::FeatureSequence& seq) const;

  io::Checkpoint to_checkpoint() const;
  // Layer count and widths come from the checkpoint shapes.
  static SimpleAnn from_checkpoint(const io::Checkpoint& checkpoint);

 private:
  AnnArchitecture arch_;
  std::vector<nn::DenseLayer<T>> layers_;
  std::vector<nn::DenseGrads<T>> grads_;
  void init_grads();
};

// True when the checkpoint holds a SimpleAnn.
bool is_ann_checkpoint(const io::Checkpoint& checkpoint);

}  // namespace painseq::models
