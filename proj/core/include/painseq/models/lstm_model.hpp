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

// Sequence classifier:
//
//   input (batch x time x in) -> batch-norm (over batch x time)
//   -> LSTM(lstm1) -> batch-norm (over batch x time) -> dropout
//   -> LSTM(lstm2), final hidden state -> batch-norm (over batch) -> dropout
//   -> dense(dense, relu) -> dense(classes, softmax)

#include <cstdint>
#include <span>
#include <vector>

#include "painseq/data/feature_sequence.hpp"
#include "painseq/io/checkpoint.hpp"
#include "painseq/labels.hpp"
#include "painseq/nn/batchnorm.hpp"
#include "painseq/nn/dense.hpp"
#include "painseq/nn/init.hpp"
#include "painseq/nn/loss.hpp"
#include "painseq/nn/lstm.hpp"

namespace painseq::models {

struct LstmArchitecture {
  std::size_t input_dim = 1024;
  std::size_t lstm1 = 32;
  std::size_t lstm2 = 16;
  std::size_t dense = 16;
  std::size_t classes = kNumClasses;
  std::size_t seq_len = 300;
  double dropout = 0.3;
  double bn_momentum = 0.9;
  double bn_epsilon = 1e-5;

  // Same layer sequence at toy widths (5 frames of 8 features).
  static LstmArchitecture scaled_down();

  std::size_t parameter_count() const;
};

template <typename T>
class LstmModel {
 public:
  using value_type = T;

  static LstmModel build(const LstmArchitecture& arch, std::uint64_t seed);

  const LstmArchitecture& architecture() const { return arch_; }

  nn::BatchNormLayer<T> bn_input;
  nn::LstmLayer<T> lstm1;
  nn::BatchNormLayer<T> bn1;
  nn::LstmLayer<T> lstm2;
  nn::BatchNormLayer<T> bn2;
  nn::DenseLayer<T> fc1;
  nn::DenseLayer<T> fc2;

  // Trainable blocks, named "<layer>.<part>".
  std::vector<nn::ParamRef<T>> parameters();
  std::size_t parameter_count() const;

  // Train-mode forward and backward on (batch x seq_len x input_dim); batch
  // statistics also update the running statistics. Throws
  // DegenerateBatchError for a batch of one sequence.
  double loss_and_grads(const nn::Tensor<T>& x, std::span<const int> labels,
                        const nn::ClassWeights& weights, nn::Rng& rng);

  // Inference on (batch x seq_len x input_dim): batch-norm uses running
  // statistics, dropout is off.
  nn::Tensor<T> predict_batch(const nn::Tensor<T>& x) const;
  // One simplex row. ShortVideoError unless seq.frames() == seq_len.
  nn::Tensor<T> predict_sequence(const data::FeatureSequence& seq) const;

  io::Checkpoint to_checkpoint() const;
  static LstmModel from_checkpoint(const io::Checkpoint& checkpoint);

 private:
  LstmArchitecture arch_;
  struct Grads {
    nn::Tensor<T> bn_input_gamma, bn_input_beta;
    nn::LstmGrads<T> lstm1;
    nn::Tensor<T> bn1_gamma, bn1_beta;
    nn::LstmGrads<T> lstm2;
    nn::Tensor<T> bn2_gamma, bn2_beta;
    nn::DenseGrads<T> fc1, fc2;
  } grads_;
  void init_grads();
  void check_input(const nn::Tensor<T>& x) const;
};

bool is_lstm_checkpoint(const io::Checkpoint& checkpoint);

}  // namespace painseq::models
