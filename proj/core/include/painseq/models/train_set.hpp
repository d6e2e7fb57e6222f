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

#include <span>
#include <vector>

#include "painseq/data/dataset.hpp"
#include "painseq/nn/tensor.hpp"

namespace painseq::models {

// Training units stacked along axis 0 with one label per unit.
template <typename T>
struct TrainSet {
  nn::Tensor<T> inputs;  // units x ...
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
  std::size_t unit_size() const { return size() == 0 ? 0 : inputs.size() / size(); }

  // Rows `indices` gathered into a (indices.size() x ...) tensor.
  nn::Tensor<T> gather(std::span<const std::size_t> indices) const;
  std::vector<int> gather_labels(std::span<const std::size_t> indices) const;
};

// Every frame of every unit becomes one (1 x dim) unit carrying the parent label.
template <typename T>
TrainSet<T> make_frame_set(std::span<const data::LabeledSequence> units);

// Each unit must have exactly `frames` frames; stacked into (units x frames x dim).
template <typename T>
TrainSet<T> make_sequence_set(std::span<const data::LabeledSequence> units, std::size_t frames);

}  // namespace painseq::models
