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

#include "painseq/models/train_set.hpp"

#include <algorithm>

#include "painseq/errors.hpp"

namespace painseq::models {
namespace {

std::size_t common_dim(std::span<const data::LabeledSequence> units) {
  if (units.empty()) throw InvalidInputError("training set is empty");
  const std::size_t dim = units.front().features.dim();
  for (const auto& u : units) {
    if (u.features.dim() != dim) {
      throw DimensionError("unit '" + u.sample_id + "' has dim " +
                           std::to_string(u.features.dim()) + ", expected " +
                           std::to_string(dim));
    }
  }
  return dim;
}

}  // namespace

template <typename T>
nn::Tensor<T> TrainSet<T>::gather(std::span<const std::size_t> indices) const {
  nn::Shape shape = inputs.shape();
  shape[0] = indices.size();
  nn::Tensor<T> out(shape);
  const std::size_t unit = unit_size();
  for (std::size_t i = 0; i < indices.size(); ++i) {
    std::copy_n(inputs.data() + indices[i] * unit, unit, out.data() + i * unit);
  }
  return out;
}

template <typename T>
std::vector<int> TrainSet<T>::gather_labels(std::span<const std::size_t> indices) const {
  std::vector<int> out;
  out.reserve(indices.size());
  for (auto i : indices) out.push_back(labels[i]);
  return out;
}

template <typename T>
TrainSet<T> make_frame_set(std::span<const data::LabeledSequence> units) {
  const std::size_t dim = common_dim(units);
  std::size_t total = 0;
  for (const auto& u : units) total += u.features.frames();
  TrainSet<T> set{nn::Tensor<T>({total, dim}), {}};
  set.labels.reserve(total);
  std::size_t row = 0;
  for (const auto& u : units) {
    const std::size_t n = u.features.frames();
    u.features.copy_rows(0, n, set.inputs.data() + row * dim);
    set.labels.insert(set.labels.end(), n, to_index(u.label));
    row += n;
  }
  return set;
}

template <typename T>
TrainSet<T> make_sequence_set(std::span<const data::LabeledSequence> units, std::size_t frames) {
  const std::size_t dim = common_dim(units);
  TrainSet<T> set{nn::Tensor<T>({units.size(), frames, dim}), {}};
  for (std::size_t i = 0; i < units.size(); ++i) {
    const auto& u = units[i];
    if (u.features.frames() != frames) {
      throw ShortVideoError("unit '" + u.sample_id + "' has " +
                            std::to_string(u.features.frames()) + " frames, expected " +
                            std::to_string(frames));
    }
    u.features.copy_rows(0, frames, set.inputs.data() + i * frames * dim);
    set.labels.push_back(to_index(u.label));
  }
  return set;
}

template struct TrainSet<float>;
template struct TrainSet<double>;
template TrainSet<float> make_frame_set(std::span<const data::LabeledSequence>);
template TrainSet<double> make_frame_set(std::span<const data::LabeledSequence>);
template TrainSet<float> make_sequence_set(std::span<const data::LabeledSequence>, std::size_t);
template TrainSet<double> make_sequence_set(std::span<const data::LabeledSequence>,
                                            std::size_t);

}  // namespace painseq::models
