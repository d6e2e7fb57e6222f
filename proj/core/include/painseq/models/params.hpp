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
#include <string>

#include "painseq/io/checkpoint.hpp"
#include "painseq/nn/adadelta.hpp"
#include "painseq/nn/tensor.hpp"

namespace painseq::models {

// Entry `name` converted to T, TopologyError unless its shape is `expected`.
template <typename T>
nn::Tensor<T> take_tensor(const io::Checkpoint& checkpoint, const std::string& name,
                          const nn::Shape& expected);

// Scalar metadata stored as a one-element f64 entry.
void add_scalar(io::Checkpoint& checkpoint, const std::string& name, double value);
double take_scalar(const io::Checkpoint& checkpoint, const std::string& name);
double take_scalar(const io::Checkpoint& checkpoint, const std::string& name, double fallback);

// Optimizer accumulators as "opt.<block>.sq_grad" / "opt.<block>.sq_update".
template <typename T>
void add_optimizer_state(io::Checkpoint& checkpoint, const nn::Adadelta<T>& optimizer);

// Restores accumulators for `params` when the checkpoint has them; returns
// false (leaving the optimizer fresh) when it has none.
template <typename T>
bool load_optimizer_state(const io::Checkpoint& checkpoint,
                          std::span<const nn::ParamRef<T>> params, nn::Adadelta<T>& optimizer);

}  // namespace painseq::models
