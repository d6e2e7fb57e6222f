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

#include "painseq/nn/init.hpp"
#include "painseq/nn/tensor.hpp"

namespace painseq::nn {

// Inverted dropout: survivors are scaled by 1 / (1 - rate) during training so
// inference is the identity.
struct DropoutLayer {
  double rate = 0.0;

  // Throws ConfigError unless 0 <= rate < 1.
  explicit DropoutLayer(double rate = 0.0);
};

// When `mask` is non-null it receives the per-element multiplier (0 or
// 1 / (1 - rate)); in infer mode it is filled with ones.
template <typename T>
Tensor<T> dropout_apply(const DropoutLayer& layer, const Tensor<T>& x, Mode mode, Rng& rng,
                        Tensor<T>* mask = nullptr);

template <typename T>
Tensor<T> dropout_backward(const Tensor<T>& mask, const Tensor<T>& upstream);

}  // namespace painseq::nn
