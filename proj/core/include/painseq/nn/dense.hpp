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

#include <string_view>

#include "painseq/nn/init.hpp"
#include "painseq/nn/tensor.hpp"

namespace painseq::nn {

enum class Activation { kIdentity, kRelu, kSoftmax };

std::string_view to_string(Activation a);

// Fully connected layer y = activation(x W + b), W stored (in x out).
template <typename T>
struct DenseLayer {
  Tensor<T> weight;
  Tensor<T> bias;
  Activation activation = Activation::kIdentity;

  static DenseLayer zeros(std::size_t in, std::size_t out, Activation act);
  // Xavier-uniform weights, zero bias.
  static DenseLayer xavier(std::size_t in, std::size_t out, Activation act, Rng& rng);

  std::size_t in_dim() const { return weight.dim(0); }
  std::size_t out_dim() const { return weight.dim(1); }
};

template <typename T>
struct DenseGrads {
  Tensor<T> weight;
  Tensor<T> bias;
};

// Everything backward needs from a forward call.
template <typename T>
struct DenseCache {
  Tensor<T> input;
  Tensor<T> preact;
  Tensor<T> output;
};

template <typename T>
struct DenseBackward {
  Tensor<T> grad_input;
  DenseGrads<T> grads;
};

// x is (batch x in). When `cache` is non-null it receives the input,
// pre-activation and output.
template <typename T>
Tensor<T> dense_forward(const DenseLayer<T>& layer, const Tensor<T>& x,
                        DenseCache<T>* cache = nullptr);

// Pre-activation only: x W + b.
template <typename T>
Tensor<T> dense_logits(const DenseLayer<T>& layer, const Tensor<T>& x);

// `upstream` is d(loss)/d(output). Softmax layers back-propagate through the
// full softmax Jacobian.
template <typename T>
DenseBackward<T> dense_backward(const DenseLayer<T>& layer, const DenseCache<T>& cache,
                                const Tensor<T>& upstream, bool need_grad_input = true);

// Convenience overload that re-runs the forward pass to build the cache.
template <typename T>
DenseBackward<T> dense_backward(const DenseLayer<T>& layer, const Tensor<T>& x,
                                const Tensor<T>& upstream);

// Backward from d(loss)/d(pre-activation), skipping the activation. Used with
// the fused softmax + cross-entropy gradient.
template <typename T>
DenseBackward<T> dense_backward_preact(const DenseLayer<T>& layer, const Tensor<T>& input,
                                       const Tensor<T>& grad_preact,
                                       bool need_grad_input = true);

// Row-wise numerically stable softmax of a (rows x cols) tensor.
template <typename T>
Tensor<T> softmax_rows(const Tensor<T>& logits);

}  // namespace painseq::nn
