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

#include "painseq/nn/tensor.hpp"

namespace painseq::nn {

// Normalizes the last axis using statistics over every other axis.
// Running statistics follow running = momentum * running + (1 - momentum) * batch.
template <typename T>
struct BatchNormLayer {
  Tensor<T> gamma;
  Tensor<T> beta;
  Tensor<T> running_mean;
  Tensor<T> running_var;
  double momentum = 0.9;
  double epsilon = 1e-5;

  // gamma = 1, beta = 0, running mean 0, running variance 1.
  static BatchNormLayer identity(std::size_t features, double momentum = 0.9,
                                 double epsilon = 1e-5);

  std::size_t features() const { return gamma.size(); }
};

template <typename T>
struct BatchNormCache {
  Tensor<T> normalized;  // x_hat, same shape as the input
  Tensor<T> inv_std;     // features
};

template <typename T>
struct BatchNormBackward {
  Tensor<T> grad_input;
  Tensor<T> grad_gamma;
  Tensor<T> grad_beta;
};

// Train mode uses batch statistics (biased variance) and updates the running
// statistics in place; infer mode reads the running statistics only.
template <typename T>
Tensor<T> batchnorm_forward(BatchNormLayer<T>& layer, const Tensor<T>& x, Mode mode,
                            BatchNormCache<T>* cache = nullptr);

// Inference-only overload usable on an immutable layer.
template <typename T>
Tensor<T> batchnorm_infer(const BatchNormLayer<T>& layer, const Tensor<T>& x);

// Gradient of the train-mode forward.
template <typename T>
BatchNormBackward<T> batchnorm_backward(const BatchNormLayer<T>& layer,
                                        const BatchNormCache<T>& cache,
                                        const Tensor<T>& upstream,
                                        bool need_grad_input = true);

}  // namespace painseq::nn
