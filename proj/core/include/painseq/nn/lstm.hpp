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

// Gate blocks are stacked along the last axis in the order
// [input, forget, cell candidate, output], each `units` wide.
template <typename T>
struct LstmLayer {
  Tensor<T> w_input;      // in x 4*units
  Tensor<T> w_recurrent;  // units x 4*units
  Tensor<T> bias;         // 4*units

  static LstmLayer zeros(std::size_t in, std::size_t units);
  // Xavier-uniform input and recurrent weights, forget-gate bias 1.
  static LstmLayer xavier(std::size_t in, std::size_t units, Rng& rng);

  std::size_t in_dim() const { return w_input.dim(0); }
  std::size_t units() const { return w_recurrent.dim(0); }
};

template <typename T>
struct LstmGrads {
  Tensor<T> w_input;
  Tensor<T> w_recurrent;
  Tensor<T> bias;
};

template <typename T>
struct LstmCache {
  Tensor<T> input;      // batch x time x in
  Tensor<T> gates;      // batch x time x 4*units, post-nonlinearity
  Tensor<T> cell;       // batch x time x units
  Tensor<T> cell_tanh;  // batch x time x units
  Tensor<T> hidden;     // batch x time x units
};

template <typename T>
struct LstmOutput {
  Tensor<T> outputs;     // batch x time x units
  Tensor<T> final_hidden;  // batch x units
  Tensor<T> final_cell;    // batch x units
};

template <typename T>
struct LstmBackward {
  Tensor<T> grad_input;
  LstmGrads<T> grads;
};

// Runs the recurrence from zero hidden and cell state over x (batch x time x in).
template <typename T>
LstmOutput<T> lstm_forward(const LstmLayer<T>& layer, const Tensor<T>& x,
                           LstmCache<T>* cache = nullptr);

// Back-propagation through time. `upstream` is d(loss)/d(outputs), shaped like
// the forward outputs.
template <typename T>
LstmBackward<T> lstm_backward(const LstmLayer<T>& layer, const LstmCache<T>& cache,
                              const Tensor<T>& upstream, bool need_grad_input = true);

}  // namespace painseq::nn
