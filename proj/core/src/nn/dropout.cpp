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

#include "painseq/nn/dropout.hpp"

#include <cmath>
#include <string>

namespace painseq::nn {

DropoutLayer::DropoutLayer(double r) : rate(r) {
  if (!(r >= 0.0 && r < 1.0)) {
    throw ConfigError("dropout rate must be in [0, 1), got " + std::to_string(r));
  }
}

template <typename T>
Tensor<T> dropout_apply(const DropoutLayer& layer, const Tensor<T>& x, Mode mode, Rng& rng,
                        Tensor<T>* mask) {
  if (mode == Mode::kInfer || layer.rate == 0.0) {
    if (mask != nullptr) *mask = Tensor<T>(x.shape(), T(1));
    return x;
  }
  const T keep_scale = static_cast<T>(1.0 / (1.0 - layer.rate));
  Tensor<T> m(x.shape());
  Tensor<T> y(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) {
    m[i] = uniform01(rng) >= layer.rate ? keep_scale : T(0);
    y[i] = x[i] * m[i];
  }
  if (mask != nullptr) *mask = std::move(m);
  return y;
}

template <typename T>
Tensor<T> dropout_backward(const Tensor<T>& mask, const Tensor<T>& upstream) {
  if (mask.shape() != upstream.shape()) {
    throw DimensionError("dropout mask " + shape_string(mask.shape()) +
                         " does not match upstream " + shape_string(upstream.shape()));
  }
  Tensor<T> g(upstream.shape());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = upstream[i] * mask[i];
  return g;
}

template Tensor<float> dropout_apply(const DropoutLayer&, const Tensor<float>&, Mode, Rng&,
                                     Tensor<float>*);
template Tensor<double> dropout_apply(const DropoutLayer&, const Tensor<double>&, Mode, Rng&,
                                      Tensor<double>*);
template Tensor<float> dropout_backward(const Tensor<float>&, const Tensor<float>&);
template Tensor<double> dropout_backward(const Tensor<double>&, const Tensor<double>&);

}  // namespace painseq::nn
