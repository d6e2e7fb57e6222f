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

#include "painseq/nn/dense.hpp"

#include <algorithm>
#include <cmath>

namespace painseq::nn {

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::kIdentity: return "identity";
    case Activation::kRelu: return "relu";
    case Activation::kSoftmax: return "softmax";
  }
  return "unknown";
}

template <typename T>
DenseLayer<T> DenseLayer<T>::zeros(std::size_t in, std::size_t out, Activation act) {
  return DenseLayer{Tensor<T>({in, out}), Tensor<T>({out}), act};
}

template <typename T>
DenseLayer<T> DenseLayer<T>::xavier(std::size_t in, std::size_t out, Activation act,
                                    Rng& rng) {
  auto layer = zeros(in, out, act);
  xavier_uniform(layer.weight, in, out, rng);
  return layer;
}

namespace {

template <typename T>
void check_input(const DenseLayer<T>& layer, const Tensor<T>& x) {
  if (x.rank() != 2 || x.dim(1) != layer.in_dim()) {
    throw DimensionError("dense input " + shape_string(x.shape()) +
                         " does not match weight " + shape_string(layer.weight.shape()));
  }
}

}  // namespace

template <typename T>
Tensor<T> dense_logits(const DenseLayer<T>& layer, const Tensor<T>& x) {
  check_input(layer, x);
  Tensor<T> z({x.dim(0), layer.out_dim()});
  auto zm = z.matrix();
  zm.noalias() = x.matrix() * layer.weight.matrix();
  zm.rowwise() += ConstRowVectorMap<T>(layer.bias.data(), layer.out_dim());
  return z;
}

template <typename T>
Tensor<T> softmax_rows(const Tensor<T>& logits) {
  Tensor<T> out(logits.shape());
  const std::size_t cols = logits.shape().back();
  const std::size_t rows = logits.size() / cols;
  for (std::size_t r = 0; r < rows; ++r) {
    const T* in = logits.data() + r * cols;
    T* o = out.data() + r * cols;
    const T mx = *std::max_element(in, in + cols);
    T sum = 0;
    for (std::size_t c = 0; c < cols; ++c) {
      o[c] = std::exp(in[c] - mx);
      sum += o[c];
    }
    for (std::size_t c = 0; c < cols; ++c) o[c] /= sum;
  }
  return out;
}

namespace {

template <typename T>
Tensor<T> apply_activation(Activation act, const Tensor<T>& z) {
  switch (act) {
    case Activation::kIdentity: return z;
    case Activation::kRelu: {
      Tensor<T> y = z;
      for (auto& v : y.values()) v = v > T(0) ? v : T(0);
      return y;
    }
    case Activation::kSoftmax: return softmax_rows(z);
  }
  return z;
}

}  // namespace

template <typename T>
Tensor<T> dense_forward(const DenseLayer<T>& layer, const Tensor<T>& x, DenseCache<T>* cache) {
  Tensor<T> z = dense_logits(layer, x);
  Tensor<T> y = apply_activation(layer.activation, z);
  if (cache != nullptr) {
    cache->input = x;
    cache->preact = std::move(z);
    cache->output = y;
  }
  return y;
}

template <typename T>
DenseBackward<T> dense_backward_preact(const DenseLayer<T>& layer, const Tensor<T>& input,
                                       const Tensor<T>& grad_preact, bool need_grad_input) {
  check_input(layer, input);
  if (grad_preact.rank() != 2 || grad_preact.dim(0) != input.dim(0) ||
      grad_preact.dim(1) != layer.out_dim()) {
    throw DimensionError("dense upstream " + shape_string(grad_preact.shape()) +
                         " does not match output (" + std::to_string(input.dim(0)) +
                         " x " + std::to_string(layer.out_dim()) + ")");
  }
  DenseBackward<T> out;
  out.grads.weight = Tensor<T>(layer.weight.shape());
  out.grads.weight.matrix().noalias() = input.matrix().transpose() * grad_preact.matrix();
  out.grads.bias = Tensor<T>(layer.bias.shape());
  column_sums(grad_preact.data(), input.dim(0), layer.out_dim(), out.grads.bias.data());
  if (need_grad_input) {
    out.grad_input = Tensor<T>(input.shape());
    out.grad_input.matrix().noalias() =
        grad_preact.matrix() * layer.weight.matrix().transpose();
  }
  return out;
}

template <typename T>
DenseBackward<T> dense_backward(const DenseLayer<T>& layer, const DenseCache<T>& cache,
                                const Tensor<T>& upstream, bool need_grad_input) {
  if (upstream.shape() != cache.output.shape()) {
    throw DimensionError("dense upstream " + shape_string(upstream.shape()) +
                         " does not match output " + shape_string(cache.output.shape()));
  }
  Tensor<T> grad_z(upstream.shape());
  switch (layer.activation) {
    case Activation::kIdentity:
      grad_z = upstream;
      break;
    case Activation::kRelu:
      for (std::size_t i = 0; i < upstream.size(); ++i) {
        grad_z[i] = cache.preact[i] > T(0) ? upstream[i] : T(0);
      }
      break;
    case Activation::kSoftmax: {
      // dz_j = y_j (g_j - sum_k g_k y_k)
      const std::size_t cols = upstream.dim(1);
      for (std::size_t r = 0; r < upstream.dim(0); ++r) {
        T dot = 0;
        for (std::size_t c = 0; c < cols; ++c) dot += upstream.at(r, c) * cache.output.at(r, c);
        for (std::size_t c = 0; c < cols; ++c) {
          grad_z.at(r, c) = cache.output.at(r, c) * (upstream.at(r, c) - dot);
        }
      }
      break;
    }
  }
  return dense_backward_preact(layer, cache.input, grad_z, need_grad_input);
}

template <typename T>
DenseBackward<T> dense_backward(const DenseLayer<T>& layer, const Tensor<T>& x,
                                const Tensor<T>& upstream) {
  DenseCache<T> cache;
  dense_forward(layer, x, &cache);
  return dense_backward(layer, cache, upstream, true);
}

#define PAINSEQ_INSTANTIATE_DENSE(T)                                                     \
  template struct DenseLayer<T>;                                                         \
  template Tensor<T> dense_forward(const DenseLayer<T>&, const Tensor<T>&,              \
                                   DenseCache<T>*);                                      \
  template Tensor<T> dense_logits(const DenseLayer<T>&, const Tensor<T>&);              \
  template DenseBackward<T> dense_backward(const DenseLayer<T>&, const DenseCache<T>&,  \
                                           const Tensor<T>&, bool);                      \
  template DenseBackward<T> dense_backward(const DenseLayer<T>&, const Tensor<T>&,      \
                                           const Tensor<T>&);                            \
  template DenseBackward<T> dense_backward_preact(const DenseLayer<T>&, const Tensor<T>&, \
                                                  const Tensor<T>&, bool);               \
  template Tensor<T> softmax_rows(const Tensor<T>&);

PAINSEQ_INSTANTIATE_DENSE(float)
PAINSEQ_INSTANTIATE_DENSE(double)

}  // namespace painseq::nn
