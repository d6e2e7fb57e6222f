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

#include "painseq/nn/batchnorm.hpp"

#include <cmath>

namespace painseq::nn {

template <typename T>
BatchNormLayer<T> BatchNormLayer<T>::identity(std::size_t features, double momentum,
                                              double epsilon) {
  BatchNormLayer layer;
  layer.gamma = Tensor<T>({features}, T(1));
  layer.beta = Tensor<T>({features});
  layer.running_mean = Tensor<T>({features});
  layer.running_var = Tensor<T>({features}, T(1));
  layer.momentum = momentum;
  layer.epsilon = epsilon;
  return layer;
}

namespace {

template <typename T>
void check_features(const BatchNormLayer<T>& layer, const Tensor<T>& x) {
  if (x.rank() < 2 || x.shape().back() != layer.features()) {
    throw DimensionError("batch-norm input " + shape_string(x.shape()) + " does not have " +
                         std::to_string(layer.features()) + " trailing features");
  }
}

}  // namespace

template <typename T>
Tensor<T> batchnorm_infer(const BatchNormLayer<T>& layer, const Tensor<T>& x) {
  check_features(layer, x);
  const std::size_t f = layer.features();
  const std::size_t n = x.size() / f;
  Tensor<T> y(x.shape());
  std::vector<T> scale(f), shift(f);
  for (std::size_t j = 0; j < f; ++j) {
    const T inv = T(1) / std::sqrt(layer.running_var[j] + T(layer.epsilon));
    scale[j] = layer.gamma[j] * inv;
    shift[j] = layer.beta[j] - layer.running_mean[j] * scale[j];
  }
  for (std::size_t i = 0; i < n; ++i) {
    const T* in = x.data() + i * f;
    T* out = y.data() + i * f;
    for (std::size_t j = 0; j < f; ++j) out[j] = in[j] * scale[j] + shift[j];
  }
  return y;
}

template <typename T>
Tensor<T> batchnorm_forward(BatchNormLayer<T>& layer, const Tensor<T>& x, Mode mode,
                            BatchNormCache<T>* cache) {
  if (mode == Mode::kInfer) return batchnorm_infer(layer, x);
  check_features(layer, x);
  const std::size_t f = layer.features();
  const std::size_t n = x.size() / f;
  if (n < 2) {
    throw DegenerateBatchError("train-mode batch normalization needs more than one sample "
                               "per feature, got " + std::to_string(n));
  }

  // Accumulate in double so float training keeps stable statistics.
  std::vector<double> mean(f, 0.0), var(f, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const T* in = x.data() + i * f;
    for (std::size_t j = 0; j < f; ++j) mean[j] += in[j];
  }
  for (auto& m : mean) m /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const T* in = x.data() + i * f;
    for (std::size_t j = 0; j < f; ++j) {
      const double d = in[j] - mean[j];
      var[j] += d * d;
    }
  }
  for (auto& v : var) v /= static_cast<double>(n);

  Tensor<T> inv_std({f});
  for (std::size_t j = 0; j < f; ++j) {
    inv_std[j] = static_cast<T>(1.0 / std::sqrt(var[j] + layer.epsilon));
    layer.running_mean[j] = static_cast<T>(layer.momentum * layer.running_mean[j] +
                                           (1.0 - layer.momentum) * mean[j]);
    layer.running_var[j] = static_cast<T>(layer.momentum * layer.running_var[j] +
                                          (1.0 - layer.momentum) * var[j]);
  }

  Tensor<T> normalized(x.shape());
  Tensor<T> y(x.shape());
  for (std::size_t i = 0; i < n; ++i) {
    const T* in = x.data() + i * f;
    T* xh = normalized.data() + i * f;
    T* out = y.data() + i * f;
    for (std::size_t j = 0; j < f; ++j) {
      xh[j] = static_cast<T>((in[j] - mean[j]) * inv_std[j]);
      out[j] = layer.gamma[j] * xh[j] + layer.beta[j];
    }
  }
  if (cache != nullptr) {
    cache->normalized = std::move(normalized);
    cache->inv_std = std::move(inv_std);
  }
  return y;
}

template <typename T>
BatchNormBackward<T> batchnorm_backward(const BatchNormLayer<T>& layer,
                                        const BatchNormCache<T>& cache,
                                        const Tensor<T>& upstream, bool need_grad_input) {
  if (upstream.shape() != cache.normalized.shape()) {
    throw DimensionError("batch-norm upstream " + shape_string(upstream.shape()) +
                         " does not match cache " + shape_string(cache.normalized.shape()));
  }
  const std::size_t f = layer.features();
  const std::size_t n = upstream.size() / f;
  BatchNormBackward<T> out;
  out.grad_gamma = Tensor<T>({f});
  out.grad_beta = Tensor<T>({f});
  std::vector<double> sum_dy(f, 0.0), sum_dy_xhat(f, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const T* dy = upstream.data() + i * f;
    const T* xh = cache.normalized.data() + i * f;
    for (std::size_t j = 0; j < f; ++j) {
      sum_dy[j] += dy[j];
      sum_dy_xhat[j] += static_cast<double>(dy[j]) * xh[j];
    }
  }
  for (std::size_t j = 0; j < f; ++j) {
    out.grad_beta[j] = static_cast<T>(sum_dy[j]);
    out.grad_gamma[j] = static_cast<T>(sum_dy_xhat[j]);
  }
  if (need_grad_input) {
    // dx = gamma * inv_std / n * (n dy - sum(dy) - x_hat * sum(dy x_hat))
    out.grad_input = Tensor<T>(upstream.shape());
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      const T* dy = upstream.data() + i * f;
      const T* xh = cache.normalized.data() + i * f;
      T* dx = out.grad_input.data() + i * f;
      for (std::size_t j = 0; j < f; ++j) {
        const double k = static_cast<double>(layer.gamma[j]) * cache.inv_std[j] * inv_n;
        dx[j] = static_cast<T>(
            k * (static_cast<double>(n) * dy[j] - sum_dy[j] - xh[j] * sum_dy_xhat[j]));
      }
    }
  }
  return out;
}

#define PAINSEQ_INSTANTIATE_BN(T)                                                        \
  template struct BatchNormLayer<T>;                                                     \
  template Tensor<T> batchnorm_forward(BatchNormLayer<T>&, const Tensor<T>&, Mode,      \
                                       BatchNormCache<T>*);                              \
  template Tensor<T> batchnorm_infer(const BatchNormLayer<T>&, const Tensor<T>&);       \
  template BatchNormBackward<T> batchnorm_backward(const BatchNormLayer<T>&,            \
                                                   const BatchNormCache<T>&,            \
                                                   const Tensor<T>&, bool);

PAINSEQ_INSTANTIATE_BN(float)
PAINSEQ_INSTANTIATE_BN(double)

}  // namespace painseq::nn
