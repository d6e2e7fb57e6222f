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

#include "painseq/nn/lstm.hpp"

#include <cmath>

namespace painseq::nn {

template <typename T>
LstmLayer<T> LstmLayer<T>::zeros(std::size_t in, std::size_t units) {
  return LstmLayer{Tensor<T>({in, 4 * units}), Tensor<T>({units, 4 * units}),
                   Tensor<T>({4 * units})};
}

template <typename T>
LstmLayer<T> LstmLayer<T>::xavier(std::size_t in, std::size_t units, Rng& rng) {
  auto layer = zeros(in, units);
  xavier_uniform(layer.w_input, in, 4 * units, rng);
  xavier_uniform(layer.w_recurrent, units, 4 * units, rng);
  for (std::size_t k = units; k < 2 * units; ++k) layer.bias[k] = T(1);
  return layer;
}

namespace {

template <typename T>
T sigmoid(T v) {
  return T(1) / (T(1) + std::exp(-v));
}

// Rows {b * time + t : b} of a (batch*time x cols) buffer.
template <typename T>
using StridedRows = Eigen::Map<RowMatrix<T>, 0, Eigen::OuterStride<>>;
template <typename T>
using ConstStridedRows = Eigen::Map<const RowMatrix<T>, 0, Eigen::OuterStride<>>;

}  // namespace

template <typename T>
LstmOutput<T> lstm_forward(const LstmLayer<T>& layer, const Tensor<T>& x, LstmCache<T>* cache) {
  if (x.rank() != 3) {
    throw DimensionError("lstm input must be (batch x time x in), got " +
                         shape_string(x.shape()));
  }
  const std::size_t batch = x.dim(0);
  const std::size_t time = x.dim(1);
  const std::size_t units = layer.units();
  const std::size_t g4 = 4 * units;
  if (time == 0) throw InvalidInputError("lstm input has an empty time axis");
  if (x.dim(2) != layer.in_dim()) {
    throw DimensionError("lstm input " + shape_string(x.shape()) +
                         " does not match input weights " +
                         shape_string(layer.w_input.shape()));
  }

  // Input projection for every (batch, time) row at once.
  Tensor<T> gates({batch, time, g4});
  {
    MatrixMap<T> gm(gates.data(), batch * time, g4);
    ConstMatrixMap<T> xm(x.data(), batch * time, layer.in_dim());
    gm.noalias() = xm * layer.w_input.matrix();
    gm.rowwise() += ConstRowVectorMap<T>(layer.bias.data(), g4);
  }

  Tensor<T> cell({batch, time, units});
  Tensor<T> cell_tanh({batch, time, units});
  Tensor<T> hidden({batch, time, units});
  RowMatrix<T> h_prev = RowMatrix<T>::Zero(batch, units);
  const auto w_rec = layer.w_recurrent.matrix();

  for (std::size_t t = 0; t < time; ++t) {
    StridedRows<T> gt(gates.data() + t * g4, batch, g4, Eigen::OuterStride<>(time * g4));
    if (t > 0) gt.noalias() += h_prev * w_rec;
    for (std::size_t b = 0; b < batch; ++b) {
      T* g = gates.data() + (b * time + t) * g4;
      T* c = cell.data() + (b * time + t) * units;
      T* ct = cell_tanh.data() + (b * time + t) * units;
      T* h = hidden.data() + (b * time + t) * units;
      const T* c_prev = t > 0 ? cell.data() + (b * time + t - 1) * units : nullptr;
      for (std::size_t k = 0; k < units; ++k) {
        const T ig = sigmoid(g[k]);
        const T fg = sigmoid(g[units + k]);
        const T cg = std::tanh(g[2 * units + k]);
        const T og = sigmoid(g[3 * units + k]);
        g[k] = ig;
        g[units + k] = fg;
        g[2 * units + k] = cg;
        g[3 * units + k] = og;
        c[k] = (c_prev != nullptr ? fg * c_prev[k] : T(0)) + ig * cg;
        ct[k] = std::tanh(c[k]);
        h[k] = og * ct[k];
        h_prev(b, k) = h[k];
      }
    }
  }

  LstmOutput<T> out;
  out.final_hidden = Tensor<T>({batch, units});
  out.final_cell = Tensor<T>({batch, units});
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t k = 0; k < units; ++k) {
      out.final_hidden.at(b, k) = hidden.at(b, time - 1, k);
      out.final_cell.at(b, k) = cell.at(b, time - 1, k);
    }
  }
  out.outputs = hidden;
  if (cache != nullptr) {
    cache->input = x;
    cache->gates = std::move(gates);
    cache->cell = std::move(cell);
    cache->cell_tanh = std::move(cell_tanh);
    cache->hidden = std::move(hidden);
  }
  return out;
}

template <typename T>
LstmBackward<T> lstm_backward(const LstmLayer<T>& layer, const LstmCache<T>& cache,
                              const Tensor<T>& upstream, bool need_grad_input) {
  if (cache.hidden.rank() != 3 || cache.input.rank() != 3) {
    throw InvalidInputError("lstm backward called without a forward cache");
  }
  const std::size_t batch = cache.hidden.dim(0);
  const std::size_t time = cache.hidden.dim(1);
  const std::size_t units = layer.units();
  const std::size_t g4 = 4 * units;
  const std::size_t in = layer.in_dim();
  if (cache.hidden.dim(2) != units || cache.input.dim(2) != in) {
    throw DimensionError("lstm cache " + shape_string(cache.hidden.shape()) +
                         " does not match layer with " + std::to_string(units) + " units");
  }
  if (upstream.shape() != cache.hidden.shape()) {
    throw DimensionError("lstm upstream " + shape_string(upstream.shape()) +
                         " does not match outputs " + shape_string(cache.hidden.shape()));
  }

  Tensor<T> dgates({batch, time, g4});
  RowMatrix<T> dh_next = RowMatrix<T>::Zero(batch, units);
  RowMatrix<T> dc_next = RowMatrix<T>::Zero(batch, units);
  RowMatrix<T> grad_rec = RowMatrix<T>::Zero(units, g4);
  RowMatrix<T> h_prev(batch, units);
  const auto w_rec = layer.w_recurrent.matrix();

  for (std::size_t step = time; step-- > 0;) {
    for (std::size_t b = 0; b < batch; ++b) {
      const std::size_t row = b * time + step;
      const T* g = cache.gates.data() + row * g4;
      const T* ct = cache.cell_tanh.data() + row * units;
      const T* up = upstream.data() + row * units;
      const T* c_prev = step > 0 ? cache.cell.data() + (row - 1) * units : nullptr;
      T* dg = dgates.data() + row * g4;
      for (std::size_t k = 0; k < units; ++k) {
        const T ig = g[k];
        const T fg = g[units + k];
        const T cg = g[2 * units + k];
        const T og = g[3 * units + k];
        const T dh = up[k] + dh_next(b, k);
        const T dc = dh * og * (T(1) - ct[k] * ct[k]) + dc_next(b, k);
        const T cp = c_prev != nullptr ? c_prev[k] : T(0);
        dg[k] = dc * cg * ig * (T(1) - ig);
        dg[units + k] = dc * cp * fg * (T(1) - fg);
        dg[2 * units + k] = dc * ig * (T(1) - cg * cg);
        dg[3 * units + k] = dh * ct[k] * og * (T(1) - og);
        dc_next(b, k) = dc * fg;
        h_prev(b, k) = step > 0 ? cache.hidden.data()[(row - 1) * units + k] : T(0);
      }
    }
    ConstStridedRows<T> dgt(dgates.data() + step * g4, batch, g4,
                            Eigen::OuterStride<>(time * g4));
    dh_next.noalias() = dgt * w_rec.transpose();
    if (step > 0) grad_rec.noalias() += h_prev.transpose() * dgt;
  }

  LstmBackward<T> out;
  ConstMatrixMap<T> dgm(dgates.data(), batch * time, g4);
  ConstMatrixMap<T> xm(cache.input.data(), batch * time, in);
  out.grads.w_input = Tensor<T>({in, g4});
  out.grads.w_input.matrix().noalias() = xm.transpose() * dgm;
  out.grads.w_recurrent = Tensor<T>({units, g4});
  out.grads.w_recurrent.matrix() = grad_rec;
  out.grads.bias = Tensor<T>({g4});
  column_sums(dgates.data(), batch * time, g4, out.grads.bias.data());
  if (need_grad_input) {
    out.grad_input = Tensor<T>(cache.input.shape());
    MatrixMap<T>(out.grad_input.data(), batch * time, in).noalias() =
        dgm * layer.w_input.matrix().transpose();
  }
  return out;
}

#define PAINSEQ_INSTANTIATE_LSTM(T)                                                   \
  template struct LstmLayer<T>;                                                       \
  template LstmOutput<T> lstm_forward(const LstmLayer<T>&, const Tensor<T>&,         \
                                      LstmCache<T>*);                                 \
  template LstmBackward<T> lstm_backward(const LstmLayer<T>&, const LstmCache<T>&,   \
                                         const Tensor<T>&, bool);

PAINSEQ_INSTANTIATE_LSTM(float)
PAINSEQ_INSTANTIATE_LSTM(double)

}  // namespace painseq::nn
