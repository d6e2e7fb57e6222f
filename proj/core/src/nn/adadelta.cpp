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

#include "painseq/nn/adadelta.hpp"

#include <cmath>

namespace painseq::nn {

template <typename T>
void adadelta_update(std::span<T> param, std::span<const T> grad, AdadeltaSlot<T>& slot,
                     const AdadeltaConfig& config) {
  if (param.size() != grad.size() || slot.sq_grad.size() != param.size() ||
      slot.sq_update.size() != param.size()) {
    throw DimensionError("adadelta block \"" + slot.name + "\" has mismatched sizes (param " +
                         std::to_string(param.size()) + ", grad " +
                         std::to_string(grad.size()) + ", state " +
                         std::to_string(slot.sq_grad.size()) + ")");
  }
  const T rho = static_cast<T>(config.rho);
  const T one_minus_rho = static_cast<T>(1.0 - config.rho);
  const T eps = static_cast<T>(config.epsilon);
  const T lr = static_cast<T>(config.lr);
  T* eg2 = slot.sq_grad.data();
  T* edx2 = slot.sq_update.data();
  for (std::size_t i = 0; i < param.size(); ++i) {
    const T g = grad[i];
    eg2[i] = rho * eg2[i] + one_minus_rho * g * g;
    const T dx = -lr * (std::sqrt(edx2[i] + eps) / std::sqrt(eg2[i] + eps)) * g;
    edx2[i] = rho * edx2[i] + one_minus_rho * dx * dx;
    param[i] += dx;
  }
}

template <typename T>
void Adadelta<T>::step(std::span<const ParamRef<T>> params) {
  if (slots_.empty()) {
    slots_.reserve(params.size());
    for (const auto& p : params) {
      slots_.push_back({p.name, Tensor<T>(p.value->shape()), Tensor<T>(p.value->shape())});
    }
  }
  if (slots_.size() != params.size()) {
    throw DimensionError("adadelta state has " + std::to_string(slots_.size()) +
                         " blocks but step received " + std::to_string(params.size()));
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (slots_[k].name != params[k].name) {
      throw DimensionError("adadelta block " + std::to_string(k) + " is \"" + slots_[k].name +
                           "\" but step received \"" + params[k].name + "\"");
    }
    if (!params[k].grad->all_finite()) {
      throw NonFiniteError("non-finite gradient in layer \"" + params[k].name + "\"");
    }
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    adadelta_update<T>(params[k].value->values(), params[k].grad->values(), slots_[k], config_);
  }
}

template void adadelta_update(std::span<float>, std::span<const float>, AdadeltaSlot<float>&,
                              const AdadeltaConfig&);
template void adadelta_update(std::span<double>, std::span<const double>,
                              AdadeltaSlot<double>&, const AdadeltaConfig&);
template class Adadelta<float>;
template class Adadelta<double>;

}  // namespace painseq::nn
