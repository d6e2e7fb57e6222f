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

#include "painseq/models/params.hpp"

#include "painseq/errors.hpp"

namespace painseq::models {

template <typename T>
nn::Tensor<T> take_tensor(const io::Checkpoint& checkpoint, const std::string& name,
                          const nn::Shape& expected) {
  const auto& e = checkpoint.require(name);
  if (e.tensor_shape() != expected) {
    throw TopologyError("checkpoint entry \"" + name + "\" has shape " +
                        nn::shape_string(e.tensor_shape()) + ", expected " +
                        nn::shape_string(expected));
  }
  return e.tensor<T>();
}

void add_scalar(io::Checkpoint& checkpoint, const std::string& name, double value) {
  checkpoint.add(name, nn::Tensor<double>({1}, value));
}

double take_scalar(const io::Checkpoint& checkpoint, const std::string& name) {
  return take_tensor<double>(checkpoint, name, {1})[0];
}

double take_scalar(const io::Checkpoint& checkpoint, const std::string& name, double fallback) {
  return checkpoint.find(name) == nullptr ? fallback : take_scalar(checkpoint, name);
}

template <typename T>
void add_optimizer_state(io::Checkpoint& checkpoint, const nn::Adadelta<T>& optimizer) {
  for (const auto& slot : optimizer.slots()) {
    checkpoint.add("opt." + slot.name + ".sq_grad", slot.sq_grad);
    checkpoint.add("opt." + slot.name + ".sq_update", slot.sq_update);
  }
}

template <typename T>
bool load_optimizer_state(const io::Checkpoint& checkpoint,
                          std::span<const nn::ParamRef<T>> params, nn::Adadelta<T>& optimizer) {
  if (params.empty() || checkpoint.find("opt." + params.front().name + ".sq_grad") == nullptr) {
    return false;
  }
  auto& slots = optimizer.slots();
  slots.clear();
  for (const auto& p : params) {
    nn::AdadeltaSlot<T> slot;
    slot.name = p.name;
    slot.sq_grad = take_tensor<T>(checkpoint, "opt." + p.name + ".sq_grad", p.value->shape());
    slot.sq_update = take_tensor<T>(checkpoint, "opt." + p.name + ".sq_update", p.value->shape());
    slots.push_back(std::move(slot));
  }
  return true;
}

template nn::Tensor<float> take_tensor(const io::Checkpoint&, const std::string&,
                                       const nn::Shape&);
template nn::Tensor<double> take_tensor(const io::Checkpoint&, const std::string&,
                                        const nn::Shape&);
template void add_optimizer_state(io::Checkpoint&, const nn::Adadelta<float>&);
template void add_optimizer_state(io::Checkpoint&, const nn::Adadelta<double>&);
template bool load_optimizer_state(const io::Checkpoint&, std::span<const nn::ParamRef<float>>,
                                   nn::Adadelta<float>&);
template bool load_optimizer_state(const io::Checkpoint&, std::span<const nn::ParamRef<double>>,
                                   nn::Adadelta<double>&);

}  // namespace painseq::models
