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

#include <span>
#include <string>
#include <vector>

#include "painseq/nn/tensor.hpp"

namespace painseq::nn {

struct AdadeltaConfig {
  double lr = 1.0;
  double rho = 0.95;
  double epsilon = 1e-6;
};

// Decayed averages for one parameter block.
template <typename T>
struct AdadeltaSlot {
  std::string name;
  Tensor<T> sq_grad;    // E[g^2]
  Tensor<T> sq_update;  // E[dx^2]
};

// One in-place Adadelta update of a single block:
//   E[g^2]  <- rho E[g^2] + (1 - rho) g^2
//   dx      <- -lr sqrt(E[dx^2] + eps) / sqrt(E[g^2] + eps) g
//   E[dx^2] <- rho E[dx^2] + (1 - rho) dx^2
//   x       <- x + dx
template <typename T>
void adadelta_update(std::span<T> param, std::span<const T> grad, AdadeltaSlot<T>& slot,
                     const AdadeltaConfig& config);

// Optimizer over a fixed list of parameter blocks. Slots are created lazily on
// the first step and matched to blocks by position and name afterwards.
template <typename T>
class Adadelta {
 public:
  explicit Adadelta(AdadeltaConfig config = {}) : config_(config) {}

  // Validates every gradient first (NonFiniteError naming the block), then
  // updates every block.
  void step(std::span<const ParamRef<T>> params);

  const AdadeltaConfig& config() const { return config_; }
  const std::vector<AdadeltaSlot<T>>& slots() const { return slots_; }
  std::vector<AdadeltaSlot<T>>& slots() { return slots_; }

 private:
  AdadeltaConfig config_;
  std::vector<AdadeltaSlot<T>> slots_;
};

}  // namespace painseq::nn
