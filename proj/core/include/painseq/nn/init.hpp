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

#include <cstdint>
#include <random>

#include "painseq/nn/tensor.hpp"

namespace painseq::nn {

using Rng = std::mt19937_64;

// Uniform double in [0, 1) built from the top 53 bits of one draw, so the
// sequence depends only on the engine and not on the standard library.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Xavier/Glorot uniform: U(-a, a) with a = sqrt(6 / (fan_in + fan_out)).
template <typename T>
void xavier_uniform(Tensor<T>& t, std::size_t fan_in, std::size_t fan_out, Rng& rng);

// Zero-mean normal with the given standard deviation (He init for convs).
template <typename T>
void normal_fill(Tensor<T>& t, double stddev, Rng& rng);

}  // namespace painseq::nn
