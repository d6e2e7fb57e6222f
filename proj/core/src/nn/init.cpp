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

#include "painseq/nn/init.hpp"

#include <cmath>

namespace painseq::nn {

template <typename T>
void xavier_uniform(Tensor<T>& t, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (auto& v : t.values()) v = static_cast<T>((2.0 * uniform01(rng) - 1.0) * limit);
}

template <typename T>
void normal_fill(Tensor<T>& t, double stddev, Rng& rng) {
  std::normal_distribution<double> dist(0.0, stddev);
  for (auto& v : t.values()) v = static_cast<T>(dist(rng));
}

template void xavier_uniform(Tensor<float>&, std::size_t, std::size_t, Rng&);
template void xavier_uniform(Tensor<double>&, std::size_t, std::size_t, Rng&);
template void normal_fill(Tensor<float>&, double, Rng&);
template void normal_fill(Tensor<double>&, double, Rng&);

}  // namespace painseq::nn
