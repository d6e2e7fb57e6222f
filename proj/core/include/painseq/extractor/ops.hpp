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
#include <vector>

namespace painseq::extractor {

// Activation map in (channel, height, width) order.
template <typename T>
struct FeatureMap {
  std::size_t channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<T> data;

  FeatureMap() = default;
  FeatureMap(std::size_t c, std::size_t h, std::size_t w, T fill = T(0))
      : channels(c), height(h), width(w), data(c * h * w, fill) {}

  T& at(std::size_t c, std::size_t y, std::size_t x) { return data[(c * height + y) * width + x]; }
  T at(std::size_t c, std::size_t y, std::size_t x) const {
    return data[(c * height + y) * width + x];
  }
};

// 3x3 cross-correlation, stride 1, zero padding 1. `weight` is laid out
// (out, in, 3, 3) and `bias` has `out_channels` entries.
template <typename T>
FeatureMap<T> conv3x3_same(const FeatureMap<T>& input, std::span<const T> weight,
                           std::span<const T> bias, std::size_t out_channels, bool relu);

// 2x2 window, stride 2; a trailing odd row or column is dropped.
template <typename T>
FeatureMap<T> max_pool2x2(const FeatureMap<T>& input);

// Per-channel mean over all spatial positions.
template <typename T>
std::vector<T> global_average_pool(const FeatureMap<T>& input);

}  // namespace painseq::extractor
