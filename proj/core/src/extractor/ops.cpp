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

#include "painseq/extractor/ops.hpp"

#include <algorithm>
#include <string>

#include <Eigen/Core>

#include "painseq/errors.hpp"

namespace painseq::extractor {
namespace {

template <typename T>
using RowMatrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Bound on the im2col scratch buffer, in elements.
constexpr std::size_t kColumnBudget = std::size_t{1} << 21;

}  // namespace

template <typename T>
FeatureMap<T> conv3x3_same(const FeatureMap<T>& input, std::span<const T> weight,
                           std::span<const T> bias, std::size_t out_channels, bool relu) {
  const std::size_t cin = input.channels;
  const std::size_t h = input.height;
  const std::size_t w = input.width;
  const std::size_t k = cin * 9;
  if (weight.size() != out_channels * k || bias.size() != out_channels) {
    throw DimensionError("conv3x3 expects weight " + std::to_string(out_channels) + "x" +
                         std::to_string(cin) + "x3x3 and bias " +
                         std::to_string(out_channels) + ", got " +
                         std::to_string(weight.size()) + " and " + std::to_string(bias.size()));
  }
  FeatureMap<T> out(out_channels, h, w);
  if (h == 0 || w == 0) return out;

  Eigen::Map<const RowMatrix<T>> wm(weight.data(), out_channels, k);
  Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, 1>> bv(bias.data(), out_channels);
  const std::size_t rows_per_chunk = std::clamp<std::size_t>(kColumnBudget / (k * w), 1, h);
  RowMatrix<T> cols(k, rows_per_chunk * w);

  for (std::size_t row0 = 0; row0 < h; row0 += rows_per_chunk) {
    const std::size_t rows = std::min(rows_per_chunk, h - row0);
    const std::size_t ncols = rows * w;
    for (std::size_t c = 0; c < cin; ++c) {
      for (std::size_t ky = 0; ky < 3; ++ky) {
        for (std::size_t kx = 0; kx < 3; ++kx) {
          T* dst = cols.data() + (c * 9 + ky * 3 + kx) * cols.cols();
          for (std::size_t r = 0; r < rows; ++r) {
            const long long sy = static_cast<long long>(row0 + r) + static_cast<long long>(ky) - 1;
            T* drow = dst + r * w;
            if (sy < 0 || sy >= static_cast<long long>(h)) {
              std::fill(drow, drow + w, T(0));
              continue;
            }
            const T* src = input.data.data() + (c * h + static_cast<std::size_t>(sy)) * w;
            for (std::size_t x = 0; x < w; ++x) {
              const long long sx = static_cast<long long>(x) + static_cast<long long>(kx) - 1;
              drow[x] = (sx < 0 || sx >= static_cast<long long>(w))
                            ? T(0)
                            : src[static_cast<std::size_t>(sx)];
            }
          }
        }
      }
    }
    Eigen::Map<RowMatrix<T>, 0, Eigen::OuterStride<>> block(
        out.data.data() + row0 * w, out_channels, ncols, Eigen::OuterStride<>(h * w));
    block.noalias() = wm * cols.leftCols(ncols);
    block.colwise() += bv;
  }
  if (relu) {
    for (auto& v : out.data) v = v > T(0) ? v : T(0);
  }
  return out;
}

template <typename T>
FeatureMap<T> max_pool2x2(const FeatureMap<T>& input) {
  FeatureMap<T> out(input.channels, input.height / 2, input.width / 2);
  for (std::size_t c = 0; c < out.channels; ++c) {
    for (std::size_t y = 0; y < out.height; ++y) {
      for (std::size_t x = 0; x < out.width; ++x) {
        out.at(c, y, x) = std::max({input.at(c, 2 * y, 2 * x), input.at(c, 2 * y, 2 * x + 1),
                                    input.at(c, 2 * y + 1, 2 * x),
                                    input.at(c, 2 * y + 1, 2 * x + 1)});
      }
    }
  }
  return out;
}

template <typename T>
std::vector<T> global_average_pool(const FeatureMap<T>& input) {
  const std::size_t plane = input.height * input.width;
  if (plane == 0) throw InvalidInputError("global average pool over an empty activation map");
  std::vector<T> out(input.channels);
  for (std::size_t c = 0; c < input.channels; ++c) {
    // Accumulate in double; float maps of 196 elements lose bits otherwise.
    double sum = 0.0;
    const T* p = input.data.data() + c * plane;
    for (std::size_t i = 0; i < plane; ++i) sum += p[i];
    out[c] = static_cast<T>(sum / static_cast<double>(plane));
  }
  return out;
}

template FeatureMap<float> conv3x3_same(const FeatureMap<float>&, std::span<const float>,
                                        std::span<const float>, std::size_t, bool);
template FeatureMap<double> conv3x3_same(const FeatureMap<double>&, std::span<const double>,
                                         std::span<const double>, std::size_t, bool);
template FeatureMap<float> max_pool2x2(const FeatureMap<float>&);
template FeatureMap<double> max_pool2x2(const FeatureMap<double>&);
template std::vector<float> global_average_pool(const FeatureMap<float>&);
template std::vector<double> global_average_pool(const FeatureMap<double>&);

}  // namespace painseq::extractor
