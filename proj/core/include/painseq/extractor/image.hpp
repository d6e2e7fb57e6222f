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

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <vector>

namespace painseq::extractor {

// Decoded 8-bit RGB frame, interleaved row-major (y, x, channel).
struct RgbImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;

  RgbImage() = default;
  RgbImage(std::size_t w, std::size_t h, std::uint8_t fill = 0)
      : width(w), height(h), pixels(w * h * 3, fill) {}

  std::uint8_t& at(std::size_t y, std::size_t x, std::size_t c) {
    return pixels[(y * width + x) * 3 + c];
  }
  std::uint8_t at(std::size_t y, std::size_t x, std::size_t c) const {
    return pixels[(y * width + x) * 3 + c];
  }
};

// Binary PPM (P6, maxval 255).
RgbImage read_ppm(const std::filesystem::path& path);
void write_ppm(const RgbImage& image, const std::filesystem::path& path);

// Face box in pixel coordinates of the source frame.
struct BBox {
  long long x = 0;
  long long y = 0;
  long long w = 0;
  long long h = 0;

  friend bool operator==(const BBox&, const BBox&) = default;
};

// Sidecar file: one "frame_index, x, y, w, h" line per frame. '#' comments
// and blank lines are skipped.
std::map<std::size_t, BBox> read_bbox_file(const std::filesystem::path& path);

// Float image in (height, width, channel) order.
struct ImageTensor {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t channels = 3;
  std::vector<float> data;

  float& at(std::size_t y, std::size_t x, std::size_t c) {
    return data[(y * width + x) * channels + c];
  }
  float at(std::size_t y, std::size_t x, std::size_t c) const {
    return data[(y * width + x) * channels + c];
  }
};

inline constexpr std::size_t kInputSize = 224;

struct PreprocessOptions {
  std::size_t target = kInputSize;
  // Subtract `mean` per channel after scaling to [0, 1].
  bool normalize = true;
  std::array<float, 3> mean{0.5f, 0.5f, 0.5f};
};

struct PreprocessResult {
  ImageTensor image;
  bool clamped = false;  // bbox extended past the frame and was clipped
};

// Crops to `box` (clipped to the frame, with a warning), bilinear-resizes to
// target x target using half-pixel centers, scales to [0, 1] and optionally
// normalizes. Throws InvalidBBoxError for empty or non-overlapping boxes.
PreprocessResult preprocess_frame(const RgbImage& frame, const BBox& box,
                                  const PreprocessOptions& options = {});

}  // namespace painseq::extractor
