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
#include <variant>
#include <vector>

#include "painseq/io/binary.hpp"

namespace painseq::data {

// Time-ordered (frames x dim) feature matrix for one video or segment.
// Values keep the precision they were created or read with, so FSEQ round
// trips are bit-exact for both f32 and f64.
class FeatureSequence {
 public:
  FeatureSequence() = default;
  // Zero-filled. Throws InvalidInputError for frames == 0, dim == 0 or fps <= 0.
  FeatureSequence(std::size_t frames, std::size_t dim, double fps,
                  io::DType dtype = io::DType::kF32);

  template <typename T>
  static FeatureSequence from_values(std::size_t frames, std::size_t dim, double fps,
                                     std::vector<T> values);

  std::size_t frames() const { return frames_; }
  std::size_t dim() const { return dim_; }
  double fps() const { return fps_; }
  io::DType dtype() const { return std::holds_alternative<std::vector<float>>(values_)
                                        ? io::DType::kF32
                                        : io::DType::kF64; }

  double at(std::size_t frame, std::size_t d) const;
  void set(std::size_t frame, std::size_t d, double value);

  // Copies `count` rows starting at `first`, converting to T.
  template <typename T>
  void copy_rows(std::size_t first, std::size_t count, T* out) const;

  // Rows [first, first + count) with the same metadata.
  FeatureSequence slice(std::size_t first, std::size_t count) const;

  bool all_finite() const;

  // Exactly one of these is non-empty, matching dtype().
  std::span<const float> f32() const;
  std::span<const double> f64() const;
  std::span<float> f32_mut();
  std::span<double> f64_mut();

  std::string source_id;
  std::string participant_id;

  friend bool operator==(const FeatureSequence& a, const FeatureSequence& b) {
    return a.frames_ == b.frames_ && a.dim_ == b.dim_ && a.fps_ == b.fps_ &&
           a.values_ == b.values_;
  }

 private:
  std::size_t frames_ = 0;
  std::size_t dim_ = 0;
  double fps_ = 30.0;
  std::variant<std::vector<float>, std::vector<double>> values_;
};

}  // namespace painseq::data
