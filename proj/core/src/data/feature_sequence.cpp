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

#include "painseq/data/feature_sequence.hpp"

#include <cmath>

#include "painseq/errors.hpp"

namespace painseq::data {
namespace {

void check_geometry(std::size_t frames, std::size_t dim, double fps) {
  if (frames == 0) throw InvalidInputError("feature sequence needs at least one frame");
  if (dim == 0) throw InvalidInputError("feature sequence dimension must be positive");
  if (!(fps > 0.0) || !std::isfinite(fps)) {
    throw InvalidInputError("feature sequence frame rate must be positive");
  }
}

}  // namespace

FeatureSequence::FeatureSequence(std::size_t frames, std::size_t dim, double fps,
                                 io::DType dtype)
    : frames_(frames), dim_(dim), fps_(fps) {
  check_geometry(frames, dim, fps);
  if (dtype == io::DType::kF32) {
    values_ = std::vector<float>(frames * dim, 0.0f);
  } else {
    values_ = std::vector<double>(frames * dim, 0.0);
  }
}

template <typename T>
FeatureSequence FeatureSequence::from_values(std::size_t frames, std::size_t dim, double fps,
                                             std::vector<T> values) {
  check_geometry(frames, dim, fps);
  if (values.size() != frames * dim) {
    throw DimensionError("feature sequence of " + std::to_string(frames) + "x" +
                         std::to_string(dim) + " got " + std::to_string(values.size()) +
                         " values");
  }
  FeatureSequence s;
  s.frames_ = frames;
  s.dim_ = dim;
  s.fps_ = fps;
  s.values_ = std::move(values);
  return s;
}

double FeatureSequence::at(std::size_t frame, std::size_t d) const {
  return std::visit([&](const auto& v) { return static_cast<double>(v[frame * dim_ + d]); },
                    values_);
}

void FeatureSequence::set(std::size_t frame, std::size_t d, double value) {
  std::visit(
      [&](auto& v) {
        using V = typename std::decay_t<decltype(v)>::value_type;
        v[frame * dim_ + d] = static_cast<V>(value);
      },
      values_);
}

template <typename T>
void FeatureSequence::copy_rows(std::size_t first, std::size_t count, T* out) const {
  if (first + count > frames_) {
    throw DimensionError("rows [" + std::to_string(first) + ", " +
                         std::to_string(first + count) + ") exceed " + std::to_string(frames_) +
                         " frames");
  }
  std::visit(
      [&](const auto& v) {
        const auto* src = v.data() + first * dim_;
        for (std::size_t i = 0; i < count * dim_; ++i) out[i] = static_cast<T>(src[i]);
      },
      values_);
}

FeatureSequence FeatureSequence::slice(std::size_t first, std::size_t count) const {
  if (count == 0 || first + count > frames_) {
    throw DimensionError("slice [" + std::to_string(first) + ", " +
                         std::to_string(first + count) + ") of " + std::to_string(frames_) +
                         " frames");
  }
  FeatureSequence s = std::visit(
      [&](const auto& v) {
        using V = typename std::decay_t<decltype(v)>::value_type;
        std::vector<V> part(v.begin() + static_cast<std::ptrdiff_t>(first * dim_),
                            v.begin() + static_cast<std::ptrdiff_t>((first + count) * dim_));
        return from_values<V>(count, dim_, fps_, std::move(part));
      },
      values_);
  s.source_id = source_id;
  s.participant_id = participant_id;
  return s;
}

bool FeatureSequence::all_finite() const {
  return std::visit(
      [](const auto& v) {
        for (auto x : v) {
          if (!std::isfinite(x)) return false;
        }
        return true;
      },
      values_);
}

std::span<const float> FeatureSequence::f32() const {
  if (auto* v = std::get_if<std::vector<float>>(&values_)) return *v;
  return {};
}
std::span<const double> FeatureSequence::f64() const {
  if (auto* v = std::get_if<std::vector<double>>(&values_)) return *v;
  return {};
}
std::span<float> FeatureSequence::f32_mut() {
  if (auto* v = std::get_if<std::vector<float>>(&values_)) return *v;
  return {};
}
std::span<double> FeatureSequence::f64_mut() {
  if (auto* v = std::get_if<std::vector<double>>(&values_)) return *v;
  return {};
}

template FeatureSequence FeatureSequence::from_values(std::size_t, std::size_t, double,
                                                      std::vector<float>);
template FeatureSequence FeatureSequence::from_values(std::size_t, std::size_t, double,
                                                      std::vector<double>);
template void FeatureSequence::copy_rows(std::size_t, std::size_t, float*) const;
template void FeatureSequence::copy_rows(std::size_t, std::size_t, double*) const;

}  // namespace painseq::data
