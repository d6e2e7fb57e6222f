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

#include "painseq/extractor/vgg.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include <Eigen/Core>

#include "painseq/errors.hpp"
#include "painseq/extractor/ops.hpp"
#include "painseq/nn/init.hpp"

namespace painseq::extractor {
namespace {

std::string entry(std::string_view layer, std::string_view part) {
  return std::string(layer) + "." + std::string(part);
}

std::string shape_text(const std::vector<std::uint32_t>& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i != 0) out += " x ";
    out += std::to_string(s[i]);
  }
  return out + ")";
}

std::vector<float> take(const io::Checkpoint& c, std::string_view layer, std::string_view part,
                        const std::vector<std::uint32_t>& expected) {
  const auto* e = c.find(entry(layer, part));
  if (e == nullptr) {
    throw TopologyError("extractor checkpoint is missing layer \"" + std::string(layer) +
                        "\" (" + entry(layer, part) + ")");
  }
  if (e->shape != expected) {
    throw TopologyError("extractor layer \"" + std::string(layer) + "\" " + std::string(part) +
                        " has shape " + shape_text(e->shape) + ", expected " +
                        shape_text(expected));
  }
  return e->values<float>();
}

void check_finite(const std::vector<float>& v, std::string_view layer) {
  for (float x : v) {
    if (!std::isfinite(x)) {
      throw NonFiniteError("non-finite activation after layer \"" + std::string(layer) + "\"");
    }
  }
}

std::uint64_t fnv1a(std::span<const float> values) {
  std::uint64_t h = 1469598103934665603ULL;
  const auto bytes = std::as_bytes(values);
  for (auto b : bytes) {
    h ^= static_cast<std::uint64_t>(b);
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

ExtractorWeights ExtractorWeights::zeros() {
  ExtractorWeights w;
  for (std::size_t i = 0; i < kVgg16Convs.size(); ++i) {
    const auto& s = kVgg16Convs[i];
    w.convs[i].weight.assign(s.out_channels * s.in_channels * 9, 0.0f);
    w.convs[i].bias.assign(s.out_channels, 0.0f);
  }
  w.fc_weight.assign(kGapChannels * kFeatureDim, 0.0f);
  w.fc_bias.assign(kFeatureDim, 0.0f);
  return w;
}

ExtractorWeights ExtractorWeights::random(std::uint64_t seed) {
  ExtractorWeights w = zeros();
  nn::Rng rng(seed);
  for (std::size_t i = 0; i < kVgg16Convs.size(); ++i) {
    const auto& s = kVgg16Convs[i];
    nn::Tensor<float> t({w.convs[i].weight.size()});
    nn::normal_fill(t, std::sqrt(2.0 / static_cast<double>(s.in_channels * 9)), rng);
    w.convs[i].weight = t.vector();
  }
  nn::Tensor<float> fc({kGapChannels, kFeatureDim});
  nn::xavier_uniform(fc, kGapChannels, kFeatureDim, rng);
  w.fc_weight = fc.vector();
  return w;
}

io::Checkpoint ExtractorWeights::to_checkpoint() const {
  io::Checkpoint c;
  for (std::size_t i = 0; i < kVgg16Convs.size(); ++i) {
    const auto& s = kVgg16Convs[i];
    c.add(entry(s.name, "weight"),
          nn::Tensor<float>({s.out_channels, s.in_channels, 3, 3}, convs[i].weight));
    c.add(entry(s.name, "bias"), nn::Tensor<float>({s.out_channels}, convs[i].bias));
  }
  c.add(entry(kFcName, "weight"), nn::Tensor<float>({kGapChannels, kFeatureDim}, fc_weight));
  c.add(entry(kFcName, "bias"), nn::Tensor<float>({kFeatureDim}, fc_bias));
  return c;
}

ExtractorWeights ExtractorWeights::from_checkpoint(const io::Checkpoint& checkpoint) {
  ExtractorWeights w;
  for (std::size_t i = 0; i < kVgg16Convs.size(); ++i) {
    const auto& s = kVgg16Convs[i];
    const auto out = static_cast<std::uint32_t>(s.out_channels);
    const auto in = static_cast<std::uint32_t>(s.in_channels);
    w.convs[i].weight = take(checkpoint, s.name, "weight", {out, in, 3, 3});
    w.convs[i].bias = take(checkpoint, s.name, "bias", {out});
  }
  w.fc_weight = take(checkpoint, kFcName, "weight",
                     {static_cast<std::uint32_t>(kGapChannels),
                      static_cast<std::uint32_t>(kFeatureDim)});
  w.fc_bias = take(checkpoint, kFcName, "bias", {static_cast<std::uint32_t>(kFeatureDim)});
  return w;
}

ExtractorWeights load_extractor_weights(const std::filesystem::path& path) {
  return ExtractorWeights::from_checkpoint(io::read_checkpoint(path));
}

void save_extractor_weights(const ExtractorWeights& weights, const std::filesystem::path& path) {
  io::write_checkpoint(weights.to_checkpoint(), path);
}

std::vector<float> extract_features(const ExtractorWeights& weights, const ImageTensor& image) {
  if (image.height != kInputSize || image.width != kInputSize || image.channels != 3 ||
      image.data.size() != kInputSize * kInputSize * 3) {
    throw DimensionError("extractor input must be 224 x 224 x 3, got " +
                         std::to_string(image.height) + " x " + std::to_string(image.width) +
                         " x " + std::to_string(image.channels));
  }
  FeatureMap<float> x(3, image.height, image.width);
  for (std::size_t y = 0; y < image.height; ++y) {
    for (std::size_t col = 0; col < image.width; ++col) {
      for (std::size_t c = 0; c < 3; ++c) x.at(c, y, col) = image.at(y, col, c);
    }
  }
  for (std::size_t i = 0; i < kVgg16Convs.size(); ++i) {
    const auto& s = kVgg16Convs[i];
    x = conv3x3_same<float>(x, weights.convs[i].weight, weights.convs[i].bias, s.out_channels,
                            true);
    check_finite(x.data, s.name);
    if (s.pool_after) x = max_pool2x2(x);
  }
  const std::vector<float> pooled = global_average_pool(x);

  std::vector<float> features(kFeatureDim);
  Eigen::Map<const Eigen::Matrix<float, 1, Eigen::Dynamic>> pv(pooled.data(), kGapChannels);
  Eigen::Map<const Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> wm(
      weights.fc_weight.data(), kGapChannels, kFeatureDim);
  Eigen::Map<const Eigen::Matrix<float, 1, Eigen::Dynamic>> bv(weights.fc_bias.data(),
                                                               kFeatureDim);
  Eigen::Map<Eigen::Matrix<float, 1, Eigen::Dynamic>> fv(features.data(), kFeatureDim);
  fv.noalias() = pv * wm;
  fv += bv;
  for (auto& v : features) v = v > 0.0f ? v : 0.0f;
  check_finite(features, kFcName);
  return features;
}

const std::vector<float>* FeatureCache::find(const ImageTensor& image) const {
  auto it = buckets_.find(fnv1a(image.data));
  if (it == buckets_.end()) return nullptr;
  for (const auto& e : it->second) {
    if (e.pixels.size() == image.data.size() &&
        std::memcmp(e.pixels.data(), image.data.data(), image.data.size() * sizeof(float)) == 0) {
      ++hits_;
      return &e.features;
    }
  }
  return nullptr;
}

void FeatureCache::insert(const ImageTensor& image, std::vector<float> features) {
  buckets_[fnv1a(image.data)].push_back({image.data, std::move(features)});
  ++size_;
}

data::FeatureSequence extract_video(const ExtractorWeights& weights,
                                    std::span<const ImageTensor> frames, double fps,
                                    FeatureCache* cache) {
  if (frames.empty()) throw InvalidInputError("extract_video needs at least one frame");
  std::vector<float> values;
  values.reserve(frames.size() * kFeatureDim);
  for (const auto& frame : frames) {
    const std::vector<float>* hit = cache != nullptr ? cache->find(frame) : nullptr;
    if (hit != nullptr) {
      values.insert(values.end(), hit->begin(), hit->end());
      continue;
    }
    auto f = extract_features(weights, frame);
    values.insert(values.end(), f.begin(), f.end());
    if (cache != nullptr) cache->insert(frame, std::move(f));
  }
  return data::FeatureSequence::from_values(frames.size(), kFeatureDim, fps, std::move(values));
}

}  // namespace painseq::extractor
