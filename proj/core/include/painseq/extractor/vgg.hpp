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

// Frozen VGG16 feature extractor with the last pooling stage replaced by
// global average pooling, truncated after the 512 -> 1024 dense layer.
//
//   stage 1: conv1_1 conv1_2            -> max-pool 2x2
//   stage 2: conv2_1 conv2_2            -> max-pool 2x2
//   stage 3: conv3_1 conv3_2 conv3_3    -> max-pool 2x2
//   stage 4: conv4_1 conv4_2 conv4_3    -> max-pool 2x2
//   stage 5: conv5_1 conv5_2 conv5_3    -> global average pool
//   fc1024: dense 512 -> 1024, relu
//
// Checkpoint entries are "<layer>.weight" / "<layer>.bias"; conv weights are
// (out, in, 3, 3), fc1024.weight is (512, 1024). Entries for layers past
// fc1024 (a classifier head) are ignored.

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "painseq/data/feature_sequence.hpp"
#include "painseq/extractor/image.hpp"
#include "painseq/io/checkpoint.hpp"

namespace painseq::extractor {

struct ConvSpec {
  std::string_view name;
  std::size_t in_channels;
  std::size_t out_channels;
  bool pool_after;  // 2x2 max-pool follows this conv
};

inline constexpr std::array<ConvSpec, 13> kVgg16Convs = {{
    {"conv1_1", 3, 64, false},    {"conv1_2", 64, 64, true},
    {"conv2_1", 64, 128, false},  {"conv2_2", 128, 128, true},
    {"conv3_1", 128, 256, false}, {"conv3_2", 256, 256, false},
    {"conv3_3", 256, 256, true},  {"conv4_1", 256, 512, false},
    {"conv4_2", 512, 512, false}, {"conv4_3", 512, 512, true},
    {"conv5_1", 512, 512, false}, {"conv5_2", 512, 512, false},
    {"conv5_3", 512, 512, false},
}};

inline constexpr std::string_view kFcName = "fc1024";
inline constexpr std::size_t kGapChannels = 512;
inline constexpr std::size_t kFeatureDim = 1024;

struct ConvWeights {
  std::vector<float> weight;  // out x in x 3 x 3
  std::vector<float> bias;
};

struct ExtractorWeights {
  std::array<ConvWeights, kVgg16Convs.size()> convs;
  std::vector<float> fc_weight;  // 512 x 1024
  std::vector<float> fc_bias;    // 1024

  static ExtractorWeights zeros();
  // He-normal convs and Xavier fc from a seeded engine. Not a trained model:
  // useful for exercising the pipeline only.
  static ExtractorWeights random(std::uint64_t seed);

  io::Checkpoint to_checkpoint() const;
  // Validates the topology; TopologyError names the first offending layer.
  static ExtractorWeights from_checkpoint(const io::Checkpoint& checkpoint);
};

ExtractorWeights load_extractor_weights(const std::filesystem::path& path);
void save_extractor_weights(const ExtractorWeights& weights, const std::filesystem::path& path);

// One 1024-vector per image. Input must be 224 x 224 x 3. NonFiniteError
// names the layer whose activations stopped being finite.
std::vector<float> extract_features(const ExtractorWeights& weights, const ImageTensor& image);

// Memoizes features of byte-identical preprocessed frames (static camera
// footage repeats frames).
class FeatureCache {
 public:
  const std::vector<float>* find(const ImageTensor& image) const;
  void insert(const ImageTensor& image, std::vector<float> features);
  std::size_t size() const { return size_; }
  std::size_t hits() const { return hits_; }

 private:
  struct Entry {
    std::vector<float> pixels;
    std::vector<float> features;
  };
  std::unordered_map<std::uint64_t, std::vector<Entry>> buckets_;
  std::size_t size_ = 0;
  mutable std::size_t hits_ = 0;
};

// Stacks per-frame features in time order into a (frames x 1024) f32 sequence.
data::FeatureSequence extract_video(const ExtractorWeights& weights,
                                    std::span<const ImageTensor> frames, double fps = 30.0,
                                    FeatureCache* cache = nullptr);

}  // namespace painseq::extractor
