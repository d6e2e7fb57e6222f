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

// FSEQ feature-sequence files.
//
// Header (27 bytes, little-endian):
//   magic "FSEQ" | version u16 | dtype u8 (0 = f32, 1 = f64) | dim u32
//   | frames u32 | fps f32 | 8 reserved zero bytes
// followed by frames x dim values, row-major.

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "painseq/data/feature_sequence.hpp"

namespace painseq::data {

inline constexpr std::uint16_t kFseqVersion = 1;
inline constexpr std::size_t kFseqHeaderSize = 27;

struct FseqHeader {
  io::DType dtype = io::DType::kF32;
  std::uint32_t dim = 0;
  std::uint32_t frames = 0;
  float fps = 30.0f;
};

std::vector<std::byte> encode_fseq(const FeatureSequence& seq);
FeatureSequence decode_fseq(std::span<const std::byte> bytes, const std::string& context = "fseq");
// Parses and validates the header only.
FseqHeader decode_fseq_header(std::span<const std::byte> bytes,
                              const std::string& context = "fseq");

void write_fseq(const FeatureSequence& seq, const std::filesystem::path& path);
FeatureSequence read_fseq(const std::filesystem::path& path);
FseqHeader read_fseq_header(const std::filesystem::path& path);

}  // namespace painseq::data
