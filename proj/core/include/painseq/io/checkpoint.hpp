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

// PSQW parameter checkpoints.
//
// Layout (all integers little-endian):
//   magic "PSQW" | version u16 | entry count u32
//   per entry: name length u32 | UTF-8 name | dtype u8 (0 = f32, 1 = f64)
//              | rank u32 | dims u32 x rank | raw little-endian values
//
// Entries keep their raw bytes, so decode(encode(c)) is bit-exact.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "painseq/io/binary.hpp"
#include "painseq/nn/tensor.hpp"

namespace painseq::io {

inline constexpr std::uint16_t kCheckpointVersion = 1;

struct CheckpointEntry {
  std::string name;
  DType dtype = DType::kF32;
  std::vector<std::uint32_t> shape;
  std::vector<std::byte> raw;

  std::size_t count() const;
  nn::Shape tensor_shape() const;

  // Converts the stored values to T (exact for f32 -> f64).
  template <typename T>
  std::vector<T> values() const;
  template <typename T>
  nn::Tensor<T> tensor() const;

  // Stores `values` in the given dtype (defaults to T's own).
  template <typename T>
  static CheckpointEntry from_tensor(std::string name, const nn::Tensor<T>& t,
                                     std::optional<DType> dtype = std::nullopt);
};

struct Checkpoint {
  std::vector<CheckpointEntry> entries;

  const CheckpointEntry* find(std::string_view name) const;
  // Throws TopologyError naming the missing entry.
  const CheckpointEntry& require(std::string_view name) const;

  template <typename T>
  void add(std::string name, const nn::Tensor<T>& t, std::optional<DType> dtype = std::nullopt) {
    entries.push_back(CheckpointEntry::from_tensor(std::move(name), t, dtype));
  }
};

std::vector<std::byte> encode_checkpoint(const Checkpoint& checkpoint);
Checkpoint decode_checkpoint(std::span<const std::byte> bytes,
                             const std::string& context = "checkpoint");

void write_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace painseq::io
