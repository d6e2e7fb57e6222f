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

#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "painseq/errors.hpp"

namespace painseq::io {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

// Element type tag shared by the PSQW and FSEQ formats.
enum class DType : std::uint8_t { kF32 = 0, kF64 = 1 };

inline std::size_t dtype_size(DType d) { return d == DType::kF32 ? 4 : 8; }
std::string_view dtype_name(DType d);
// Throws FormatError for an unknown tag.
DType dtype_from_tag(std::uint8_t tag, std::size_t offset);

template <typename T>
constexpr DType dtype_of() {
  static_assert(std::is_same_v<T, float> || std::is_same_v<T, double>);
  return std::is_same_v<T, float> ? DType::kF32 : DType::kF64;
}

// Appends little-endian scalars and raw bytes.
class ByteWriter {
 public:
  template <typename T>
  void put(T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    const auto* p = reinterpret_cast<const std::byte*>(&value);
    bytes_.insert(bytes_.end(), p, p + sizeof(T));
  }
  void put_bytes(std::span<const std::byte> b) { bytes_.insert(bytes_.end(), b.begin(), b.end()); }
  void put_string(std::string_view s) {
    put_bytes(std::as_bytes(std::span(s.data(), s.size())));
  }

  const std::vector<std::byte>& bytes() const { return bytes_; }
  std::vector<std::byte> release() { return std::move(bytes_); }

 private:
  std::vector<std::byte> bytes_;
};

// Bounds-checked reader; every failure reports the byte offset it reached.
class ByteReader {
 public:
  ByteReader(std::span<const std::byte> bytes, std::string context)
      : bytes_(bytes), context_(std::move(context)) {}

  template <typename T>
  T get(std::string_view what) {
    static_assert(std::is_trivially_copyable_v<T>);
    require(sizeof(T), what);
    T value;
    std::memcpy(&value, bytes_.data() + offset_, sizeof(T));
    offset_ += sizeof(T);
    return value;
  }

  std::span<const std::byte> get_bytes(std::size_t n, std::string_view what) {
    require(n, what);
    auto out = bytes_.subspan(offset_, n);
    offset_ += n;
    return out;
  }

  std::size_t offset() const { return offset_; }
  std::size_t remaining() const { return bytes_.size() - offset_; }
  const std::string& context() const { return context_; }

  [[noreturn]] void fail(const std::string& message) const {
    throw FormatError(context_ + ": " + message + " at byte offset " + std::to_string(offset_),
                      offset_);
  }

 private:
  void require(std::size_t n, std::string_view what) const {
    if (remaining() < n) {
      fail("truncated while reading " + std::string(what) + " (need " + std::to_string(n) +
           " bytes, " + std::to_string(remaining()) + " left)");
    }
  }

  std::span<const std::byte> bytes_;
  std::string context_;
  std::size_t offset_ = 0;
};

std::vector<std::byte> read_file_bytes(const std::filesystem::path& path);
// Writes to a sibling temporary file then renames, so a failed write never
// leaves a partial file at `path`.
void write_file_bytes(const std::filesystem::path& path, std::span<const std::byte> bytes);

}  // namespace painseq::io
