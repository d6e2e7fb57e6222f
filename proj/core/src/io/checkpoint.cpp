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

#include "painseq/io/checkpoint.hpp"

#include <fstream>
#include <iterator>

namespace painseq::io {

std::string_view dtype_name(DType d) { return d == DType::kF32 ? "f32" : "f64"; }

DType dtype_from_tag(std::uint8_t tag, std::size_t offset) {
  if (tag > 1) {
    throw FormatError("unknown dtype tag " + std::to_string(tag) + " at byte offset " +
                          std::to_string(offset),
                      offset);
  }
  return static_cast<DType>(tag);
}

std::vector<std::byte> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInputError("cannot open " + path.string());
  std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<std::byte> out(buf.size());
  std::memcpy(out.data(), buf.data(), buf.size());
  return out;
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::byte> bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInputError("cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw InvalidInputError("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::size_t CheckpointEntry::count() const {
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

nn::Shape CheckpointEntry::tensor_shape() const { return nn::Shape(shape.begin(), shape.end()); }

template <typename T>
std::vector<T> CheckpointEntry::values() const {
  const std::size_t n = count();
  std::vector<T> out(n);
  if (dtype == DType::kF32) {
    for (std::size_t i = 0; i < n; ++i) {
      float v;
      std::memcpy(&v, raw.data() + i * 4, 4);
      out[i] = static_cast<T>(v);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      double v;
      std::memcpy(&v, raw.data() + i * 8, 8);
      out[i] = static_cast<T>(v);
    }
  }
  return out;
}

template <typename T>
nn::Tensor<T> CheckpointEntry::tensor() const {
  return nn::Tensor<T>(tensor_shape(), values<T>());
}

template <typename T>
CheckpointEntry CheckpointEntry::from_tensor(std::string name, const nn::Tensor<T>& t,
                                             std::optional<DType> dtype) {
  CheckpointEntry e;
  e.name = std::move(name);
  e.dtype = dtype.value_or(dtype_of<T>());
  for (auto d : t.shape()) e.shape.push_back(static_cast<std::uint32_t>(d));
  e.raw.resize(t.size() * dtype_size(e.dtype));
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (e.dtype == DType::kF32) {
      const float v = static_cast<float>(t[i]);
      std::memcpy(e.raw.data() + i * 4, &v, 4);
    } else {
      const double v = static_cast<double>(t[i]);
      std::memcpy(e.raw.data() + i * 8, &v, 8);
    }
  }
  return e;
}

template std::vector<float> CheckpointEntry::values<float>() const;
template std::vector<double> CheckpointEntry::values<double>() const;
template nn::Tensor<float> CheckpointEntry::tensor<float>() const;
template nn::Tensor<double> CheckpointEntry::tensor<double>() const;
template CheckpointEntry CheckpointEntry::from_tensor(std::string, const nn::Tensor<float>&,
                                                      std::optional<DType>);
template CheckpointEntry CheckpointEntry::from_tensor(std::string, const nn::Tensor<double>&,
                                                      std::optional<DType>);

const CheckpointEntry* Checkpoint::find(std::string_view name) const {
  for (const auto& e : entries) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

const CheckpointEntry& Checkpoint::require(std::string_view name) const {
  const auto* e = find(name);
  if (e == nullptr) {
    throw TopologyError("checkpoint is missing entry \"" + std::string(name) + "\"");
  }
  return *e;
}

std::vector<std::byte> encode_checkpoint(const Checkpoint& checkpoint) {
  ByteWriter w;
  w.put_string("PSQW");
  w.put<std::uint16_t>(kCheckpointVersion);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(checkpoint.entries.size()));
  for (const auto& e : checkpoint.entries) {
    if (e.raw.size() != e.count() * dtype_size(e.dtype)) {
      throw DimensionError("checkpoint entry \"" + e.name + "\" holds " +
                           std::to_string(e.raw.size()) + " bytes for " +
                           std::to_string(e.count()) + " values");
    }
    w.put<std::uint32_t>(static_cast<std::uint32_t>(e.name.size()));
    w.put_string(e.name);
    w.put<std::uint8_t>(static_cast<std::uint8_t>(e.dtype));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(e.shape.size()));
    for (auto d : e.shape) w.put<std::uint32_t>(d);
    w.put_bytes(e.raw);
  }
  return w.release();
}

Checkpoint decode_checkpoint(std::span<const std::byte> bytes, const std::string& context) {
  ByteReader r(bytes, context);
  auto magic = r.get_bytes(4, "magic");
  if (std::memcmp(magic.data(), "PSQW", 4) != 0) {
    throw FormatError(context + ": bad magic (expected PSQW) at byte offset 0", 0);
  }
  const std::size_t version_at = r.offset();
  const auto version = r.get<std::uint16_t>("version");
  if (version != kCheckpointVersion) {
    throw FormatError(context + ": unsupported version " + std::to_string(version) +
                          " at byte offset " + std::to_string(version_at),
                      version_at);
  }
  const auto count = r.get<std::uint32_t>("entry count");
  Checkpoint c;
  for (std::uint32_t k = 0; k < count; ++k) {
    CheckpointEntry e;
    const auto name_len = r.get<std::uint32_t>("name length");
    auto name = r.get_bytes(name_len, "entry name");
    e.name.assign(reinterpret_cast<const char*>(name.data()), name.size());
    const std::size_t tag_at = r.offset();
    e.dtype = dtype_from_tag(r.get<std::uint8_t>("dtype"), tag_at);
    const auto rank = r.get<std::uint32_t>("rank");
    if (rank > 8) r.fail("entry \"" + e.name + "\" has implausible rank " + std::to_string(rank));
    for (std::uint32_t i = 0; i < rank; ++i) e.shape.push_back(r.get<std::uint32_t>("dimension"));
    const std::size_t nbytes = e.count() * dtype_size(e.dtype);
    auto raw = r.get_bytes(nbytes, "values of \"" + e.name + "\"");
    e.raw.assign(raw.begin(), raw.end());
    c.entries.push_back(std::move(e));
  }
  if (r.remaining() != 0) r.fail("unexpected trailing bytes");
  return c;
}

void write_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path) {
  write_file_bytes(path, encode_checkpoint(checkpoint));
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  return decode_checkpoint(read_file_bytes(path), path.string());
}

}  // namespace painseq::io
