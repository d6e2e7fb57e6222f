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

#include "painseq/data/fseq.hpp"

#include <cstring>
#include <fstream>

#include "painseq/errors.hpp"

namespace painseq::data {
namespace {

FseqHeader read_header(io::ByteReader& r) {
  auto magic = r.get_bytes(4, "magic");
  if (std::memcmp(magic.data(), "FSEQ", 4) != 0) {
    throw FormatError(r.context() + ": bad magic (expected FSEQ) at byte offset 0", 0);
  }
  const std::size_t version_at = r.offset();
  const auto version = r.get<std::uint16_t>("version");
  if (version != kFseqVersion) {
    throw FormatError(r.context() + ": unsupported version " + std::to_string(version) +
                          " at byte offset " + std::to_string(version_at),
                      version_at);
  }
  FseqHeader h;
  const std::size_t tag_at = r.offset();
  h.dtype = io::dtype_from_tag(r.get<std::uint8_t>("dtype"), tag_at);
  const std::size_t dim_at = r.offset();
  h.dim = r.get<std::uint32_t>("dim");
  const std::size_t frames_at = r.offset();
  h.frames = r.get<std::uint32_t>("frames");
  const std::size_t fps_at = r.offset();
  h.fps = r.get<float>("fps");
  r.get_bytes(8, "reserved");
  if (h.dim == 0) {
    throw FormatError(r.context() + ": invalid header, dim is 0 at byte offset " +
                          std::to_string(dim_at),
                      dim_at);
  }
  if (h.frames == 0) {
    throw FormatError(r.context() + ": invalid header, frames is 0 at byte offset " +
                          std::to_string(frames_at),
                      frames_at);
  }
  if (!(h.fps > 0.0f)) {
    throw FormatError(r.context() + ": invalid header, fps must be positive at byte offset " +
                          std::to_string(fps_at),
                      fps_at);
  }
  return h;
}

}  // namespace

std::vector<std::byte> encode_fseq(const FeatureSequence& seq) {
  io::ByteWriter w;
  w.put_string("FSEQ");
  w.put<std::uint16_t>(kFseqVersion);
  w.put<std::uint8_t>(static_cast<std::uint8_t>(seq.dtype()));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(seq.dim()));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(seq.frames()));
  w.put<float>(static_cast<float>(seq.fps()));
  for (int i = 0; i < 8; ++i) w.put<std::uint8_t>(0);
  if (seq.dtype() == io::DType::kF32) {
    w.put_bytes(std::as_bytes(seq.f32()));
  } else {
    w.put_bytes(std::as_bytes(seq.f64()));
  }
  return w.release();
}

FseqHeader decode_fseq_header(std::span<const std::byte> bytes, const std::string& context) {
  io::ByteReader r(bytes, context);
  return read_header(r);
}

FeatureSequence decode_fseq(std::span<const std::byte> bytes, const std::string& context) {
  io::ByteReader r(bytes, context);
  const FseqHeader h = read_header(r);
  const std::size_t count = static_cast<std::size_t>(h.frames) * h.dim;
  const std::size_t expected = count * io::dtype_size(h.dtype);
  if (r.remaining() < expected) {
    const std::size_t rows = r.remaining() / (h.dim * io::dtype_size(h.dtype));
    r.fail("truncated: header declares " + std::to_string(h.frames) + " frames of dim " +
           std::to_string(h.dim) + " but only " + std::to_string(rows) + " complete frames follow");
  }
  auto raw = r.get_bytes(expected, "values");
  if (r.remaining() != 0) {
    r.fail("dim/frames mismatch with header: " + std::to_string(r.remaining()) +
           " unexpected trailing bytes");
  }
  if (h.dtype == io::DType::kF32) {
    std::vector<float> v(count);
    std::memcpy(v.data(), raw.data(), expected);
    return FeatureSequence::from_values(h.frames, h.dim, h.fps, std::move(v));
  }
  std::vector<double> v(count);
  std::memcpy(v.data(), raw.data(), expected);
  return FeatureSequence::from_values(h.frames, h.dim, h.fps, std::move(v));
}

void write_fseq(const FeatureSequence& seq, const std::filesystem::path& path) {
  io::write_file_bytes(path, encode_fseq(seq));
}

FeatureSequence read_fseq(const std::filesystem::path& path) {
  auto seq = decode_fseq(io::read_file_bytes(path), path.string());
  seq.source_id = path.stem().string();
  return seq;
}

FseqHeader read_fseq_header(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInputError("cannot open " + path.string());
  std::vector<char> buf(kFseqHeaderSize);
  in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
  std::vector<std::byte> bytes(static_cast<std::size_t>(in.gcount()));
  std::memcpy(bytes.data(), buf.data(), bytes.size());
  return decode_fseq_header(bytes, path.string());
}

}  // namespace painseq::data
