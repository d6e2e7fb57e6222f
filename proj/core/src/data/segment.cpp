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

#include "painseq/data/segment.hpp"

#include <string>

#include "painseq/errors.hpp"
#include "painseq/log.hpp"

namespace painseq::data {

std::vector<FeatureSequence> segment_sequence(const FeatureSequence& seq, std::size_t window,
                                              std::size_t hop) {
  if (window == 0 || hop == 0) throw InvalidInputError("segment window and hop must be >= 1");
  std::vector<FeatureSequence> out;
  if (seq.frames() < window) {
    logger()->info("sequence '{}' has {} frames, shorter than the {}-frame window; no segments",
                   seq.source_id, seq.frames(), window);
    return out;
  }
  for (std::size_t start = 0; start + window <= seq.frames(); start += hop) {
    auto part = seq.slice(start, window);
    part.source_id = seq.source_id + "#" + std::to_string(out.size());
    out.push_back(std::move(part));
  }
  return out;
}

FeatureSequence take_first_n(const FeatureSequence& seq, std::size_t n,
                             std::string_view sample_id) {
  if (n == 0) throw InvalidInputError("take_first_n needs n >= 1");
  if (seq.frames() < n) {
    const std::string id = sample_id.empty() ? seq.source_id : std::string(sample_id);
    throw ShortVideoError("video '" + id + "' has " + std::to_string(seq.frames()) +
                          " frames, needs " + std::to_string(n));
  }
  if (seq.frames() == n) return seq;
  return seq.slice(0, n);
}

}  // namespace painseq::data
