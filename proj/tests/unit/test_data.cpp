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

#include <doctest.h>

#include <cstring>

#include "helpers.hpp"
#include "painseq/data/dataset.hpp"
#include "painseq/data/fseq.hpp"
#include "painseq/data/manifest.hpp"
#include "painseq/data/segment.hpp"
#include "painseq/data/synth.hpp"
#include "painseq/errors.hpp"
#include "painseq/nn/init.hpp"

using namespace painseq;
using namespace painseq::data;

namespace {

FeatureSequence random_sequence(std::size_t frames, std::size_t dim, io::DType dtype,
                                std::uint64_t seed) {
  FeatureSequence s(frames, dim, 30.0, dtype);
  nn::Rng rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  for (std::size_t f = 0; f < frames; ++f) {
    for (std::size_t d = 0; d < dim; ++d) s.set(f, d, n(rng));
  }
  return s;
}

// Row f holds the value f in every column, so slices are easy to identify.
FeatureSequence ramp(std::size_t frames, std::size_t dim = 2) {
  FeatureSequence s(frames, dim, 30.0);
  for (std::size_t f = 0; f < frames; ++f) {
    for (std::size_t d = 0; d < dim; ++d) s.set(f, d, static_cast<double>(f));
  }
  return s;
}

SynthConfig tiny_synth() {
  SynthConfig c;
  c.train_participants = 2;
  c.validation_participants = 1;
  c.test_participants = 1;
  c.repetitions = 2;
  c.no_pain_frames = 620;
  c.pain_frames = 300;
  c.dim = 6;
  return c;
}

}  // namespace

TEST_CASE("fseq round trip is bit-exact") {
  for (auto dtype : {io::DType::kF32, io::DType::kF64}) {
    const auto seq = random_sequence(300, 1024, dtype, 1);
    const auto bytes = encode_fseq(seq);
    CHECK(bytes.size() == kFseqHeaderSize + 300 * 1024 * io::dtype_size(dtype));
    const auto back = decode_fseq(bytes);
    CHECK(back == seq);
    CHECK(back.dtype() == dtype);
    CHECK(encode_fseq(back) == bytes);
  }
  nn::Rng shapes(3);
  std::uniform_int_distribution<std::size_t> dim(1, 40);
  for (std::uint64_t trial = 0; trial < 30; ++trial) {
    const auto dtype = trial % 2 == 0 ? io::DType::kF32 : io::DType::kF64;
    const auto seq = random_sequence(dim(shapes), dim(shapes), dtype, 10 + trial);
    CHECK(decode_fseq(encode_fseq(seq)) == seq);
  }
  testing::TempDir dir("fseq");
  const auto seq = random_sequence(7, 5, io::DType::kF32, 2);
  write_fseq(seq, dir / "a.fseq");
  CHECK(read_fseq(dir / "a.fseq") == seq);
  const auto h = read_fseq_header(dir / "a.fseq");
  CHECK(h.frames == 7);
  CHECK(h.dim == 5);
  CHECK(h.fps == 30.0f);
}

TEST_CASE("fseq rejects malformed files with byte offsets") {
  const auto bytes = encode_fseq(random_sequence(300, 8, io::DType::kF32, 4));
  {
    // One frame short of the declared 300.
    const std::span<const std::byte> short_file(bytes.data(), bytes.size() - 8 * 4);
    try {
      decode_fseq(short_file, "v.fseq");
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("truncated") != std::string::npos);
      CHECK(msg.find("v.fseq") != std::string::npos);
      CHECK(e.offset() == kFseqHeaderSize);
    }
  }
  {
    auto bad = bytes;
    std::memset(bad.data() + 7, 0, 4);  // dim
    try {
      decode_fseq(bad);
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(std::string(e.what()).find("dim is 0") != std::string::npos);
    }
  }
  {
    auto bad = bytes;
    bad[1] = std::byte{'X'};
    CHECK_THROWS_AS(decode_fseq(bad), FormatError);
  }
  {
    auto extra = bytes;
    extra.resize(extra.size() + 4);
    CHECK_THROWS_AS(decode_fseq(extra), FormatError);
  }
  CHECK_THROWS_AS(decode_fseq(std::span<const std::byte>(bytes.data(), 10)), FormatError);
}

TEST_CASE("feature sequences reject empty geometry") {
  CHECK_THROWS_AS(FeatureSequence(0, 4, 30.0), InvalidInputError);
  CHECK_THROWS_AS(FeatureSequence(4, 0, 30.0), InvalidInputError);
  CHECK_THROWS_AS(FeatureSequence(4, 4, 0.0), InvalidInputError);
  CHECK_THROWS_AS(FeatureSequence::from_values<float>(2, 2, 30.0, std::vector<float>(3)),
                  DimensionError);
}

TEST_CASE("segmentation") {
  CHECK(segment_sequence(ramp(1800)).size() == 6);
  CHECK(segment_sequence(ramp(1650)).size() == 5);
  CHECK(segment_sequence(ramp(299)).empty());
  CHECK(segment_sequence(ramp(300)).size() == 1);
  CHECK_THROWS_AS(segment_sequence(ramp(10), 0, 1), InvalidInputError);

  // Concatenating the windows gives back the first floor(T / w) * w frames.
  nn::Rng rng(8);
  std::uniform_int_distribution<std::size_t> len(1, 400), win(1, 60);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t t = len(rng), w = win(rng);
    const auto seq = ramp(t, 1);
    const auto parts = segment_sequence(seq, w, w);
    REQUIRE(parts.size() == t / w);
    std::size_t next = 0;
    for (const auto& p : parts) {
      CHECK(p.frames() == w);
      for (std::size_t f = 0; f < w; ++f) CHECK(p.at(f, 0) == static_cast<double>(next++));
    }
  }
}

TEST_CASE("take_first_n") {
  const auto first = take_first_n(ramp(450));
  CHECK(first.frames() == 300);
  CHECK(first.at(0, 0) == 0.0);
  CHECK(first.at(299, 1) == 299.0);
  CHECK(take_first_n(ramp(300)) == ramp(300));
  try {
    take_first_n(ramp(200), 300, "P009_low_02");
    FAIL("expected ShortVideoError");
  } catch (const ShortVideoError& e) {
    CHECK(std::string(e.what()).find("P009_low_02") != std::string::npos);
  }
}

TEST_CASE("manifest parsing and validation") {
  const std::string header = "sample_id,participant_id,label,split,path\n";
  const auto m = parse_manifest(header +
                                    "a,P01,0,train,f/a.fseq\n"
                                    "b,P01,HighPain,train,f/b.fseq\n"
                                    "c,P02,1,test,/abs/c.fseq\n",
                                "/data");
  REQUIRE(m.entries.size() == 3);
  CHECK(m.entries[1].label == Label::kHighPain);
  CHECK(m.entries[2].split == Split::kTest);
  CHECK(m.resolve(m.entries[0]) == std::filesystem::path("/data/f/a.fseq"));
  CHECK(m.resolve(m.entries[2]) == std::filesystem::path("/abs/c.fseq"));
  CHECK(m.in_split(Split::kTrain).size() == 2);
  CHECK(parse_manifest(manifest_to_csv(m), "/data").entries.size() == 3);

  try {
    parse_manifest(header + "a,P07,0,train,a\nb,P07,1,test,b\n", ".").validate();
    FAIL("expected SplitLeakError");
  } catch (const SplitLeakError& e) {
    CHECK(std::string(e.what()).find("P07") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_manifest(header + "a,P01,0,train,a\na,P01,1,train,b\n", ".").validate(),
                  InvalidInputError);
  CHECK_THROWS_AS(parse_manifest(header + "a,P01,4,train,a\n", "."), InvalidLabelError);
  CHECK_THROWS_AS(parse_manifest(header + "a,P01,0,dev,a\n", "."), FormatError);
  CHECK_THROWS_AS(parse_manifest("id,label\n", "."), FormatError);
  try {
    parse_manifest(header + "a,P01,0,train\n", ".", "m.csv");
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.offset() == 2);
  }

  testing::TempDir dir("manifest");
  write_manifest(m, dir / "manifest.csv");
  CHECK_THROWS_AS(load_manifest(dir / "manifest.csv"), InvalidInputError);
  CHECK(load_manifest(dir / "manifest.csv", false).entries.size() == 3);
}

TEST_CASE("synthetic data is a pure function of the config") {
  const auto cfg = tiny_synth();
  const auto a = synth_sequences(cfg);
  const auto b = synth_sequences(cfg);
  REQUIRE(a.size() == 4 * (1 + 2 * 2));
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].entry.sample_id == b[i].entry.sample_id);
    CHECK(a[i].features == b[i].features);
    CHECK(a[i].features.all_finite());
  }
  CHECK(a[0].features.frames() == 620);
  CHECK(a[1].features.frames() == 300);

  auto other = cfg;
  other.seed += 1;
  CHECK_FALSE(synth_sequences(other)[0].features == a[0].features);

  testing::TempDir d1("synth1"), d2("synth2");
  const auto m1 = synth_dataset(cfg, d1.path());
  synth_dataset(cfg, d2.path());
  CHECK(io::read_file_bytes(d1 / "manifest.csv") == io::read_file_bytes(d2 / "manifest.csv"));
  for (const auto& e : m1.entries) {
    CHECK(io::read_file_bytes(d1.path() / e.path) == io::read_file_bytes(d2.path() / e.path));
  }
  CHECK_NOTHROW(load_manifest(d1 / "manifest.csv"));
}

TEST_CASE("synthetic data without noise repeats one frame per participant and class") {
  auto cfg = tiny_synth();
  cfg.noise_scale = 0.0;
  for (const auto& s : synth_sequences(cfg)) {
    const auto& f = s.features;
    for (std::size_t t = 1; t < f.frames(); ++t) {
      for (std::size_t d = 0; d < f.dim(); ++d) REQUIRE(f.at(t, d) == f.at(0, d));
    }
  }
}

TEST_CASE("synthetic config validation") {
  auto cfg = tiny_synth();
  cfg.repetitions = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = tiny_synth();
  cfg.noise_scale = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  const auto kv = io::KeyValueConfig::parse("repetitions = 3\ndim = 16\nseed = 5\n");
  const auto parsed = SynthConfig::from_key_value(kv);
  CHECK(parsed.repetitions == 3);
  CHECK(parsed.dim == 16);
  CHECK(parsed.seed == 5);
  CHECK_THROWS_AS(SynthConfig::from_key_value(io::KeyValueConfig::parse("colour = red\n")),
                  ConfigError);
}

TEST_CASE("dataset counts after segmentation") {
  auto cfg = tiny_synth();
  cfg.train_participants = 1;
  cfg.repetitions = 12;
  cfg.no_pain_frames = 1800;
  cfg.dim = 3;
  testing::TempDir dir("counts");
  const auto m = synth_dataset(cfg, dir.path());
  using Counts = std::array<std::size_t, kNumClasses>;
  CHECK(dataset_counts(m, Split::kTrain, UnitLevel::kSequence) == Counts{6, 12, 12});
  CHECK(dataset_counts(m, Split::kTrain, UnitLevel::kFrame) == Counts{1800, 3600, 3600});

  const auto loaded = load_split(m, Split::kTrain, SplitUse::kTrainSegments);
  CHECK(dataset_counts(loaded.units, UnitLevel::kSequence) == Counts{6, 12, 12});
  const auto val = load_split(m, Split::kValidation, SplitUse::kFirstN);
  CHECK(val.units.size() == 25);
  for (const auto& u : val.units) CHECK(u.features.frames() == 300);

  cfg.repetitions = 1;
  cfg.train_participants = 2;
  const auto balanced = synth_sequences(cfg);
  std::vector<LabeledSequence> videos;
  for (const auto& s : balanced) {
    if (s.entry.split != Split::kTrain) continue;
    videos.push_back({s.entry.sample_id, s.entry.participant_id, s.entry.label,
                      s.entry.label == Label::kNoPain ? s.features.slice(0, 300) : s.features});
  }
  const auto units = prepare_units(videos, SplitUse::kTrainSegments).units;
  CHECK(dataset_counts(units, UnitLevel::kSequence) == Counts{2, 2, 2});

  std::vector<LabeledSequence> no_high;
  for (const auto& u : units) {
    if (u.label != Label::kHighPain) no_high.push_back(u);
  }
  CHECK_THROWS_AS(dataset_counts(no_high, UnitLevel::kSequence), EmptyClassError);
}

TEST_CASE("first-n evaluation skips short videos") {
  std::vector<LabeledSequence> videos{{"long", "P1", Label::kNoPain, ramp(450)},
                                      {"short", "P1", Label::kLowPain, ramp(200)}};
  const auto split = prepare_units(videos, SplitUse::kFirstN);
  REQUIRE(split.units.size() == 1);
  CHECK(split.units[0].sample_id == "long");
  CHECK(split.units[0].features.frames() == 300);
  CHECK(split.skipped == std::vector<std::string>{"short"});
}
