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
#include <fstream>

#include "helpers.hpp"
#include "painseq/errors.hpp"
#include "painseq/io/checkpoint.hpp"
#include "painseq/io/key_value.hpp"

using namespace painseq;
using testing::random_tensor;

namespace {

io::Checkpoint sample_checkpoint() {
  io::Checkpoint c;
  c.add("dense0.weight", nn::tensor_cast<float>(random_tensor({4, 3}, 1)));
  c.add("dense0.bias", random_tensor({3}, 2));
  c.add("meta.scalar", nn::Tensor<double>({1}, {0.3}));
  return c;
}

}  // namespace

TEST_CASE("checkpoint round trip is bit-exact for both precisions") {
  const auto c = sample_checkpoint();
  const auto bytes = io::encode_checkpoint(c);
  const auto back = io::decode_checkpoint(bytes);
  REQUIRE(back.entries.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back.entries[i].name == c.entries[i].name);
    CHECK(back.entries[i].dtype == c.entries[i].dtype);
    CHECK(back.entries[i].shape == c.entries[i].shape);
    CHECK(back.entries[i].raw == c.entries[i].raw);
  }
  CHECK(io::encode_checkpoint(back) == bytes);
  CHECK(back.require("dense0.bias").tensor<double>() == random_tensor({3}, 2));

  testing::TempDir dir("psqw");
  io::write_checkpoint(c, dir / "w.psqw");
  CHECK(io::encode_checkpoint(io::read_checkpoint(dir / "w.psqw")) == bytes);
}

TEST_CASE("checkpoint decoding reports the failing offset") {
  const auto bytes = io::encode_checkpoint(sample_checkpoint());
  {
    auto bad = bytes;
    bad[0] = std::byte{'X'};
    CHECK_THROWS_AS(io::decode_checkpoint(bad), FormatError);
  }
  for (std::size_t cut : {std::size_t{2}, std::size_t{9}, bytes.size() - 1}) {
    const std::span<const std::byte> head(bytes.data(), cut);
    try {
      io::decode_checkpoint(head, "w.psqw");
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(e.offset() <= cut);
      CHECK(std::string(e.what()).find("w.psqw") != std::string::npos);
      CHECK(std::string(e.what()).find("offset") != std::string::npos);
    }
  }
  {
    auto extra = bytes;
    extra.push_back(std::byte{0});
    CHECK_THROWS_AS(io::decode_checkpoint(extra), FormatError);
  }
  CHECK_THROWS_AS(sample_checkpoint().require("dense9.weight"), TopologyError);
}

TEST_CASE("key-value config parsing") {
  const auto kv = io::KeyValueConfig::parse(
      "# comment\n\nbatch_size = 16\n  lr=0.5  \nname = ann model\nflag = true\n", "t.cfg");
  CHECK(kv.get_uint("batch_size", 0) == 16);
  CHECK(kv.get_double("lr", 0.0) == 0.5);
  CHECK(kv.get_string("name", "") == "ann model");
  CHECK(kv.get_bool("flag", false));
  CHECK(kv.get_double("missing", 2.5) == 2.5);
  CHECK_FALSE(kv.has("missing"));

  CHECK_NOTHROW(kv.reject_unknown({"batch_size", "lr", "name", "flag"}));
  try {
    kv.reject_unknown({"batch_size", "lr", "flag"});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("t.cfg:5") != std::string::npos);
  }
  try {
    io::KeyValueConfig::parse("a = 1\nnot a pair\n", "bad.cfg");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("bad.cfg:2") != std::string::npos);
  }
  CHECK_THROWS_AS(io::KeyValueConfig::parse("x = 1\nx = 2\n").get("x"), ConfigError);
  CHECK_THROWS_AS(io::KeyValueConfig::parse("n = abc\n").get_uint("n", 0), ConfigError);
  CHECK_THROWS_AS(io::KeyValueConfig::parse("n = -3\n").get_uint("n", 0), ConfigError);
  CHECK_THROWS_AS(io::KeyValueConfig::parse("b = maybe\n").get_bool("b", false), ConfigError);
  CHECK_THROWS_AS(io::KeyValueConfig::load("/nonexistent/x.cfg"), InvalidInputError);
}
