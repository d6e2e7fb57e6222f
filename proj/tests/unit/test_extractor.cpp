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

#include <fstream>

#include "helpers.hpp"
#include "oracles.hpp"
#include "painseq/errors.hpp"
#include "painseq/extractor/image.hpp"
#include "painseq/extractor/ops.hpp"
#include "painseq/extractor/vgg.hpp"
#include "painseq/nn/init.hpp"

using namespace painseq;
using namespace painseq::extractor;

namespace {

RgbImage random_image(std::size_t w, std::size_t h, std::uint64_t seed) {
  RgbImage img(w, h);
  nn::Rng rng(seed);
  std::uniform_int_distribution<int> byte(0, 255);
  for (auto& p : img.pixels) p = static_cast<std::uint8_t>(byte(rng));
  return img;
}

std::vector<double> random_values(std::size_t n, std::uint64_t seed) {
  const auto t = testing::random_tensor({n}, seed);
  return t.vector();
}

ImageTensor constant_input(float v) {
  ImageTensor t;
  t.height = t.width = kInputSize;
  t.data.assign(kInputSize * kInputSize * 3, v);
  return t;
}

}  // namespace

TEST_CASE("bilinear resize matches the tent-kernel oracle") {
  const PreprocessOptions raw{.target = 224, .normalize = false};
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const std::size_t w = 37 + 50 * seed, h = 29 + 61 * seed;
    const auto frame = random_image(w, h, seed);
    const BBox box{3, 2, static_cast<long long>(w - 5), static_cast<long long>(h - 4)};
    const auto out = preprocess_frame(frame, box, raw);
    CHECK_FALSE(out.clamped);
    double worst = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
      std::vector<double> plane(static_cast<std::size_t>(box.w * box.h));
      for (long long y = 0; y < box.h; ++y) {
        for (long long x = 0; x < box.w; ++x) {
          plane[static_cast<std::size_t>(y * box.w + x)] =
              frame.at(static_cast<std::size_t>(box.y + y), static_cast<std::size_t>(box.x + x), c) /
              255.0;
        }
      }
      const double sy = static_cast<double>(box.h) / 224.0, sx = static_cast<double>(box.w) / 224.0;
      for (std::size_t oy = 0; oy < 224; ++oy) {
        for (std::size_t ox = 0; ox < 224; ++ox) {
          const double ref =
              oracle::bilinear_at(plane, static_cast<std::size_t>(box.h),
                                  static_cast<std::size_t>(box.w), (oy + 0.5) * sy - 0.5,
                                  (ox + 0.5) * sx - 0.5);
          worst = std::max(worst, std::abs(ref - out.image.at(oy, ox, c)));
        }
      }
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("preprocessing identity and constant frames") {
  const auto frame = random_image(300, 260, 9);
  const auto out = preprocess_frame(frame, BBox{40, 20, 224, 224}, {.normalize = false});
  std::size_t off = 0;
  for (std::size_t y = 0; y < 224; ++y) {
    for (std::size_t x = 0; x < 224; ++x) {
      for (std::size_t c = 0; c < 3; ++c) {
        if (out.image.at(y, x, c) != static_cast<float>(frame.at(y + 20, x + 40, c) / 255.0)) ++off;
      }
    }
  }
  CHECK(off == 0);

  const RgbImage grey(97, 131, 200);
  const auto norm = preprocess_frame(grey, BBox{0, 0, 97, 131});
  for (float v : norm.image.data) CHECK(v == doctest::Approx(200.0 / 255.0 - 0.5).epsilon(1e-6));
}

TEST_CASE("bounding boxes: clipping and rejection") {
  const RgbImage frame(64, 48, 10);
  CHECK(preprocess_frame(frame, BBox{-10, -5, 40, 40}).clamped);
  CHECK_FALSE(preprocess_frame(frame, BBox{0, 0, 64, 48}).clamped);
  CHECK_THROWS_AS(preprocess_frame(frame, BBox{0, 0, 0, 10}), InvalidBBoxError);
  CHECK_THROWS_AS(preprocess_frame(frame, BBox{100, 100, 10, 10}), InvalidBBoxError);
}

TEST_CASE("ppm and bbox files round trip") {
  testing::TempDir dir("ppm");
  const auto img = random_image(13, 7, 3);
  write_ppm(img, dir / "a.ppm");
  const auto back = read_ppm(dir / "a.ppm");
  CHECK(back.width == 13);
  CHECK(back.height == 7);
  CHECK(back.pixels == img.pixels);
  {
    std::ofstream f(dir / "bad.ppm");
    f << "P3\n1 1\n255\n0 0 0\n";
  }
  CHECK_THROWS_AS(read_ppm(dir / "bad.ppm"), InvalidInputError);
  {
    std::ofstream f(dir / "short.ppm", std::ios::binary);
    f << "P6\n4 4\n255\n" << std::string(20, 'x');
  }
  CHECK_THROWS_AS(read_ppm(dir / "short.ppm"), InvalidInputError);
  {
    std::ofstream f(dir / "boxes.txt");
    f << "# frame, x, y, w, h\n0, 1, 2, 30, 40\n\n5, -3, 0, 10, 10\n";
  }
  const auto boxes = read_bbox_file(dir / "boxes.txt");
  REQUIRE(boxes.size() == 2);
  CHECK(boxes.at(0) == BBox{1, 2, 30, 40});
  CHECK(boxes.at(5) == BBox{-3, 0, 10, 10});
  {
    std::ofstream f(dir / "bad_boxes.txt");
    f << "0, 1, 2, 30, 40\n1, 2, three, 4, 5\n";
  }
  try {
    read_bbox_file(dir / "bad_boxes.txt");
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("bad_boxes.txt:2") != std::string::npos);
  }
}

TEST_CASE("conv3x3 matches the direct oracle") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const std::size_t cin = 1 + seed, cout = 2 + seed % 3, h = 5 + seed, w = 5 + 2 * seed;
    FeatureMap<double> x(cin, h, w);
    x.data = random_values(cin * h * w, seed);
    const auto k = random_values(cout * cin * 9, 100 + seed);
    const auto b = random_values(cout, 200 + seed);
    const auto y = conv3x3_same<double>(x, k, b, cout, false);
    CHECK(testing::max_abs_diff(y.data, oracle::conv3x3(x.data, cin, h, w, k, b, cout)) < 1e-12);
    const auto r = conv3x3_same<double>(x, k, b, cout, true);
    for (std::size_t i = 0; i < r.data.size(); ++i) CHECK(r.data[i] == std::max(0.0, y.data[i]));
  }
}

TEST_CASE("conv3x3 with a centered impulse kernel is the identity") {
  FeatureMap<float> x(2, 5, 5);
  for (std::size_t i = 0; i < x.data.size(); ++i) x.data[i] = static_cast<float>(i) - 20.0f;
  std::vector<float> k(2 * 2 * 9, 0.0f);
  k[(0 * 2 + 0) * 9 + 4] = 1.0f;
  k[(1 * 2 + 1) * 9 + 4] = 1.0f;
  const std::vector<float> b(2, 0.0f);
  CHECK(conv3x3_same<float>(x, k, b, 2, false).data == x.data);
  CHECK_THROWS_AS(conv3x3_same<float>(x, k, std::vector<float>(3), 2, false), DimensionError);
}

TEST_CASE("max-pool and global average pool") {
  FeatureMap<double> x(3, 7, 6);
  x.data = random_values(x.data.size(), 4);
  const auto p = max_pool2x2(x);
  CHECK(p.height == 3);
  CHECK(p.width == 3);
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t y = 0; y < 3; ++y) {
      for (std::size_t xx = 0; xx < 3; ++xx) {
        double m = -1e300;
        for (std::size_t dy = 0; dy < 2; ++dy) {
          for (std::size_t dx = 0; dx < 2; ++dx) m = std::max(m, x.at(c, 2 * y + dy, 2 * xx + dx));
        }
        CHECK(p.at(c, y, xx) == m);
      }
    }
  }
  const auto g = global_average_pool(x);
  for (std::size_t c = 0; c < 3; ++c) {
    double s = 0.0;
    for (std::size_t i = 0; i < 42; ++i) s += x.data[c * 42 + i];
    CHECK(std::abs(g[c] - s / 42.0) < 1e-12);
  }
  CHECK_THROWS_AS(global_average_pool(FeatureMap<double>(2, 0, 0)), InvalidInputError);
}

TEST_CASE("zero weights give all-zero features of length 1024") {
  const auto w = ExtractorWeights::zeros();
  const auto f = extract_features(w, constant_input(0.3f));
  CHECK(f.size() == kFeatureDim);
  for (float v : f) CHECK(v == 0.0f);
}

TEST_CASE("random extractor is deterministic and non-negative") {
  const auto w = ExtractorWeights::random(7);
  CHECK(ExtractorWeights::random(7).fc_weight == w.fc_weight);
  const auto frame = preprocess_frame(random_image(256, 256, 1), BBox{0, 0, 256, 256}).image;
  const auto a = extract_features(w, frame);
  const auto b = extract_features(w, frame);
  CHECK(a == b);
  CHECK(a.size() == kFeatureDim);
  std::size_t negative = 0;
  for (float v : a) negative += v < 0.0f ? 1 : 0;
  CHECK(negative == 0);

  ImageTensor wrong = frame;
  wrong.width = 223;
  CHECK_THROWS_AS(extract_features(w, wrong), DimensionError);
}

TEST_CASE("extractor checkpoints validate topology") {
  auto c = ExtractorWeights::zeros().to_checkpoint();
  // A classifier head past the truncation point is ignored.
  c.add("fc_out.weight", nn::Tensor<float>({1024, 3}));
  CHECK_NOTHROW(ExtractorWeights::from_checkpoint(c));

  auto no_fc = c;
  std::erase_if(no_fc.entries, [](const auto& e) { return e.name.rfind("fc1024", 0) == 0; });
  try {
    ExtractorWeights::from_checkpoint(no_fc);
    FAIL("expected TopologyError");
  } catch (const TopologyError& e) {
    CHECK(std::string(e.what()).find("fc1024") != std::string::npos);
  }

  auto wrong = ExtractorWeights::zeros().to_checkpoint();
  for (auto& e : wrong.entries) {
    if (e.name == "conv3_2.bias") e = io::CheckpointEntry::from_tensor("conv3_2.bias", nn::Tensor<float>({255}));
  }
  try {
    ExtractorWeights::from_checkpoint(wrong);
    FAIL("expected TopologyError");
  } catch (const TopologyError& e) {
    CHECK(std::string(e.what()).find("conv3_2") != std::string::npos);
  }
}

TEST_CASE("a video of repeated frames extracts once per distinct frame") {
  const auto w = ExtractorWeights::random(3);
  const auto a = preprocess_frame(random_image(240, 240, 5), BBox{0, 0, 240, 240}).image;
  const auto b = preprocess_frame(random_image(240, 240, 6), BBox{0, 0, 240, 240}).image;
  std::vector<ImageTensor> frames(300, a);
  frames[150] = b;
  FeatureCache cache;
  const auto seq = extract_video(w, frames, 30.0, &cache);
  CHECK(seq.frames() == 300);
  CHECK(seq.dim() == 1024);
  CHECK(cache.size() == 2);
  CHECK(cache.hits() == 298);
  const auto fa = extract_features(w, a);
  const auto fb = extract_features(w, b);
  for (std::size_t d = 0; d < 1024; ++d) {
    CHECK(seq.at(0, d) == fa[d]);
    CHECK(seq.at(299, d) == fa[d]);
    CHECK(seq.at(150, d) == fb[d]);
  }
  CHECK_THROWS_AS(extract_video(w, std::span<const ImageTensor>{}), InvalidInputError);
}
