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

#include <benchmark/benchmark.h>

#include <random>

#include "painseq/extractor/ops.hpp"
#include "painseq/extractor/vgg.hpp"
#include "painseq/nn/init.hpp"

using namespace painseq;
using namespace painseq::extractor;

namespace {

std::vector<float> random_values(std::size_t n, std::uint64_t seed) {
  std::vector<float> v(n);
  nn::Rng rng(seed);
  std::normal_distribution<float> d(0.0f, 1.0f);
  for (auto& x : v) x = d(rng);
  return v;
}

// One 3x3 same-padded layer; args are channels in/out and the square side.
void BM_Conv3x3(benchmark::State& state) {
  const auto cin = static_cast<std::size_t>(state.range(0));
  const auto cout = static_cast<std::size_t>(state.range(1));
  const auto side = static_cast<std::size_t>(state.range(2));
  FeatureMap<float> x(cin, side, side);
  x.data = random_values(x.data.size(), 1);
  const auto k = random_values(cout * cin * 9, 2);
  const auto b = random_values(cout, 3);
  for (auto _ : state) benchmark::DoNotOptimize(conv3x3_same<float>(x, k, b, cout, true));
  state.counters["GFLOP/s"] = benchmark::Counter(
      static_cast<double>(2 * cin * cout * 9 * side * side) * static_cast<double>(state.iterations()) /
          1e9,
      benchmark::Counter::kIsRate);
}
BENCHMARK(BM_Conv3x3)
    ->Args({64, 64, 56})
    ->Args({256, 256, 28})
    ->Args({512, 512, 14})
    ->Unit(benchmark::kMillisecond);

// A full 224 x 224 frame through all thirteen convolutions and fc1024.
void BM_ExtractFrame(benchmark::State& state) {
  const auto w = ExtractorWeights::random(1);
  ImageTensor img;
  img.height = img.width = kInputSize;
  img.data = random_values(kInputSize * kInputSize * 3, 4);
  for (auto _ : state) benchmark::DoNotOptimize(extract_features(w, img));
}
BENCHMARK(BM_ExtractFrame)->Unit(benchmark::kMillisecond)->Iterations(2);

}  // namespace
