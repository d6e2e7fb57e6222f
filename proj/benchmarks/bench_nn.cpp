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

#include "painseq/models/lstm_model.hpp"
#include "painseq/models/simple_ann.hpp"
#include "painseq/nn/dense.hpp"
#include "painseq/nn/lstm.hpp"

using namespace painseq;

namespace {

nn::Tensor<float> random_input(nn::Shape shape, std::uint64_t seed) {
  nn::Tensor<float> t(std::move(shape));
  nn::Rng rng(seed);
  std::normal_distribution<float> n(0.0f, 1.0f);
  for (auto& v : t.values()) v = n(rng);
  return t;
}

// First ANN layer on a batch of 32 frames.
void BM_DenseForward(benchmark::State& state) {
  nn::Rng rng(1);
  const auto layer = nn::DenseLayer<float>::xavier(1024, 128, nn::Activation::kRelu, rng);
  const auto x = random_input({32, 1024}, 2);
  for (auto _ : state) benchmark::DoNotOptimize(nn::dense_forward(layer, x));
  state.SetItemsProcessed(state.iterations() * 32);
}
BENCHMARK(BM_DenseForward);

void BM_DenseBackward(benchmark::State& state) {
  nn::Rng rng(1);
  const auto layer = nn::DenseLayer<float>::xavier(1024, 128, nn::Activation::kRelu, rng);
  const auto x = random_input({32, 1024}, 2);
  const auto up = random_input({32, 128}, 3);
  for (auto _ : state) benchmark::DoNotOptimize(nn::dense_backward(layer, x, up));
  state.SetItemsProcessed(state.iterations() * 32);
}
BENCHMARK(BM_DenseBackward);

// First LSTM layer over `range(0)` frames of 1024 features, batch 8.
void BM_LstmForward(benchmark::State& state) {
  const auto time = static_cast<std::size_t>(state.range(0));
  nn::Rng rng(1);
  const auto layer = nn::LstmLayer<float>::xavier(1024, 32, rng);
  const auto x = random_input({8, time, 1024}, 2);
  for (auto _ : state) benchmark::DoNotOptimize(nn::lstm_forward(layer, x));
  state.SetItemsProcessed(state.iterations() * 8 * static_cast<std::int64_t>(time));
}
BENCHMARK(BM_LstmForward)->Arg(30)->Arg(300);

void BM_LstmBackward(benchmark::State& state) {
  nn::Rng rng(1);
  const auto layer = nn::LstmLayer<float>::xavier(1024, 32, rng);
  const auto x = random_input({8, 300, 1024}, 2);
  nn::LstmCache<float> cache;
  const auto y = nn::lstm_forward(layer, x, &cache);
  const auto up = random_input(y.outputs.shape(), 3);
  for (auto _ : state) benchmark::DoNotOptimize(nn::lstm_backward(layer, cache, up));
}
BENCHMARK(BM_LstmBackward)->Unit(benchmark::kMillisecond);

// One training step of each model on a default-sized batch.
void BM_AnnStep(benchmark::State& state) {
  auto ann = models::SimpleAnn<float>::build(models::AnnArchitecture::standard(), 1);
  const auto x = random_input({32, 1024}, 2);
  std::vector<int> y(32);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = static_cast<int>(i % 3);
  nn::Rng rng(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ann.loss_and_grads(x, y, nn::ClassWeights::uniform(), rng));
  }
}
BENCHMARK(BM_AnnStep);

void BM_LstmModelStep(benchmark::State& state) {
  auto m = models::LstmModel<float>::build(models::LstmArchitecture{}, 1);
  const auto x = random_input({8, 300, 1024}, 2);
  std::vector<int> y(8);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = static_cast<int>(i % 3);
  nn::Rng rng(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(m.loss_and_grads(x, y, nn::ClassWeights::uniform(), rng));
  }
}
BENCHMARK(BM_LstmModelStep)->Unit(benchmark::kMillisecond);

}  // namespace
