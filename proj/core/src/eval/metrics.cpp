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

#include "painseq/eval/metrics.hpp"

#include "painseq/errors.hpp"

namespace painseq::eval {

std::size_t ConfusionMatrix::total() const {
  std::size_t n = 0;
  for (const auto& row : counts) {
    for (auto v : row) n += v;
  }
  return n;
}

std::size_t ConfusionMatrix::trace() const {
  std::size_t n = 0;
  for (std::size_t c = 0; c < kNumClasses; ++c) n += counts[c][c];
  return n;
}

ConfusionMatrix confusion(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size()) {
    throw DimensionError("confusion: " + std::to_string(predicted.size()) +
                         " predictions for " + std::to_string(truth.size()) + " labels");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto t = static_cast<std::size_t>(label_from_index(truth[i]));
    const auto p = static_cast<std::size_t>(label_from_index(predicted[i]));
    ++cm.counts[t][p];
  }
  return cm;
}

EvalReport metrics(const ConfusionMatrix& cm, std::string model, std::string split) {
  const std::size_t total = cm.total();
  if (total == 0) throw InvalidInputError("metrics of an empty confusion matrix");
  EvalReport r;
  r.model = std::move(model);
  r.split = std::move(split);
  r.confusion = cm;
  std::array<ClassMetrics, kNumClasses> per{};
  ClassMetrics macro;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    std::size_t predicted = 0;
    std::size_t actual = 0;
    for (std::size_t k = 0; k < kNumClasses; ++k) {
      predicted += cm.counts[k][c];
      actual += cm.counts[c][k];
    }
    const double tp = static_cast<double>(cm.counts[c][c]);
    auto& m = per[c];
    auto& flag = r.degenerate[c];
    if (predicted == 0) {
      flag.precision = true;
    } else {
      m.precision = tp / static_cast<double>(predicted);
    }
    if (actual == 0) {
      flag.recall = true;
    } else {
      m.recall = tp / static_cast<double>(actual);
    }
    if (m.precision + m.recall == 0.0) {
      flag.f1 = true;
    } else {
      m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    }
    macro.precision += m.precision;
    macro.recall += m.recall;
    macro.f1 += m.f1;
  }
  macro.precision /= kNumClasses;
  macro.recall /= kNumClasses;
  macro.f1 /= kNumClasses;
  r.per_class = per;
  r.macro = macro;
  r.accuracy = static_cast<double>(cm.trace()) / static_cast<double>(total);
  return r;
}

}  // namespace painseq::eval
