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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "painseq/nn/init.hpp"
#include "painseq/nn/tensor.hpp"

namespace painseq::nn {

struct BlockError {
  std::string name;
  double max_rel_error = 0.0;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  std::size_t checked = 0;
};

struct GradCheckReport {
  std::vector<BlockError> blocks;

  double max_rel_error() const {
    double m = 0.0;
    for (const auto& b : blocks) m = std::max(m, b.max_rel_error);
    return m;
  }
  bool passed(double tolerance) const { return max_rel_error() < tolerance; }
};

struct GradCheckOptions {
  double step = 1e-5;
  // Denominator floor so entries whose true gradient is ~0 are judged on
  // absolute error.
  double floor = 1e-6;
  // 0 checks every entry; otherwise a seeded random subset of this size.
  std::size_t max_entries_per_block = 0;
  std::uint64_t seed = 0;
};

// |a - n| / max(|a|, |n|, floor)
inline double relative_error(double analytic, double numeric, double floor) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / denom;
}

// Central finite differences against analytic gradients. `backward` must fill
// every `grad` tensor of `params` for the current values; `loss` must be a pure
// function of the parameter values (reseed any dropout RNG inside it).
inline GradCheckReport grad_check(std::span<const ParamRef<double>> params,
                                  const std::function<double()>& loss,
                                  const std::function<void()>& backward,
                                  const GradCheckOptions& options = {}) {
  backward();
  std::vector<Tensor<double>> analytic;
  analytic.reserve(params.size());
  for (const auto& p : params) analytic.push_back(*p.grad);

  Rng rng(options.seed);
  GradCheckReport report;
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto& value = *params[k].value;
    BlockError block;
    block.name = params[k].name;
    std::vector<std::size_t> indices(value.size());
    for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
    if (options.max_entries_per_block != 0 && indices.size() > options.max_entries_per_block) {
      std::shuffle(indices.begin(), indices.end(), rng);
      indices.resize(options.max_entries_per_block);
    }
    for (std::size_t i : indices) {
      const double saved = value[i];
      value[i] = saved + options.step;
      const double plus = loss();
      value[i] = saved - options.step;
      const double minus = loss();
      value[i] = saved;
      const double numeric = (plus - minus) / (2.0 * options.step);
      const double a = analytic[k][i];
      const double rel = relative_error(a, numeric, options.floor);
      if (rel > block.max_rel_error || block.checked == 0) {
        block.max_rel_error = rel;
        block.worst_index = i;
        block.analytic = a;
        block.numeric = numeric;
      }
      ++block.checked;
    }
    report.blocks.push_back(block);
  }
  return report;
}

}  // namespace painseq::nn
