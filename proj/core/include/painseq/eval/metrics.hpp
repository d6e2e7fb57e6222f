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

#include <array>
#include <optional>
#include <span>
#include <string>

#include "painseq/labels.hpp"

namespace painseq::eval {

// Rows are true classes, columns predicted classes.
struct ConfusionMatrix {
  std::array<std::array<std::size_t, kNumClasses>, kNumClasses> counts{};

  std::size_t total() const;
  std::size_t trace() const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

// DimensionError on a length mismatch, InvalidLabelError outside {0, 1, 2}.
ConfusionMatrix confusion(std::span<const int> predicted, std::span<const int> truth);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Zero denominators yield 0 and set the matching flag.
struct DegenerateFlags {
  bool precision = false;
  bool recall = false;
  bool f1 = false;
};

struct EvalReport {
  std::string model;
  std::string split;
  // Absent for rows that only carry an accuracy (external baselines).
  std::optional<std::array<ClassMetrics, kNumClasses>> per_class;
  std::optional<ClassMetrics> macro;
  std::optional<double> accuracy;
  std::optional<ConfusionMatrix> confusion;
  std::array<DegenerateFlags, kNumClasses> degenerate{};

  bool has_class_detail() const { return per_class.has_value(); }
};

// InvalidInputError for an empty matrix.
EvalReport metrics(const ConfusionMatrix& cm, std::string model = "", std::string split = "");

}  // namespace painseq::eval
