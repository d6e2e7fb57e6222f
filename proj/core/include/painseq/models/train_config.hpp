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

#include <cstdint>
#include <string_view>

#include "painseq/io/key_value.hpp"
#include "painseq/nn/adadelta.hpp"
#include "painseq/nn/loss.hpp"

namespace painseq::models {

enum class EarlyStopMetric { kValLoss, kValAccuracy };
enum class Precision { kF32, kF64 };

std::string_view to_string(EarlyStopMetric m);
std::string_view to_string(Precision p);
std::string_view to_string(nn::ClassWeightMode m);

struct TrainConfig {
  std::size_t batch_size = 32;
  std::size_t max_epochs = 100;
  std::size_t patience = 5;
  double lr = 1.0;
  double rho = 0.95;
  double epsilon = 1e-6;
  double dropout = 0.3;
  std::uint64_t seed = 0;
  nn::ClassWeightMode class_weight_mode = nn::ClassWeightMode::kInverseFrequency;
  EarlyStopMetric early_stop_metric = EarlyStopMetric::kValLoss;
  bool ann_wide_first = false;
  Precision precision = Precision::kF32;

  // ConfigError for batch_size, patience or max_epochs of 0, a dropout rate
  // outside [0, 1), or non-positive rho/epsilon.
  void validate() const;

  nn::AdadeltaConfig adadelta() const { return {lr, rho, epsilon}; }

  // Keys match the field names; enum values are spelled as to_string()
  // prints them. Unknown keys are rejected.
  static TrainConfig from_key_value(const io::KeyValueConfig& kv);
};

}  // namespace painseq::models
