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

#include <cstddef>

#include "painseq/models/train_config.hpp"

namespace painseq::models {

// Patience rule: training stops once `patience` consecutive epochs fail to
// strictly improve on the best value seen so far.
class EarlyStopping {
 public:
  EarlyStopping(EarlyStopMetric metric, std::size_t patience);

  // Records one epoch's value; returns true if it is a new best.
  bool update(double value);
  bool should_stop() const { return stale_ >= patience_; }

  std::size_t best_epoch() const { return best_epoch_; }  // 1-based, 0 before any update
  double best_value() const { return best_; }
  std::size_t epochs_seen() const { return seen_; }

 private:
  EarlyStopMetric metric_;
  std::size_t patience_;
  std::size_t seen_ = 0;
  std::size_t stale_ = 0;
  std::size_t best_epoch_ = 0;
  double best_ = 0.0;
};

}  // namespace painseq::models
