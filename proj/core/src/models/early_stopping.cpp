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

#include "painseq/models/early_stopping.hpp"

#include <cmath>

#include "painseq/errors.hpp"

namespace painseq::models {

EarlyStopping::EarlyStopping(EarlyStopMetric metric, std::size_t patience)
    : metric_(metric), patience_(patience) {
  if (patience == 0) throw ConfigError("patience must be >= 1");
}

bool EarlyStopping::update(double value) {
  ++seen_;
  // A NaN never improves.
  const bool improved =
      !std::isnan(value) &&
      (best_epoch_ == 0 ||
       (metric_ == EarlyStopMetric::kValLoss ? value < best_ : value > best_));
  if (improved) {
    best_ = value;
    best_epoch_ = seen_;
    stale_ = 0;
    return true;
  }
  ++stale_;
  return false;
}

}  // namespace painseq::models
