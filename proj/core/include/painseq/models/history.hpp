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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace painseq::models {

enum class StopReason { kEarlyStop, kMaxEpochs };

std::string_view to_string(StopReason r);

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;

  friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  StopReason stop_reason = StopReason::kMaxEpochs;
  std::size_t best_epoch = 0;  // 1-based

  const EpochRecord& best() const { return epochs.at(best_epoch - 1); }

  friend bool operator==(const TrainHistory&, const TrainHistory&) = default;
};

// Header "epoch,train_loss,val_loss,val_accuracy", values at round-trip precision.
std::string history_to_csv(const TrainHistory& history);
void write_history_csv(const TrainHistory& history, const std::filesystem::path& path);

}  // namespace painseq::models
