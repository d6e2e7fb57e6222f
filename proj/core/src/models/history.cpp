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

#include "painseq/models/history.hpp"

#include <fmt/format.h>

#include <fstream>

#include "painseq/errors.hpp"

namespace painseq::models {

std::string_view to_string(StopReason r) {
  return r == StopReason::kEarlyStop ? "early_stop" : "max_epochs";
}

std::string history_to_csv(const TrainHistory& history) {
  std::string out = "epoch,train_loss,val_loss,val_accuracy\n";
  for (const auto& e : history.epochs) {
    out += fmt::format("{},{},{},{}\n", e.epoch, e.train_loss, e.val_loss, e.val_accuracy);
  }
  return out;
}

void write_history_csv(const TrainHistory& history, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidInputError("cannot write " + path.string());
  f << history_to_csv(history);
  if (!f) throw InvalidInputError("failed writing " + path.string());
}

}  // namespace painseq::models
