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

#include "painseq/log.hpp"

#include <mutex>

#include <spdlog/sinks/stdout_color_sinks.h>

namespace painseq {
namespace {

std::mutex& logger_mutex() {
  static std::mutex m;
  return m;
}

std::shared_ptr<spdlog::logger>& logger_slot() {
  static std::shared_ptr<spdlog::logger> slot;
  return slot;
}

}  // namespace

std::shared_ptr<spdlog::logger> logger() {
  std::lock_guard lock(logger_mutex());
  auto& slot = logger_slot();
  if (!slot) {
    slot = std::make_shared<spdlog::logger>(
        "painseq", std::make_shared<spdlog::sinks::stderr_color_sink_mt>());
    slot->set_pattern("[%l] %v");
    slot->set_level(spdlog::level::info);
  }
  return slot;
}

void set_logger(std::shared_ptr<spdlog::logger> replacement) {
  std::lock_guard lock(logger_mutex());
  logger_slot() = std::move(replacement);
}

}  // namespace painseq
