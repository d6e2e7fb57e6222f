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

#include "painseq/labels.hpp"

#include <string>

#include "painseq/errors.hpp"

namespace painseq {

Label label_from_index(long long index) {
  if (index < 0 || index >= static_cast<long long>(kNumClasses)) {
    throw InvalidLabelError("label " + std::to_string(index) + " is outside {0, 1, 2}");
  }
  return static_cast<Label>(index);
}

Label parse_label(std::string_view text) {
  if (text == "0" || text == "NoPain") return Label::kNoPain;
  if (text == "1" || text == "LowPain") return Label::kLowPain;
  if (text == "2" || text == "HighPain") return Label::kHighPain;
  throw InvalidLabelError("unknown label \"" + std::string(text) + "\"");
}

std::string_view label_name(Label l) {
  switch (l) {
    case Label::kNoPain: return "NoPain";
    case Label::kLowPain: return "LowPain";
    case Label::kHighPain: return "HighPain";
  }
  return "?";
}

}  // namespace painseq
