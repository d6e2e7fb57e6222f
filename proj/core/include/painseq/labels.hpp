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
#include <cstddef>
#include <string>
#include <string_view>

namespace painseq {

inline constexpr std::size_t kNumClasses = 3;

enum class Label : int { kNoPain = 0, kLowPain = 1, kHighPain = 2 };

inline constexpr std::array<Label, kNumClasses> kAllLabels = {Label::kNoPain, Label::kLowPain,
                                                              Label::kHighPain};

inline constexpr int to_index(Label l) { return static_cast<int>(l); }

// Throws InvalidLabelError outside {0, 1, 2}.
Label label_from_index(long long index);

// Accepts "0"/"1"/"2" or the names NoPain/LowPain/HighPain.
Label parse_label(std::string_view text);

// "NoPain", "LowPain", "HighPain".
std::string_view label_name(Label l);

}  // namespace painseq
