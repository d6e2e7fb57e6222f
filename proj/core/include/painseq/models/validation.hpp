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

#include <span>

#include "painseq/data/dataset.hpp"
#include "painseq/models/lstm_model.hpp"
#include "painseq/models/simple_ann.hpp"
#include "painseq/models/train.hpp"

namespace painseq::models {

// Unweighted cross-entropy averaged over frames; accuracy of the per-video
// majority vote.
template <typename T>
Validation validate_ann(const SimpleAnn<T>& model, std::span<const data::LabeledSequence> videos);

// Unweighted cross-entropy and accuracy over sequences.
template <typename T>
Validation validate_lstm(const LstmModel<T>& model,
                         std::span<const data::LabeledSequence> sequences);

}  // namespace painseq::models
