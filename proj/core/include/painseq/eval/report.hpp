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
#include <string>
#include <string_view>
#include <vector>

#include "painseq/eval/metrics.hpp"

namespace painseq::eval {

enum class ReportFormat { kText, kCsv, kJson };

ReportFormat parse_report_format(std::string_view name);
std::string_view to_string(ReportFormat f);

// Text: a grid table with Precision / Recall / F1-score groups (No-Pain, Low,
// High, Avg. each) and an Accuracy column, values to 2 decimals; when no
// report has per-class detail only Models | Accuracy is shown.
// CSV: model,split,class,precision,recall,f1,accuracy with four rows per
// report (NoPain, LowPain, HighPain, Avg); missing values are empty cells.
// JSON: {"rows": [...]} with the CSV fields, missing values null.
// CSV and JSON print doubles in shortest round-trip form.
std::string render_report(std::span<const EvalReport> reports, ReportFormat format);

// Inverses of the CSV and JSON renderings (confusion matrices and degenerate
// flags are not carried). FormatError on malformed input.
std::vector<EvalReport> parse_report_csv(std::string_view text);
std::vector<EvalReport> parse_report_json(std::string_view text);

}  // namespace painseq::eval
