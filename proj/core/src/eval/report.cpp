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

#include "painseq/eval/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <map>
#include <optional>
#include <sstream>

#include "json.hpp"

#include "painseq/errors.hpp"

namespace painseq::eval {
namespace {

constexpr std::array<std::string_view, 4> kCsvClasses = {"NoPain", "LowPain", "HighPain", "Avg"};
constexpr std::array<std::string_view, 4> kTextClasses = {"No-Pain", "Low", "High", "Avg."};
constexpr std::array<std::string_view, 3> kGroups = {"Precision", "Recall", "F1-score"};
constexpr std::size_t kCell = 7;
constexpr std::string_view kAccuracy = "Accuracy";

using Cells = std::array<std::optional<double>, 3>;  // precision, recall, f1

// Metric cells of row k (0..2 classes, 3 = macro).
Cells cells_of(const EvalReport& r, std::size_t k) {
  const std::optional<ClassMetrics> m =
      k < kNumClasses ? (r.per_class ? std::optional((*r.per_class)[k]) : std::nullopt)
                      : r.macro;
  if (!m) return {};
  return {m->precision, m->recall, m->f1};
}

std::string full(const std::optional<double>& v) { return v ? fmt::format("{}", *v) : ""; }

std::string pad_left(std::string_view s, std::size_t w) {
  return std::string(w > s.size() ? w - s.size() : 0, ' ') + std::string(s);
}
std::string pad_right(std::string_view s, std::size_t w) {
  return std::string(s) + std::string(w > s.size() ? w - s.size() : 0, ' ');
}
std::string center(std::string_view s, std::size_t w) {
  const std::size_t space = w > s.size() ? w - s.size() : 0;
  return std::string(space / 2, ' ') + std::string(s) + std::string(space - space / 2, ' ');
}

std::string render_text(std::span<const EvalReport> reports) {
  bool same_split = true;
  for (const auto& r : reports) same_split = same_split && r.split == reports.front().split;
  std::vector<std::string> names;
  for (const auto& r : reports) {
    names.push_back(same_split ? r.model : r.model + " [" + r.split + "]");
  }
  std::size_t name_w = std::string_view("Models").size();
  for (const auto& n : names) name_w = std::max(name_w, n.size());
  const bool detail =
      std::any_of(reports.begin(), reports.end(), [](const auto& r) { return r.has_class_detail(); });
  const auto two = [](const std::optional<double>& v) {
    return v ? fmt::format("{:.2f}", *v) : std::string();
  };

  std::ostringstream out;
  if (same_split) out << "Split: " << reports.front().split << "\n";
  const std::string name_rule(name_w + 2, '-');
  const std::string acc_rule(kAccuracy.size() + 2, '-');
  const std::string cell_rule(kCell + 2, '-');

  if (!detail) {
    const std::string rule = "+" + name_rule + "+" + acc_rule + "+\n";
    out << rule << "| " << pad_right("Models", name_w) << " | " << kAccuracy << " |\n" << rule;
    for (std::size_t i = 0; i < reports.size(); ++i) {
      out << "| " << pad_right(names[i], name_w) << " | "
          << pad_left(two(reports[i].accuracy), kAccuracy.size()) << " |\n";
    }
    out << rule;
    return out.str();
  }

  std::string group_rule;
  std::string cells_rule;
  for (std::size_t g = 0; g < kGroups.size(); ++g) {
    group_rule += std::string(4 * (kCell + 2) + 3, '-') + "+";
    for (std::size_t k = 0; k < 4; ++k) cells_rule += cell_rule + "+";
  }
  const std::string top = "+" + name_rule + "+" + group_rule + acc_rule + "+\n";
  const std::string mid = "+" + name_rule + "+" + cells_rule + acc_rule + "+\n";

  out << top << "| " << pad_right("Models", name_w) << " |";
  for (auto g : kGroups) out << center(g, 4 * (kCell + 2) + 3) << "|";
  out << " " << kAccuracy << " |\n";
  out << "| " << std::string(name_w, ' ') << " |";
  for (std::size_t g = 0; g < kGroups.size(); ++g) {
    for (auto c : kTextClasses) out << " " << pad_left(c, kCell) << " |";
  }
  out << " " << std::string(kAccuracy.size(), ' ') << " |\n" << mid;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    out << "| " << pad_right(names[i], name_w) << " |";
    for (std::size_t g = 0; g < kGroups.size(); ++g) {
      for (std::size_t k = 0; k < 4; ++k) {
        out << " " << pad_left(two(cells_of(reports[i], k)[g]), kCell) << " |";
      }
    }
    out << " " << pad_left(two(reports[i].accuracy), kAccuracy.size()) << " |\n";
  }
  out << mid;
  return out.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string render_csv(std::span<const EvalReport> reports) {
  std::string out = "model,split,class,precision,recall,f1,accuracy\n";
  for (const auto& r : reports) {
    for (std::size_t k = 0; k < 4; ++k) {
      const Cells c = cells_of(r, k);
      out += fmt::format("{},{},{},{},{},{},{}\n", csv_field(r.model), csv_field(r.split),
                         kCsvClasses[k], full(c[0]), full(c[1]), full(c[2]), full(r.accuracy));
    }
  }
  return out;
}

std::string render_json(std::span<const EvalReport> reports) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  const auto value = [](const std::optional<double>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
  };
  for (const auto& r : reports) {
    for (std::size_t k = 0; k < 4; ++k) {
      const Cells c = cells_of(r, k);
      nlohmann::ordered_json row;
      row["model"] = r.model;
      row["split"] = r.split;
      row["class"] = kCsvClasses[k];
      row["precision"] = value(c[0]);
      row["recall"] = value(c[1]);
      row["f1"] = value(c[2]);
      row["accuracy"] = value(r.accuracy);
      rows.push_back(std::move(row));
    }
  }
  nlohmann::ordered_json doc;
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

// One parsed row, shared by the CSV and JSON readers.
struct Row {
  std::string model;
  std::string split;
  std::string cls;
  Cells cells;
  std::optional<double> accuracy;
};

std::vector<EvalReport> assemble(const std::vector<Row>& rows, std::string_view what) {
  if (rows.size() % 4 != 0) {
    throw FormatError(std::string(what) + ": expected 4 rows per report, got " +
                          std::to_string(rows.size()) + " rows",
                      rows.size());
  }
  std::vector<EvalReport> out;
  for (std::size_t i = 0; i < rows.size(); i += 4) {
    EvalReport r;
    r.model = rows[i].model;
    r.split = rows[i].split;
    r.accuracy = rows[i].accuracy;
    std::array<ClassMetrics, kNumClasses> per{};
    bool any_class = false;
    for (std::size_t k = 0; k < 4; ++k) {
      const Row& row = rows[i + k];
      if (row.cls != kCsvClasses[k] || row.model != r.model || row.split != r.split) {
        throw FormatError(std::string(what) + ": row " + std::to_string(i + k + 1) +
                              " should be class " + std::string(kCsvClasses[k]) + " of '" +
                              r.model + "'",
                          i + k);
      }
      const bool present = row.cells[0] || row.cells[1] || row.cells[2];
      const ClassMetrics m{row.cells[0].value_or(0.0), row.cells[1].value_or(0.0),
                           row.cells[2].value_or(0.0)};
      if (k < kNumClasses) {
        any_class = any_class || present;
        per[k] = m;
      } else if (present) {
        r.macro = m;
      }
    }
    if (any_class) r.per_class = per;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) throw FormatError("report csv line " + std::to_string(line_no) + ": open quote", 0);
  return fields;
}

std::optional<double> parse_number(const std::string& s, std::size_t line_no) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw FormatError("report csv line " + std::to_string(line_no) + ": bad number '" + s + "'",
                      0);
  }
  return v;
}

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
  if (name == "text") return ReportFormat::kText;
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  throw ConfigError("unknown report format '" + std::string(name) + "' (text, csv, json)");
}

std::string_view to_string(ReportFormat f) {
  switch (f) {
    case ReportFormat::kText:
      return "text";
    case ReportFormat::kCsv:
      return "csv";
    case ReportFormat::kJson:
      return "json";
  }
  return "text";
}

std::string render_report(std::span<const EvalReport> reports, ReportFormat format) {
  if (reports.empty()) throw InvalidInputError("render_report needs at least one report");
  switch (format) {
    case ReportFormat::kText:
      return render_text(reports);
    case ReportFormat::kCsv:
      return render_csv(reports);
    case ReportFormat::kJson:
      return render_json(reports);
  }
  return {};
}

std::vector<EvalReport> parse_report_csv(std::string_view text) {
  std::vector<Row> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool header = true;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (header) {
      if (line != "model,split,class,precision,recall,f1,accuracy") {
        throw FormatError("report csv: unexpected header '" + std::string(line) + "'", 0);
      }
      header = false;
      continue;
    }
    const auto f = split_csv_line(line, line_no);
    if (f.size() != 7) {
      throw FormatError("report csv line " + std::to_string(line_no) + ": expected 7 fields, got " +
                            std::to_string(f.size()),
                        0);
    }
    rows.push_back({f[0], f[1], f[2],
                    {parse_number(f[3], line_no), parse_number(f[4], line_no),
                     parse_number(f[5], line_no)},
                    parse_number(f[6], line_no)});
  }
  if (header) throw FormatError("report csv: missing header", 0);
  return assemble(rows, "report csv");
}

std::vector<EvalReport> parse_report_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("report json: ") + e.what(), e.byte);
  }
  if (!doc.is_object() || !doc.contains("rows") || !doc["rows"].is_array()) {
    throw FormatError("report json: expected an object with a \"rows\" array", 0);
  }
  std::vector<Row> rows;
  const auto number = [](const nlohmann::json& v, const char* key) -> std::optional<double> {
    if (!v.contains(key) || v[key].is_null()) return std::nullopt;
    if (!v[key].is_number()) {
      throw FormatError(std::string("report json: field \"") + key + "\" is not a number", 0);
    }
    return v[key].get<double>();
  };
  for (const auto& v : doc["rows"]) {
    if (!v.is_object()) throw FormatError("report json: row is not an object", 0);
    try {
      rows.push_back({v.at("model").get<std::string>(), v.at("split").get<std::string>(),
                      v.at("class").get<std::string>(),
                      {number(v, "precision"), number(v, "recall"), number(v, "f1")},
                      number(v, "accuracy")});
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(std::string("report json: ") + e.what(), 0);
    }
  }
  return assemble(rows, "report json");
}

}  // namespace painseq::eval
