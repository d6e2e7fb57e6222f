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

#include "painseq/data/manifest.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "painseq/errors.hpp"

namespace painseq::data {
namespace {

constexpr std::string_view kHeader = "sample_id,participant_id,label,split,path";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    out.push_back(trim(line.substr(pos, comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

std::string_view split_name(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kValidation: return "validation";
    case Split::kTest: return "test";
  }
  return "?";
}

Split parse_split(std::string_view text) {
  if (text == "train") return Split::kTrain;
  if (text == "validation") return Split::kValidation;
  if (text == "test") return Split::kTest;
  throw InvalidInputError("unknown split \"" + std::string(text) + "\"");
}

std::filesystem::path Manifest::resolve(const ManifestEntry& e) const {
  return e.path.is_absolute() ? e.path : base_dir / e.path;
}

std::vector<ManifestEntry> Manifest::in_split(Split s) const {
  std::vector<ManifestEntry> out;
  for (const auto& e : entries) {
    if (e.split == s) out.push_back(e);
  }
  return out;
}

void Manifest::validate() const {
  std::set<std::string> ids;
  std::map<std::string, Split> home;
  for (const auto& e : entries) {
    if (!ids.insert(e.sample_id).second) {
      throw InvalidInputError("duplicate sample_id \"" + e.sample_id + "\"");
    }
    auto [it, inserted] = home.emplace(e.participant_id, e.split);
    if (!inserted && it->second != e.split) {
      throw SplitLeakError("participant \"" + e.participant_id + "\" appears in both " +
                           std::string(split_name(it->second)) + " and " +
                           std::string(split_name(e.split)) + " splits");
    }
  }
}

Manifest parse_manifest(std::string_view csv, const std::filesystem::path& base_dir,
                        const std::string& source) {
  Manifest m;
  m.base_dir = base_dir;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool saw_header = false;
  while (pos < csv.size()) {
    const auto end = std::min(csv.find('\n', pos), csv.size());
    const auto line = trim(csv.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no) + ": ";
    if (!saw_header) {
      if (line != kHeader) {
        throw FormatError(where + "expected header \"" + std::string(kHeader) + "\"", line_no);
      }
      saw_header = true;
      continue;
    }
    const auto f = split_fields(line);
    if (f.size() != 5) {
      throw FormatError(where + "expected 5 fields, got " + std::to_string(f.size()), line_no);
    }
    ManifestEntry e;
    e.sample_id = std::string(f[0]);
    e.participant_id = std::string(f[1]);
    if (e.sample_id.empty() || e.participant_id.empty() || f[4].empty()) {
      throw FormatError(where + "empty sample_id, participant_id or path", line_no);
    }
    try {
      e.label = parse_label(f[2]);
    } catch (const InvalidLabelError& err) {
      throw InvalidLabelError(where + err.what());
    }
    try {
      e.split = parse_split(f[3]);
    } catch (const InvalidInputError& err) {
      throw FormatError(where + err.what(), line_no);
    }
    e.path = std::filesystem::path(std::string(f[4]));
    m.entries.push_back(std::move(e));
  }
  if (!saw_header) throw FormatError(source + ": empty manifest", 0);
  m.validate();
  return m;
}

Manifest load_manifest(const std::filesystem::path& path, bool check_paths) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open manifest " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  Manifest m = parse_manifest(ss.str(), path.parent_path(), path.string());
  if (check_paths) {
    for (const auto& e : m.entries) {
      if (!std::filesystem::exists(m.resolve(e))) {
        throw InvalidInputError("manifest entry \"" + e.sample_id + "\" points to missing file " +
                                m.resolve(e).string());
      }
    }
  }
  return m;
}

std::string manifest_to_csv(const Manifest& manifest) {
  std::ostringstream os;
  os << kHeader << '\n';
  for (const auto& e : manifest.entries) {
    os << e.sample_id << ',' << e.participant_id << ',' << to_index(e.label) << ','
       << split_name(e.split) << ',' << e.path.generic_string() << '\n';
  }
  return os.str();
}

void write_manifest(const Manifest& manifest, const std::filesystem::path& path) {
  manifest.validate();
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw InvalidInputError("cannot write " + path.string());
  out << manifest_to_csv(manifest);
}

}  // namespace painseq::data
