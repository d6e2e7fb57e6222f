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

// Dataset index: UTF-8 CSV with the header
//   sample_id,participant_id,label,split,path
// Labels are 0/1/2 (NoPain/LowPain/HighPain); split is train, validation or
// test; relative paths resolve against the manifest's directory.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "painseq/labels.hpp"

namespace painseq::data {

enum class Split { kTrain, kValidation, kTest };

std::string_view split_name(Split s);
// InvalidInputError for anything other than train/validation/test.
Split parse_split(std::string_view text);

struct ManifestEntry {
  std::string sample_id;
  std::string participant_id;
  Label label = Label::kNoPain;
  Split split = Split::kTrain;
  std::filesystem::path path;
};

struct Manifest {
  std::vector<ManifestEntry> entries;
  std::filesystem::path base_dir;

  std::filesystem::path resolve(const ManifestEntry& e) const;
  std::vector<ManifestEntry> in_split(Split s) const;

  // Unique sample ids and subject-independent splits.
  void validate() const;
};

Manifest parse_manifest(std::string_view csv, const std::filesystem::path& base_dir,
                        const std::string& source = "manifest");
// Parses, validates and (optionally) checks every path exists.
Manifest load_manifest(const std::filesystem::path& path, bool check_paths = true);

std::string manifest_to_csv(const Manifest& manifest);
void write_manifest(const Manifest& manifest, const std::filesystem::path& path);

}  // namespace painseq::data
