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

// "key = value" configuration files. Blank lines and lines starting with '#'
// are ignored. Every error message carries "<source>:<line>".

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace painseq::io {

class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::string_view text, std::string source = "<config>");
  // Throws InvalidInputError if the file cannot be opened.
  static KeyValueConfig load(const std::filesystem::path& path);

  bool has(std::string_view key) const { return values_.count(std::string(key)) != 0; }
  std::optional<std::string> get(std::string_view key) const;

  std::string get_string(std::string_view key, std::string fallback) const;
  double get_double(std::string_view key, double fallback) const;
  std::uint64_t get_uint(std::string_view key, std::uint64_t fallback) const;
  bool get_bool(std::string_view key, bool fallback) const;

  // ConfigError on the first key not in `allowed`.
  void reject_unknown(std::initializer_list<std::string_view> allowed) const;

  // ConfigError located at the line that defined `key`.
  [[noreturn]] void fail(std::string_view key, const std::string& message) const;

  const std::string& source() const { return source_; }

 private:
  struct Item {
    std::string value;
    std::size_t line = 0;
  };
  std::map<std::string, Item> values_;
  std::string source_;
};

}  // namespace painseq::io
