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

#include "painseq/io/key_value.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "painseq/errors.hpp"

namespace painseq::io {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::string_view text, std::string source) {
  KeyValueConfig cfg;
  cfg.source_ = std::move(source);
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    const auto line = trim(text.substr(pos, end - pos));
    ++line_no;
    pos = end + 1;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(cfg.source_ + ":" + std::to_string(line_no) +
                        ": expected \"key = value\", got \"" + std::string(line) + "\"");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(cfg.source_ + ":" + std::to_string(line_no) + ": empty key");
    }
    auto [it, inserted] = cfg.values_.emplace(std::string(key), Item{std::string(value), line_no});
    if (!inserted) {
      throw ConfigError(cfg.source_ + ":" + std::to_string(line_no) + ": duplicate key \"" +
                        std::string(key) + "\" (first set on line " +
                        std::to_string(it->second.line) + ")");
    }
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

std::optional<std::string> KeyValueConfig::get(std::string_view key) const {
  auto it = values_.find(std::string(key));
  if (it == values_.end()) return std::nullopt;
  return it->second.value;
}

void KeyValueConfig::fail(std::string_view key, const std::string& message) const {
  auto it = values_.find(std::string(key));
  const std::size_t line = it == values_.end() ? 0 : it->second.line;
  throw ConfigError(source_ + ":" + std::to_string(line) + ": " + std::string(key) + ": " +
                    message);
}

std::string KeyValueConfig::get_string(std::string_view key, std::string fallback) const {
  auto v = get(key);
  return v ? *v : std::move(fallback);
}

double KeyValueConfig::get_double(std::string_view key, double fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  double out = 0.0;
  const auto* first = v->data();
  const auto* last = v->data() + v->size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) fail(key, "expected a number, got \"" + *v + "\"");
  return out;
}

std::uint64_t KeyValueConfig::get_uint(std::string_view key, std::uint64_t fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  std::uint64_t out = 0;
  const auto* first = v->data();
  const auto* last = v->data() + v->size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) {
    fail(key, "expected a non-negative integer, got \"" + *v + "\"");
  }
  return out;
}

bool KeyValueConfig::get_bool(std::string_view key, bool fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  fail(key, "expected true or false, got \"" + *v + "\"");
}

void KeyValueConfig::reject_unknown(std::initializer_list<std::string_view> allowed) const {
  for (const auto& [key, item] : values_) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(source_ + ":" + std::to_string(item.line) + ": unknown key \"" + key +
                        "\"");
    }
  }
}

}  // namespace painseq::io
