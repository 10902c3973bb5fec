// Copyright 2026 The nveng authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NV_CONFIG_HPP
#define NV_CONFIG_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nv {

// Parse/validation failure with enough context to act on: 1-based line (0 if
// the error is semantic rather than syntactic) and the offending field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string message, int line, std::string field)
      : std::runtime_error(render(message, line, field)),
        line_(line),
        field_(std::move(field)) {}
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  static std::string render(const std::string& message, int line,
                            const std::string& field);
  int line_;
  std::string field_;
};

// Flat key-value view of an INI-style file: sections in brackets, "key =
// value" pairs, '#' or ';' comments.  Keys are stored as "section.key";
// top-of-file pairs before any section get no prefix.  Values keep their raw
// text; typed access converts on demand with field-level diagnostics.
class Config {
 public:
  Config() = default;

  static Config parse_text(const std::string& text);
  static Config load(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  // Required variants: throw ConfigError when the key is missing.
  std::string require_string(const std::string& key) const;
  double require_double(const std::string& key) const;

  void set(const std::string& key, const std::string& value);

  const std::map<std::string, std::string>& entries() const { return values_; }

  // Canonical INI rendering of the current (resolved) state, sorted by
  // section and key; parsing the result reproduces the same entries.
  std::string to_text() const;

 private:
  double parse_double(const std::string& key, const std::string& raw) const;
  std::map<std::string, std::string> values_;
  std::map<std::string, int> lines_;  // provenance for diagnostics
};

}  // namespace nv

#endif  // NV_CONFIG_HPP
