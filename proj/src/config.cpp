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

#include "nv/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace nv {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

std::string ConfigError::render(const std::string& message, int line,
                                const std::string& field) {
  std::ostringstream os;
  os << "config error";
  if (line > 0) os << " (line " << line << ")";
  if (!field.empty()) os << " [field: " << field << "]";
  os << ": " << message;
  return os.str();
}

Config Config::parse_text(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw ConfigError("unterminated section header '" + t + "'", lineno,
                          "");
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty())
        throw ConfigError("empty section name", lineno, "");
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected 'key = value', got '" + t + "'", lineno, "");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", lineno, "");
    const std::string full = section.empty() ? key : section + "." + key;
    if (cfg.values_.count(full))
      throw ConfigError("duplicate key '" + full + "'", lineno, full);
    cfg.values_[full] = value;
    cfg.lines_[full] = lineno;
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file: " + path, 0, "");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_text(buffer.str());
}

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::string Config::require_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end())
    throw ConfigError("missing required key", 0, key);
  return it->second;
}

double Config::parse_double(const std::string& key,
                            const std::string& raw) const {
  try {
    std::size_t pos = 0;
    const double v = std::stod(raw, &pos);
    if (pos != raw.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    const auto lit = lines_.find(key);
    throw ConfigError("cannot parse '" + raw + "' as a number",
                      lit == lines_.end() ? 0 : lit->second, key);
  }
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  return parse_double(key, it->second);
}

double Config::require_double(const std::string& key) const {
  return parse_double(key, require_string(key));
}

int Config::get_int(const std::string& key, int fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    std::size_t pos = 0;
    const int v = std::stoi(it->second, &pos);
    if (pos != it->second.size())
      throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    const auto lit = lines_.find(key);
    throw ConfigError("cannot parse '" + it->second + "' as an integer",
                      lit == lines_.end() ? 0 : lit->second, key);
  }
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::string v = it->second;
  std::transform(v.begin(), v.end(), v.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  const auto lit = lines_.find(key);
  throw ConfigError("cannot parse '" + it->second + "' as a boolean",
                    lit == lines_.end() ? 0 : lit->second, key);
}

void Config::set(const std::string& key, const std::string& value) {
  values_[key] = value;
}

std::string Config::to_text() const {
  // Section-less keys must come first: on re-parse anything after a section
  // header inherits that section.
  std::ostringstream os;
  for (const auto& [full, value] : values_)
    if (full.find('.') == std::string::npos)
      os << full << " = " << value << '\n';
  std::string current_section;
  for (const auto& [full, value] : values_) {
    const auto dot = full.find('.');
    if (dot == std::string::npos) continue;
    const std::string section = full.substr(0, dot);
    if (section != current_section) {
      os << '[' << section << "]\n";
      current_section = section;
    }
    os << full.substr(dot + 1) << " = " << value << '\n';
  }
  return os.str();
}

}  // namespace nv
