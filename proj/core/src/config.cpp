#include "catlab/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "catlab/error.hpp"
#include "catlab/format.hpp"

namespace catlab::cli {

namespace {

[[noreturn]] void config_error(std::size_t line, std::size_t column, const std::string& what) {
  raise(ErrorCode::ConfigError, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what);
}

bool key_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-' ||
         c == '.';
}

std::size_t skip_ws(std::string_view s, std::size_t i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  return i;
}

}  // namespace

Config Config::parse(std::string_view text) {
  Config cfg;
  std::string section;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (const auto c = line.find_first_of("#;"); c != std::string_view::npos) line = line.substr(0, c);
    std::size_t i = skip_ws(line, 0);
    if (i == line.size()) continue;
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.remove_suffix(1);

    if (line[i] == '[') {
      const std::size_t close = line.find(']', i);
      if (close == std::string_view::npos) config_error(line_no, i + 1, "missing ']'");
      if (skip_ws(line, close + 1) != line.size()) config_error(line_no, close + 2, "text after section header");
      const std::string_view name = line.substr(i + 1, close - i - 1);
      if (name.empty()) config_error(line_no, i + 2, "empty section name");
      for (std::size_t k = 0; k < name.size(); ++k) {
        if (!key_char(name[k]) || name[k] == '.') config_error(line_no, i + 2 + k, "invalid character in section name");
      }
      section = std::string(name);
      continue;
    }

    const std::size_t key_start = i;
    while (i < line.size() && key_char(line[i])) ++i;
    if (i == key_start) config_error(line_no, i + 1, "expected a key");
    const std::string_view key = line.substr(key_start, i - key_start);
    i = skip_ws(line, i);
    if (i >= line.size() || line[i] != '=') config_error(line_no, i + 1, "expected '='");
    i = skip_ws(line, i + 1);
    if (i >= line.size()) config_error(line_no, i + 1, "missing value");
    const std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
    if (cfg.entries_.count(full)) config_error(line_no, key_start + 1, "duplicate key '" + full + "'");
    cfg.entries_[full] = std::string(line.substr(i));
    cfg.locations_[full] = {line_no, key_start + 1, i + 1};
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::ConfigError, "cannot open config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string Config::normalized() const {
  std::string top, rest, current;
  for (const auto& [key, value] : entries_) {
    const auto dot = key.find('.');
    if (dot == std::string::npos) {
      top += key + " = " + value + "\n";
      continue;
    }
    const std::string sec = key.substr(0, dot);
    if (sec != current) {
      if (!rest.empty() || !top.empty()) rest += "\n";
      rest += "[" + sec + "]\n";
      current = sec;
    }
    rest += key.substr(dot + 1) + " = " + value + "\n";
  }
  return top + rest;
}

void Config::set(const std::string& key, std::string value) {
  entries_[key] = std::move(value);
  locations_.erase(key);
}

void Config::fail(const std::string& key, const std::string& message) const {
  const auto it = locations_.find(key);
  if (it == locations_.end()) raise(ErrorCode::ConfigError, key + ": " + message);
  config_error(it->second.line, it->second.column, key + ": " + message);
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  double v;
  if (!parse_double(it->second, v) || !std::isfinite(v)) fail(key, "expected a number, got '" + it->second + "'");
  return v;
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  std::int64_t v;
  if (!parse_int(it->second, v)) fail(key, "expected an integer, got '" + it->second + "'");
  return v;
}

std::uint64_t Config::get_uint(const std::string& key, std::uint64_t fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  std::uint64_t v;
  if (!parse_int(it->second, v)) fail(key, "expected a nonnegative integer, got '" + it->second + "'");
  return v;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  if (it->second == "true" || it->second == "yes" || it->second == "1") return true;
  if (it->second == "false" || it->second == "no" || it->second == "0") return false;
  fail(key, "expected true or false, got '" + it->second + "'");
}

std::vector<double> Config::get_list(const std::string& key, const std::vector<double>& fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  std::vector<double> out;
  std::string_view s = it->second;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == ',')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != ',') ++i;
    if (i == start) break;
    double v;
    if (!parse_double(s.substr(start, i - start), v)) {
      fail(key, "malformed list entry '" + std::string(s.substr(start, i - start)) + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) fail(key, "empty list");
  return out;
}

void Config::require_known(const std::vector<std::string>& known) const {
  for (const auto& [key, value] : entries_) {
    if (std::find(known.begin(), known.end(), key) != known.end()) continue;
    const auto it = locations_.find(key);
    if (it == locations_.end()) raise(ErrorCode::ConfigError, "unknown key '" + key + "'");
    config_error(it->second.line, it->second.key_column, "unknown key '" + key + "'");
  }
}

}  // namespace catlab::cli
