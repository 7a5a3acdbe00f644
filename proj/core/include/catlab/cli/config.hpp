#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace catlab::cli {

/// key = value configuration with [section] headers. Keys inside a section
/// are addressed as "section.key". '#' and ';' start comments.
class Config {
 public:
  /// Throws ConfigError with "line L, column C: ..." on malformed input or
  /// duplicate keys.
  static Config parse(std::string_view text);
  static Config load(const std::filesystem::path& path);

  /// Canonical text: top-level keys first, then sections in name order, keys
  /// sorted, one blank line between sections. parse(normalized()) reproduces
  /// the same normalized text.
  std::string normalized() const;

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }
  void set(const std::string& key, std::string value);

  // Typed getters return the default when the key is absent and throw
  // ConfigError pointing at the value otherwise.
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  /// Whitespace- or comma-separated numbers.
  std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;

  /// Throws ConfigError naming the first key not in `known`.
  void require_known(const std::vector<std::string>& known) const;

  [[noreturn]] void fail(const std::string& key, const std::string& message) const;

 private:
  struct Location {
    std::size_t line = 0;
    std::size_t key_column = 0;
    std::size_t column = 0;  // of the value
  };

  std::map<std::string, std::string> entries_;
  std::map<std::string, Location> locations_;  // of the value text
};

}  // namespace catlab::cli
