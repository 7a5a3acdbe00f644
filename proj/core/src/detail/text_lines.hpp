#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "catlab/error.hpp"
#include "catlab/format.hpp"

namespace catlab::detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

// Calls fn(line_number, line) for every non-blank, non-comment line.
template <class Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    fn(line_no, line);
  }
}

[[noreturn]] inline void parse_fail(std::size_t line_no, const std::string& what) {
  raise(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + what);
}

inline double number(std::size_t line_no, std::string_view tok) {
  double v;
  if (!parse_double(tok, v)) parse_fail(line_no, "malformed number '" + std::string(tok) + "'");
  return v;
}

template <class Int>
Int integer(std::size_t line_no, std::string_view tok) {
  Int v;
  if (!parse_int(tok, v)) parse_fail(line_no, "malformed integer '" + std::string(tok) + "'");
  return v;
}

}  // namespace catlab::detail
