#pragma once

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "varpen/errors.hpp"

namespace varpen::detail {

inline std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

/// Calls `fn(line_number, tokens)` for every non-empty line with comments
/// stripped.
template <class Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tokens = split_tokens(line);
    if (!tokens.empty()) fn(line_no, tokens);
  }
}

class LineError {
 public:
  explicit LineError(std::size_t line) : prefix_("line " + std::to_string(line) + ": ") {}

  [[noreturn]] void syntax(const std::string& msg) const {
    throw Error(ErrorKind::ParseError, prefix_ + msg);
  }
  [[noreturn]] void invalid(const std::string& msg) const {
    throw Error(ErrorKind::ValidationError, prefix_ + msg);
  }
  [[noreturn]] void rethrow(const Error& e) const { throw Error(e.kind(), prefix_ + e.what()); }

 private:
  std::string prefix_;
};

}  // namespace varpen::detail
