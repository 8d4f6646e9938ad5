#pragma once

// Small string helpers shared by the text parsers. Not installed.

#include <string>
#include <string_view>
#include <vector>

namespace aft::detail {

inline std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

/// Splits on any of `seps`, dropping empty pieces.
inline std::vector<std::string_view> split_any(std::string_view s, std::string_view seps) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto pos = s.find_first_of(seps, start);
    const auto piece = s.substr(start, pos == std::string_view::npos ? s.npos : pos - start);
    if (!piece.empty()) out.push_back(piece);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

/// Splits on top-level commas, ignoring commas nested in () or [].
/// Pieces are trimmed; empty pieces are kept so callers can report them.
inline std::vector<std::string_view> split_top_level(std::string_view s) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  out.push_back(trim(s.substr(start)));
  return out;
}

/// Splits `name(args)` into name and the raw argument text; args empty when
/// there are no parentheses. Returns false on unbalanced input.
inline bool split_call(std::string_view s, std::string_view& name, std::string_view& args) {
  s = trim(s);
  const auto open = s.find('(');
  if (open == std::string_view::npos) {
    name = s;
    args = {};
    return s.find(')') == std::string_view::npos;
  }
  if (s.back() != ')') return false;
  name = trim(s.substr(0, open));
  args = trim(s.substr(open + 1, s.size() - open - 2));
  return true;
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

}  // namespace aft::detail
