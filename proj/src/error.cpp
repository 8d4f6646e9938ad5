#include "aft/error.hpp"

namespace aft {

namespace {

std::string join_violations(const std::vector<std::string>& v) {
  std::string out = "validation failed";
  for (const auto& s : v) out += "\n  - " + s;
  return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : Error(join_violations(violations)), violations_(std::move(violations)) {}

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
            message),
      line_(line),
      column_(column) {}

}  // namespace aft
