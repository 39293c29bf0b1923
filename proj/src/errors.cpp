#include "modalq/errors.hpp"

namespace modalq {

namespace {

std::string position_prefix(SourcePos pos) {
  return std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": ";
}

std::string syntax_message(SourcePos pos, const std::string& found, const std::vector<std::string>& expected) {
  std::string msg = position_prefix(pos) + "syntax error: unexpected " + found;
  if (!expected.empty()) {
    msg += ", expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) msg += i + 1 == expected.size() ? " or " : ", ";
      msg += expected[i];
    }
  }
  return msg;
}

}  // namespace

SyntaxError::SyntaxError(SourcePos pos, std::string found, std::vector<std::string> expected)
    : Error(syntax_message(pos, found, expected)),
      pos_(pos),
      found_(std::move(found)),
      expected_(std::move(expected)) {}

KindError::KindError(SourcePos pos, const std::string& what)
    : Error(position_prefix(pos) + "kind error: " + what), pos_(pos) {}

DegreeError::DegreeError(std::string node, std::size_t expected, std::size_t found)
    : Error("degree error in " + node + ": expected " + std::to_string(expected) + ", found " +
            std::to_string(found)),
      node_(std::move(node)),
      expected_(expected),
      found_(found) {}

}  // namespace modalq
