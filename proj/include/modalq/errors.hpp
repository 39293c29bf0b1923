#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace modalq {

// Base of every error the library raises. Each subclass maps onto one CLI
// exit-code class (see cli.hpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SourcePos {
  std::size_t line = 1;
  std::size_t column = 1;
};

class SyntaxError : public Error {
 public:
  SyntaxError(SourcePos pos, std::string found, std::vector<std::string> expected);

  SourcePos position() const { return pos_; }
  const std::string& found() const { return found_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  SourcePos pos_;
  std::string found_;
  std::vector<std::string> expected_;
};

class KindError : public Error {
 public:
  KindError(SourcePos pos, const std::string& what);
  SourcePos position() const { return pos_; }

 private:
  SourcePos pos_;
};

class FreeVarMismatch : public Error {
 public:
  using Error::Error;
};

class ModelInvariantError : public Error {
 public:
  using Error::Error;
};

class UnknownConstant : public Error {
 public:
  using Error::Error;
};

class UnboundVariable : public Error {
 public:
  using Error::Error;
};

class UnknownRelation : public Error {
 public:
  using Error::Error;
};

class UnknownVariable : public Error {
 public:
  using Error::Error;
};

class UntranslatableTerm : public Error {
 public:
  using Error::Error;
};

class DegreeError : public Error {
 public:
  DegreeError(std::string node, std::size_t expected, std::size_t found);

  const std::string& node() const { return node_; }
  std::size_t expected() const { return expected_; }
  std::size_t found() const { return found_; }

 private:
  std::string node_;
  std::size_t expected_;
  std::size_t found_;
};

}  // namespace modalq
