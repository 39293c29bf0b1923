#pragma once

// Command-line front end. Exit codes:
//   0  success
//   1  usage error
//   2  query parse or kind error (also unknown names in the query)
//   3  model file unreadable, malformed or violating a model invariant
//   4  query has no algebra translation
//   5  the two engines disagree

#include <ostream>
#include <string>
#include <vector>

namespace modalq::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kQueryError = 2,
  kModelError = 3,
  kUntranslatable = 4,
  kMismatch = 5,
};

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace modalq::cli
