#pragma once

// JSON model files:
//
//   {
//     "objects":   ["1", "2", "3", "4", "a", "b", "c", "d"],
//     "concepts":  ["id", "code"],
//     "states":    [{"id": "1", "code": "d"}, ...],
//     "relations": {"COMP": [["1", "2"], ["1", "3"], ["1", "4"]]}
//   }
//
// Values may be written as JSON strings or integers; integers are read as
// their decimal text. Edges name states by their id value.

#include <filesystem>
#include <string>
#include <string_view>

#include "modalq/errors.hpp"
#include "modalq/kripke.hpp"

namespace modalq::kripke {

class ModelFormatError : public Error {
 public:
  using Error::Error;
};

// Throws ModelFormatError for malformed documents, ModelInvariantError for
// well-formed documents describing an invalid model.
KripkeModel parse_model(std::string_view json_text);
KripkeModel load_model(const std::filesystem::path& path);

// Canonical form: keys in the order above, states in handle order, edges
// sorted, two-space indentation.
std::string model_to_json(const KripkeModel& model);

}  // namespace modalq::kripke
