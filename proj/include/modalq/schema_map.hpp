#pragma once

// Derives the four-relation database image of a Kripke model:
//
//   Sta  one row per state; column k holds the value of the k-th concept
//   Rel  <source id, target id, relation name> per accessibility edge
//   Con  the concept names
//   Obj  the objects

#include <map>
#include <set>
#include <string>
#include <vector>

#include "modalq/kripke.hpp"
#include "modalq/relalg.hpp"

namespace modalq::schema {

inline constexpr const char* kSta = "Sta";
inline constexpr const char* kRel = "Rel";
inline constexpr const char* kCon = "Con";
inline constexpr const char* kObj = "Obj";

// Bijection from concept names onto 1..n. "id" is always 1; the rest follow
// in ascending name order.
class ConceptIndex {
 public:
  explicit ConceptIndex(const std::vector<std::string>& concepts);

  // Throws UnknownConstant.
  std::size_t operator[](const std::string& concept_name) const;
  bool contains(const std::string& concept_name) const { return index_.contains(concept_name); }
  std::size_t size() const { return order_.size(); }
  // Concept names by column (position 0 is column 1).
  const std::vector<std::string>& columns() const { return order_; }

  bool operator==(const ConceptIndex&) const = default;

 private:
  std::map<std::string, std::size_t> index_;
  std::vector<std::string> order_;
};

ConceptIndex concept_index(const kripke::KripkeModel& model);

struct DatabaseInstance {
  relalg::Database tables;
  // Declared relation names: the domain of Rel's third column.
  std::set<std::string> type_codes;

  bool operator==(const DatabaseInstance&) const = default;
};

DatabaseInstance build_database(const kripke::KripkeModel& model);

enum class ViolationKind {
  StaValueNotInObj,   // a Sta cell holds a value missing from Obj
  StaEmpty,           // no states
  StaKeyViolation,    // Sta column 1 does not identify rows
  RelUnknownState,    // Rel source/target missing from Sta column 1
  RelUnknownType,     // Rel type code is not a declared relation name
  SchemaDegree,       // a table is missing or has the wrong degree
};

struct Violation {
  ViolationKind kind;
  std::string message;
};

std::string to_string(ViolationKind kind);

// Empty iff the instance satisfies the structural lemmas and constraints of a
// mapped model.
std::vector<Violation> validate_instance(const DatabaseInstance& db);

// Rebuilds a model from its database image (state handles follow Sta order).
kripke::KripkeModel model_from_database(const DatabaseInstance& db);

}  // namespace modalq::schema
