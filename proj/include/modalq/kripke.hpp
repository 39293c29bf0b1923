#pragma once

// Finite first-order modal models over augmented frames, and the direct
// (model-theoretic) query evaluator.

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "modalq/relalg.hpp"
#include "modalq/syntax.hpp"

namespace modalq::kripke {

using StateHandle = std::size_t;

// Name of the concept whose values identify states.
inline constexpr const char* kIdConcept = "id";

// One record per state: concept name -> object value.
using StateRecord = std::map<std::string, std::string>;
// relation name -> (source id, target id) pairs
using EdgeList = std::map<std::string, std::vector<std::pair<std::string, std::string>>>;

// Immutable after construction. create() enforces every model invariant, so a
// KripkeModel value is always well formed:
//   * at least one state, one object and one relation name;
//   * a concept named "id" whose values are pairwise distinct;
//   * every concept is defined at every state and takes values in objects.
// Object constants are the objects themselves (unique names).
class KripkeModel {
 public:
  // Throws ModelInvariantError.
  static KripkeModel create(std::vector<std::string> objects, std::vector<std::string> concepts,
                            std::vector<StateRecord> states, const EdgeList& relations);

  // Sorted, distinct.
  const std::vector<std::string>& objects() const { return objects_; }
  // Declaration order.
  const std::vector<std::string>& concepts() const { return concepts_; }
  // Sorted.
  std::vector<std::string> relation_names() const;

  std::size_t state_count() const { return values_.size(); }
  const std::string& value(StateHandle s, const std::string& concept_name) const;
  const std::string& id_of(StateHandle s) const { return value(s, kIdConcept); }
  // Throws ModelInvariantError for an unknown id.
  StateHandle state_with_id(const std::string& id) const;

  bool has_object(const std::string& o) const;
  bool has_concept(const std::string& c) const { return concept_pos_.contains(c); }
  bool has_relation(const std::string& r) const { return successors_.contains(r); }

  // Sorted by handle. Throws UnknownRelation.
  const std::vector<StateHandle>& successors(const std::string& relation, StateHandle s) const;
  // Every (source, target) pair of one relation, sorted.
  std::vector<std::pair<StateHandle, StateHandle>> edges(const std::string& relation) const;
  std::size_t edge_count() const;

  std::vector<StateRecord> state_records() const;
  EdgeList edge_list() const;

  bool operator==(const KripkeModel&) const = default;

 private:
  KripkeModel() = default;

  std::vector<std::string> objects_;
  std::vector<std::string> concepts_;
  std::map<std::string, std::size_t> concept_pos_;
  std::vector<std::vector<std::string>> values_;  // [state][concept position]
  std::map<std::string, StateHandle> by_id_;
  std::map<std::string, std::vector<std::vector<StateHandle>>> successors_;  // [relation][state]
};

// Object variables map to objects; concept variables map to concept names.
class Assignment {
 public:
  Assignment() = default;
  Assignment(std::initializer_list<std::pair<const syntax::Variable, std::string>> init) : values_(init) {}

  Assignment with(const syntax::Variable& v, std::string value) const;
  const std::string* find(const syntax::Variable& v) const;
  const std::map<syntax::Variable, std::string>& values() const { return values_; }

 private:
  std::map<syntax::Variable, std::string> values_;
};

// Value of t at state: an object for object terms, a concept name for concept
// terms. Throws UnknownConstant or UnboundVariable.
std::string term_eval(const KripkeModel& model, const Assignment& v, const syntax::Term& t, StateHandle state);

// Truth of f at state under v. Throws UnknownRelation, UnknownConstant,
// UnboundVariable.
bool satisfies(const KripkeModel& model, StateHandle state, const Assignment& v, const syntax::Formula& f);

// Every <d1, ..., dn, id(state)> such that the formula holds at state under
// targets[i] := di, over all states and all kind-respecting assignments.
relalg::Relation answer_direct(const KripkeModel& model, const syntax::ModalQuery& q);

}  // namespace modalq::kripke
