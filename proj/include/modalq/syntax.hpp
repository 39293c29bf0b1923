#pragma once

// Abstract syntax of the first-order modal query language: terms over object
// and concept symbols, equality atoms, classical connectives, indexed modal
// operators, quantifiers and predicate abstraction.

#include <compare>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace modalq::syntax {

enum class VarKind { Object, Concept };

struct Variable {
  std::string name;
  VarKind kind = VarKind::Object;

  auto operator<=>(const Variable&) const = default;
};

inline Variable object_var(std::string name) { return {std::move(name), VarKind::Object}; }
inline Variable concept_var(std::string name) { return {std::move(name), VarKind::Concept}; }

// Sigil form: ?x for object variables, %a for concept variables.
std::string to_string(const Variable& v);

struct ObjectConstant {
  std::string symbol;
  bool operator==(const ObjectConstant&) const = default;
};
struct ConceptConstant {
  std::string symbol;
  bool operator==(const ConceptConstant&) const = default;
};
struct ObjectVariable {
  std::string name;
  bool operator==(const ObjectVariable&) const = default;
};
struct ConceptVariable {
  std::string name;
  bool operator==(const ConceptVariable&) const = default;
};

// The object a concept denotes at the current state. Only concept terms can be
// relativized, and the result is an object term, so nesting is impossible.
struct Relativized {
  std::variant<ConceptConstant, ConceptVariable> inner;
  bool operator==(const Relativized&) const = default;
};

using Term = std::variant<ObjectConstant, ConceptConstant, ObjectVariable, ConceptVariable, Relativized>;

bool is_object_term(const Term& t);
bool is_concept_term(const Term& t);
bool is_variable(const Term& t);
// Constants and variables denote the same value at every state.
bool is_rigid(const Term& t);
VarKind kind_of(const Term& t);
Term as_term(const Variable& v);
// Variable occurring in t (directly or under @), if any.
const std::string* variable_name(const Term& t);

std::string render_term(const Term& t);

class Formula;
struct FormulaNode;

struct Eq {
  Term lhs, rhs;
  bool operator==(const Eq&) const = default;
};
struct Neq {
  Term lhs, rhs;
  bool operator==(const Neq&) const = default;
};

class Formula {
 public:
  Formula() = delete;
  explicit Formula(FormulaNode node);

  const FormulaNode& node() const { return *node_; }

  template <typename T>
  const T* as() const;
  template <typename T>
  bool is() const { return as<T>() != nullptr; }

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  std::shared_ptr<const FormulaNode> node_;
};

struct Not {
  Formula body;
  bool operator==(const Not&) const = default;
};
struct And {
  Formula lhs, rhs;
  bool operator==(const And&) const = default;
};
struct Or {
  Formula lhs, rhs;
  bool operator==(const Or&) const = default;
};
struct Implies {
  Formula lhs, rhs;
  bool operator==(const Implies&) const = default;
};
struct Diamond {
  std::string relation;
  Formula body;
  bool operator==(const Diamond&) const = default;
};
struct Box {
  std::string relation;
  Formula body;
  bool operator==(const Box&) const = default;
};
struct Exists {
  Variable var;
  Formula body;
  bool operator==(const Exists&) const = default;
};
struct Forall {
  Variable var;
  Formula body;
  bool operator==(const Forall&) const = default;
};
// <lam var . body>(arg)
struct Abstraction {
  Variable var;
  Formula body;
  Term arg;
  bool operator==(const Abstraction&) const = default;
};

struct FormulaNode {
  std::variant<Eq, Neq, Not, And, Or, Implies, Diamond, Box, Exists, Forall, Abstraction> v;
};

template <typename T>
const T* Formula::as() const {
  return std::get_if<T>(&node_->v);
}

// Builders. These do not kind-check; see check_kinds().
Formula make_eq(Term lhs, Term rhs);
Formula make_neq(Term lhs, Term rhs);
Formula make_not(Formula body);
Formula make_and(Formula lhs, Formula rhs);
Formula make_or(Formula lhs, Formula rhs);
Formula make_implies(Formula lhs, Formula rhs);
Formula make_diamond(std::string relation, Formula body);
Formula make_box(std::string relation, Formula body);
Formula make_exists(Variable var, Formula body);
Formula make_forall(Variable var, Formula body);
Formula make_abstraction(Variable var, Formula body, Term arg);

// Throws KindError if an equality operand is a concept term or an abstraction
// binder's kind differs from its argument's.
void check_kinds(const Formula& f);

// Free variables in first-occurrence order.
std::vector<Variable> free_vars(const Formula& f);
bool occurs_free(const Variable& v, const Formula& f);

// Number of nested connective/operator levels; atoms have depth 0.
int depth(const Formula& f);
std::size_t size(const Formula& f);

std::string render_formula(const Formula& f);

// Replaces every free occurrence of `var` with the rigid term `replacement`
// (a constant or variable of the same kind). Bound variables that would
// capture the replacement are renamed first.
Formula substitute(const Formula& f, const Variable& var, const Term& replacement);

// Every free occurrence of `from` becomes `to` (same kind, not captured).
Formula rename_free(const Formula& f, const Variable& from, const Variable& to);

// A name for kind `kind` distinct from every name in `avoid`, derived from `base`.
Variable fresh_variable(const Variable& base, const std::set<Variable>& avoid);

// Every variable name occurring in f, bound or free.
std::set<Variable> all_variables(const Formula& f);

// Rewrites every a -> b into !a | b.
Formula desugar_implications(const Formula& f);

struct ModalQuery {
  Formula formula;
  std::vector<Variable> targets;
};

// Throws FreeVarMismatch unless targets are distinct and equal the free
// variables of formula as a set.
ModalQuery make_query(Formula formula, std::vector<Variable> targets);

// Parses a formula in the concrete query grammar. Throws SyntaxError or
// KindError.
Formula parse_formula(std::string_view text);

// Target names carry their sigil: "?x" or "%a".
Variable parse_variable(std::string_view text);

ModalQuery parse_query(std::string_view text, const std::vector<std::string>& targets);

}  // namespace modalq::syntax
