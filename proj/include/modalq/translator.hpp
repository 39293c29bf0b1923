#pragma once

// Compiles modal queries to relational algebra over the Sta/Rel/Con/Obj image
// of a model.
//
// Column convention: a formula translated under context (v1, ..., vn)
// yields a degree n+1 expression whose columns 1..n hold the values of
// v1..vn and whose column n+1 holds the id of a state where the formula is
// true. Bound variables are prepended, so inside a quantifier or abstraction
// the bound variable occupies column 1.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "modalq/kripke.hpp"
#include "modalq/relalg.hpp"
#include "modalq/schema_map.hpp"
#include "modalq/syntax.hpp"

namespace modalq::translate {

class VarContext {
 public:
  VarContext() = default;
  // Throws UnknownVariable if names repeat.
  explicit VarContext(std::vector<syntax::Variable> vars);

  std::size_t size() const { return vars_.size(); }
  bool empty() const { return vars_.empty(); }
  const std::vector<syntax::Variable>& vars() const { return vars_; }
  // 1-based position, if present.
  std::optional<std::size_t> position(const syntax::Variable& v) const;
  bool contains(const syntax::Variable& v) const { return position(v).has_value(); }
  VarContext prepend(const syntax::Variable& v) const;

 private:
  std::vector<syntax::Variable> vars_;
};

// Either a column index or a constant value.
using TermRef = relalg::Operand;

// Deliberately broken translation rules. Used to show the differential
// harness detects a wrong translation.
enum class Mutation {
  None,
  BoxWithoutDuality,         // [R]p translated as <R>p
  LambdaWithoutSubstitution, // <lam ?x . p>(rigid t) translated as exists ?x . p
  ImplicationWithoutNegation,// p -> q translated as p | q
  ForallAsExists,            // division replaced by projection
  NegationWithoutComplement, // !p translated as p
  DiamondReversedProduct,    // Rel x FT(p) with the FT(p) x Rel indices
  AbstractionLiteralIndex,   // Sta projection uses n + index(c), not index(c)
};

std::vector<Mutation> all_mutations();
std::string to_string(Mutation m);

enum class ForallStrategy {
  Division,      // pi U - pi((VT(x) x pi U) - U)
  NotExistsNot,  // FT(!exists x . !p)
};

struct Options {
  ForallStrategy forall = ForallStrategy::Division;
  Mutation mutation = Mutation::None;
};

// Names the translator may reference. Without one, constants and relation
// names are not checked.
struct Signature {
  std::set<std::string> objects;
  std::set<std::string> relations;

  static Signature of(const kripke::KripkeModel& model);
};

class Translator {
 public:
  explicit Translator(schema::ConceptIndex ci, std::optional<Signature> sig = std::nullopt, Options opts = {});

  TermRef tt(const syntax::Term& t, const VarContext& ctx) const;
  relalg::Expr vt(const VarContext& ctx) const;
  relalg::Expr ft(const syntax::Formula& f, const VarContext& ctx) const;

 private:
  relalg::Expr atom(const syntax::Term& lhs, const syntax::Term& rhs, relalg::CompareOp op,
                    const VarContext& ctx) const;
  relalg::Expr diamond(const std::string& relation, const syntax::Formula& body, const VarContext& ctx) const;
  relalg::Expr forall(const syntax::Variable& var, const syntax::Formula& body, const VarContext& ctx) const;
  relalg::Expr abstraction(const syntax::Abstraction& a, const VarContext& ctx) const;
  // Binder renamed away from ctx when it would shadow a context variable.
  std::pair<syntax::Variable, syntax::Formula> unshadow(const syntax::Variable& var, const syntax::Formula& body,
                                                        const VarContext& ctx) const;
  void check_relation(const std::string& relation) const;

  schema::ConceptIndex ci_;
  std::optional<Signature> sig_;
  Options opts_;
};

// {<>}: the empty projection of Sta, which is never empty.
relalg::Expr unit();
bool is_unit(const relalg::Expr& e);
// a x b, dropping a {<>} operand.
relalg::Expr cross(relalg::Expr a, relalg::Expr b);

TermRef tt(const syntax::Term& t, const VarContext& ctx, const schema::ConceptIndex& ci);
relalg::Expr vt(const VarContext& ctx);
relalg::Expr ft(const syntax::Formula& f, const VarContext& ctx, const schema::ConceptIndex& ci);

// Degree |targets| + 1. Throws UntranslatableTerm, UnknownRelation,
// UnknownConstant.
relalg::Expr translate_query(const syntax::ModalQuery& q, const kripke::KripkeModel& model, Options opts = {});

}  // namespace modalq::translate
