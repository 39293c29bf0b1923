#pragma once

// Unnamed-perspective relational algebra. Attributes are 1-based positions;
// instances are finite sets of tuples over untyped string values.

#include <cstddef>
#include <initializer_list>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace modalq::relalg {

using Value = std::string;
using Tuple = std::vector<Value>;

class Relation {
 public:
  explicit Relation(std::size_t degree) : degree_(degree) {}
  Relation(std::size_t degree, std::initializer_list<Tuple> tuples);

  std::size_t degree() const { return degree_; }
  std::size_t size() const { return tuples_.size(); }
  bool empty() const { return tuples_.empty(); }

  // Throws DegreeError if t has the wrong arity.
  void insert(Tuple t);
  bool contains(const Tuple& t) const { return tuples_.contains(t); }

  // Lexicographically ordered.
  const std::set<Tuple>& tuples() const { return tuples_; }
  auto begin() const { return tuples_.begin(); }
  auto end() const { return tuples_.end(); }

  bool operator==(const Relation&) const = default;

 private:
  std::size_t degree_;
  std::set<Tuple> tuples_;
};

struct Column {
  std::size_t index;  // 1-based
  bool operator==(const Column&) const = default;
};
struct Constant {
  Value value;
  bool operator==(const Constant&) const = default;
};
using Operand = std::variant<Column, Constant>;

enum class CompareOp { Equal, NotEqual };

struct SelectionPredicate {
  Operand lhs;
  CompareOp op = CompareOp::Equal;
  Operand rhs;
  bool operator==(const SelectionPredicate&) const = default;
};

SelectionPredicate col_eq(std::size_t lhs, std::size_t rhs);
SelectionPredicate col_eq(std::size_t lhs, Value rhs);

class Expr;
struct ExprNode;

class Expr {
 public:
  Expr() = delete;
  explicit Expr(ExprNode node);

  const ExprNode& node() const { return *node_; }
  template <typename T>
  const T* as() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  std::shared_ptr<const ExprNode> node_;
};

struct BaseRelation {
  std::string name;
  bool operator==(const BaseRelation&) const = default;
};
// {<c>}
struct SingletonConstant {
  Value value;
  bool operator==(const SingletonConstant&) const = default;
};
struct Selection {
  SelectionPredicate pred;
  Expr child;
  bool operator==(const Selection&) const = default;
};
// Column list may be empty and may repeat indices.
struct Projection {
  std::vector<std::size_t> columns;
  Expr child;
  bool operator==(const Projection&) const = default;
};
struct Product {
  Expr lhs, rhs;
  bool operator==(const Product&) const = default;
};
struct Union {
  Expr lhs, rhs;
  bool operator==(const Union&) const = default;
};
struct Difference {
  Expr lhs, rhs;
  bool operator==(const Difference&) const = default;
};
struct Intersection {
  Expr lhs, rhs;
  bool operator==(const Intersection&) const = default;
};

struct ExprNode {
  std::variant<BaseRelation, SingletonConstant, Selection, Projection, Product, Union, Difference, Intersection> v;
};

template <typename T>
const T* Expr::as() const {
  return std::get_if<T>(&node_->v);
}

Expr base(std::string name);
Expr singleton(Value value);
Expr select(SelectionPredicate pred, Expr child);
Expr project(std::vector<std::size_t> columns, Expr child);
Expr product(Expr lhs, Expr rhs);
Expr unite(Expr lhs, Expr rhs);
Expr difference(Expr lhs, Expr rhs);
Expr intersect(Expr lhs, Expr rhs);

using Schema = std::map<std::string, std::size_t>;

class Database {
 public:
  void add(std::string name, Relation rel);
  // Throws UnknownRelation.
  const Relation& get(const std::string& name) const;
  bool has(const std::string& name) const { return relations_.contains(name); }
  Schema schema() const;
  const std::map<std::string, Relation>& relations() const { return relations_; }

  bool operator==(const Database&) const = default;

 private:
  std::map<std::string, Relation> relations_;
};

// Static degree; throws DegreeError or UnknownRelation.
std::size_t degree_of(const Expr& e, const Schema& schema);

// Degree-checks e against db's schema, then evaluates it under set semantics.
Relation eval(const Expr& e, const Database& db);

// Canonical prefix text, e.g. (project (1) (select (= 2 'b') Sta)).
std::string render_algebra(const Expr& e);
// Inverse of render_algebra. Throws SyntaxError.
Expr parse_algebra(std::string_view text);

std::size_t node_count(const Expr& e);

}  // namespace modalq::relalg
