#include "modalq/relalg.hpp"

#include "modalq/errors.hpp"

namespace modalq::relalg {

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

}  // namespace

Relation::Relation(std::size_t degree, std::initializer_list<Tuple> tuples) : degree_(degree) {
  for (const auto& t : tuples) insert(t);
}

void Relation::insert(Tuple t) {
  if (t.size() != degree_) throw DegreeError("tuple insertion", degree_, t.size());
  tuples_.insert(std::move(t));
}

SelectionPredicate col_eq(std::size_t lhs, std::size_t rhs) {
  return {Column{lhs}, CompareOp::Equal, Column{rhs}};
}

SelectionPredicate col_eq(std::size_t lhs, Value rhs) {
  return {Column{lhs}, CompareOp::Equal, Constant{std::move(rhs)}};
}

Expr::Expr(ExprNode node) : node_(std::make_shared<const ExprNode>(std::move(node))) {}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  return a.node_->v == b.node_->v;
}

Expr base(std::string name) { return Expr({BaseRelation{std::move(name)}}); }
Expr singleton(Value value) { return Expr({SingletonConstant{std::move(value)}}); }
Expr select(SelectionPredicate pred, Expr child) { return Expr({Selection{std::move(pred), std::move(child)}}); }
Expr project(std::vector<std::size_t> columns, Expr child) {
  return Expr({Projection{std::move(columns), std::move(child)}});
}
Expr product(Expr lhs, Expr rhs) { return Expr({Product{std::move(lhs), std::move(rhs)}}); }
Expr unite(Expr lhs, Expr rhs) { return Expr({Union{std::move(lhs), std::move(rhs)}}); }
Expr difference(Expr lhs, Expr rhs) { return Expr({Difference{std::move(lhs), std::move(rhs)}}); }
Expr intersect(Expr lhs, Expr rhs) { return Expr({Intersection{std::move(lhs), std::move(rhs)}}); }

void Database::add(std::string name, Relation rel) { relations_.insert_or_assign(std::move(name), std::move(rel)); }

const Relation& Database::get(const std::string& name) const {
  auto it = relations_.find(name);
  if (it == relations_.end()) throw UnknownRelation("unknown base relation " + name);
  return it->second;
}

Schema Database::schema() const {
  Schema s;
  for (const auto& [name, rel] : relations_) s.emplace(name, rel.degree());
  return s;
}

namespace {

void check_operand(const Operand& o, std::size_t degree, const char* node) {
  if (auto* c = std::get_if<Column>(&o)) {
    if (c->index == 0 || c->index > degree) throw DegreeError(node, degree, c->index);
  }
}

std::size_t same_degree(const char* node, std::size_t l, std::size_t r) {
  if (l != r) throw DegreeError(node, l, r);
  return l;
}

}  // namespace

std::size_t degree_of(const Expr& e, const Schema& schema) {
  return std::visit(
      overloaded{
          [&](const BaseRelation& b) -> std::size_t {
            auto it = schema.find(b.name);
            if (it == schema.end()) throw UnknownRelation("unknown base relation " + b.name);
            return it->second;
          },
          [](const SingletonConstant&) -> std::size_t { return 1; },
          [&](const Selection& s) {
            std::size_t d = degree_of(s.child, schema);
            check_operand(s.pred.lhs, d, "select");
            check_operand(s.pred.rhs, d, "select");
            return d;
          },
          [&](const Projection& p) {
            std::size_t d = degree_of(p.child, schema);
            for (std::size_t j : p.columns) {
              if (j == 0 || j > d) throw DegreeError("project", d, j);
            }
            return p.columns.size();
          },
          [&](const Product& p) { return degree_of(p.lhs, schema) + degree_of(p.rhs, schema); },
          [&](const Union& u) { return same_degree("union", degree_of(u.lhs, schema), degree_of(u.rhs, schema)); },
          [&](const Difference& d) {
            return same_degree("diff", degree_of(d.lhs, schema), degree_of(d.rhs, schema));
          },
          [&](const Intersection& i) {
            return same_degree("intersect", degree_of(i.lhs, schema), degree_of(i.rhs, schema));
          },
      },
      e.node().v);
}

namespace {

// Reads operand values from a (possibly split) tuple without materializing
// the concatenation.
struct TupleView {
  const Tuple& left;
  const Tuple* right;

  const Value& at(std::size_t index) const {
    if (index <= left.size()) return left[index - 1];
    return (*right)[index - 1 - left.size()];
  }
};

const Value& operand_value(const Operand& o, const TupleView& t) {
  return std::visit(overloaded{
                        [&](const Column& c) -> const Value& { return t.at(c.index); },
                        [](const Constant& c) -> const Value& { return c.value; },
                    },
                    o);
}

bool holds(const SelectionPredicate& p, const TupleView& t) {
  bool equal = operand_value(p.lhs, t) == operand_value(p.rhs, t);
  return p.op == CompareOp::Equal ? equal : !equal;
}

bool holds_all(const std::vector<const SelectionPredicate*>& preds, const TupleView& t) {
  for (auto* p : preds) {
    if (!holds(*p, t)) return false;
  }
  return true;
}

Relation eval_unchecked(const Expr& e, const Database& db) {
  return std::visit(
      overloaded{
          [&](const BaseRelation& b) { return db.get(b.name); },
          [](const SingletonConstant& s) { return Relation(1, {Tuple{s.value}}); },
          [&](const Selection& s) {
            std::vector<const SelectionPredicate*> preds{&s.pred};
            const Expr* child = &s.child;
            while (auto* inner = child->as<Selection>()) {
              preds.push_back(&inner->pred);
              child = &inner->child;
            }
            // A selection chain over a product filters pairs before concatenating.
            if (auto* prod = child->as<Product>()) {
              Relation lhs = eval_unchecked(prod->lhs, db);
              Relation rhs = eval_unchecked(prod->rhs, db);
              Relation out(lhs.degree() + rhs.degree());
              for (const auto& l : lhs) {
                for (const auto& r : rhs) {
                  if (!holds_all(preds, TupleView{l, &r})) continue;
                  Tuple t;
                  t.reserve(l.size() + r.size());
                  t.insert(t.end(), l.begin(), l.end());
                  t.insert(t.end(), r.begin(), r.end());
                  out.insert(std::move(t));
                }
              }
              return out;
            }
            Relation in = eval_unchecked(*child, db);
            Relation out(in.degree());
            for (const auto& t : in) {
              if (holds_all(preds, TupleView{t, nullptr})) out.insert(t);
            }
            return out;
          },
          [&](const Projection& p) {
            Relation in = eval_unchecked(p.child, db);
            Relation out(p.columns.size());
            for (const auto& t : in) {
              Tuple u;
              u.reserve(p.columns.size());
              for (std::size_t j : p.columns) u.push_back(t[j - 1]);
              out.insert(std::move(u));
            }
            return out;
          },
          [&](const Product& p) {
            Relation lhs = eval_unchecked(p.lhs, db);
            Relation rhs = eval_unchecked(p.rhs, db);
            Relation out(lhs.degree() + rhs.degree());
            for (const auto& l : lhs) {
              for (const auto& r : rhs) {
                Tuple t = l;
                t.insert(t.end(), r.begin(), r.end());
                out.insert(std::move(t));
              }
            }
            return out;
          },
          [&](const Union& u) {
            Relation out = eval_unchecked(u.lhs, db);
            for (const auto& t : eval_unchecked(u.rhs, db)) out.insert(t);
            return out;
          },
          [&](const Difference& d) {
            Relation lhs = eval_unchecked(d.lhs, db);
            Relation rhs = eval_unchecked(d.rhs, db);
            Relation out(lhs.degree());
            for (const auto& t : lhs) {
              if (!rhs.contains(t)) out.insert(t);
            }
            return out;
          },
          [&](const Intersection& i) {
            Relation lhs = eval_unchecked(i.lhs, db);
            Relation rhs = eval_unchecked(i.rhs, db);
            Relation out(lhs.degree());
            for (const auto& t : lhs) {
              if (rhs.contains(t)) out.insert(t);
            }
            return out;
          },
      },
      e.node().v);
}

}  // namespace

Relation eval(const Expr& e, const Database& db) {
  degree_of(e, db.schema());
  return eval_unchecked(e, db);
}

std::size_t node_count(const Expr& e) {
  return std::visit(overloaded{
                        [](const BaseRelation&) -> std::size_t { return 1; },
                        [](const SingletonConstant&) -> std::size_t { return 1; },
                        [](const Selection& s) { return 1 + node_count(s.child); },
                        [](const Projection& p) { return 1 + node_count(p.child); },
                        [](const Product& p) { return 1 + node_count(p.lhs) + node_count(p.rhs); },
                        [](const Union& p) { return 1 + node_count(p.lhs) + node_count(p.rhs); },
                        [](const Difference& p) { return 1 + node_count(p.lhs) + node_count(p.rhs); },
                        [](const Intersection& p) { return 1 + node_count(p.lhs) + node_count(p.rhs); },
                    },
                    e.node().v);
}

}  // namespace modalq::relalg
