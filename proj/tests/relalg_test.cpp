#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "modalq/errors.hpp"
#include "modalq/relalg.hpp"

using namespace modalq;
using namespace modalq::relalg;

namespace {

Database example_db() {
  Database db;
  db.add("Sta", Relation(2, {{"1", "d"}, {"2", "a"}, {"3", "b"}, {"4", "c"}}));
  db.add("Rel", Relation(3, {{"1", "2", "COMP"}, {"1", "3", "COMP"}, {"1", "4", "COMP"}}));
  db.add("Con", Relation(1, {{"id"}, {"code"}}));
  db.add("Obj", Relation(1, {{"1"}, {"2"}, {"3"}, {"4"}, {"a"}, {"b"}, {"c"}, {"d"}}));
  return db;
}

// Textbook set semantics, one operator at a time, no fusion.
Relation naive(const Expr& e, const Database& db) {
  if (auto* b = e.as<BaseRelation>()) return db.get(b->name);
  if (auto* s = e.as<SingletonConstant>()) return Relation(1, {{s->value}});
  if (auto* s = e.as<Selection>()) {
    Relation in = naive(s->child, db);
    Relation out(in.degree());
    auto val = [](const Tuple& t, const Operand& o) {
      return std::holds_alternative<Column>(o) ? t[std::get<Column>(o).index - 1] : std::get<Constant>(o).value;
    };
    for (const auto& t : in) {
      bool eq = val(t, s->pred.lhs) == val(t, s->pred.rhs);
      if (eq == (s->pred.op == CompareOp::Equal)) out.insert(t);
    }
    return out;
  }
  if (auto* p = e.as<Projection>()) {
    Relation in = naive(p->child, db);
    Relation out(p->columns.size());
    for (const auto& t : in) {
      Tuple r;
      for (auto c : p->columns) r.push_back(t[c - 1]);
      out.insert(r);
    }
    return out;
  }
  if (auto* p = e.as<Product>()) {
    Relation l = naive(p->lhs, db), r = naive(p->rhs, db);
    Relation out(l.degree() + r.degree());
    for (const auto& a : l) {
      for (const auto& b : r) {
        Tuple t = a;
        t.insert(t.end(), b.begin(), b.end());
        out.insert(t);
      }
    }
    return out;
  }
  auto setop = [&](const Expr& lhs, const Expr& rhs, int kind) {
    Relation l = naive(lhs, db), r = naive(rhs, db);
    Relation out(l.degree());
    for (const auto& t : l) {
      if ((kind == 0) || (kind == 1 && !r.contains(t)) || (kind == 2 && r.contains(t))) out.insert(t);
    }
    if (kind == 0) {
      for (const auto& t : r) out.insert(t);
    }
    return out;
  };
  if (auto* u = e.as<Union>()) return setop(u->lhs, u->rhs, 0);
  if (auto* d = e.as<Difference>()) return setop(d->lhs, d->rhs, 1);
  const auto& i = *e.as<Intersection>();
  return setop(i.lhs, i.rhs, 2);
}

// Random well-typed expression of the requested degree.
class ExprGen {
 public:
  explicit ExprGen(std::uint64_t seed) : rng_(seed) {}

  Expr gen(std::size_t degree, int depth) {
    auto roll = std::uniform_int_distribution<int>(0, depth <= 0 ? 1 : 7)(rng_);
    switch (roll) {
      case 0:
      case 1:
        return leaf(degree);
      case 2:
        if (degree >= 2) {
          std::size_t left = std::uniform_int_distribution<std::size_t>(1, degree - 1)(rng_);
          return product(gen(left, depth - 1), gen(degree - left, depth - 1));
        }
        return leaf(degree);
      case 3: {
        Expr child = gen(degree, depth - 1);
        return select(pred(degree), child);
      }
      case 4: {
        std::size_t wider = degree + std::uniform_int_distribution<std::size_t>(0, 2)(rng_);
        std::vector<std::size_t> cols;
        for (std::size_t i = 0; i < degree; ++i) cols.push_back(col(wider));
        return project(cols, gen(wider, depth - 1));
      }
      case 5:
        return unite(gen(degree, depth - 1), gen(degree, depth - 1));
      case 6:
        return difference(gen(degree, depth - 1), gen(degree, depth - 1));
      default:
        return intersect(gen(degree, depth - 1), gen(degree, depth - 1));
    }
  }

 private:
  std::size_t col(std::size_t degree) { return std::uniform_int_distribution<std::size_t>(1, degree)(rng_); }

  SelectionPredicate pred(std::size_t degree) {
    static const std::vector<std::string> values = {"1", "2", "a", "b", "COMP"};
    Operand rhs = Column{col(degree)};
    if (std::bernoulli_distribution(0.5)(rng_)) rhs = Constant{values[col(values.size()) - 1]};
    auto op = std::bernoulli_distribution(0.7)(rng_) ? CompareOp::Equal : CompareOp::NotEqual;
    return {Column{col(degree)}, op, rhs};
  }

  Expr leaf(std::size_t degree) {
    if (degree == 1) {
      switch (col(3)) {
        case 1:
          return base("Obj");
        case 2:
          return base("Con");
        default:
          return singleton("b");
      }
    }
    if (degree == 2) return base("Sta");
    if (degree == 3) return base("Rel");
    std::size_t left = std::uniform_int_distribution<std::size_t>(1, degree - 1)(rng_);
    return product(leaf(left), leaf(degree - left));
  }

  std::mt19937_64 rng_;
};

}  // namespace

TEST(Degree, Examples) {
  auto schema = example_db().schema();
  EXPECT_EQ(degree_of(product(base("Sta"), base("Rel")), schema), 5u);
  EXPECT_EQ(degree_of(project({}, base("Sta")), schema), 0u);
  EXPECT_THROW(degree_of(unite(base("Con"), base("Rel")), schema), DegreeError);
  EXPECT_THROW(degree_of(select(col_eq(3, "b"), base("Sta")), schema), DegreeError);
  EXPECT_THROW(degree_of(project({0}, base("Sta")), schema), DegreeError);
  EXPECT_THROW(degree_of(base("Nope"), schema), UnknownRelation);
}

TEST(Eval, Examples) {
  auto db = example_db();
  EXPECT_EQ(eval(select(col_eq(2, "b"), base("Sta")), db), Relation(2, {{"3", "b"}}));
  EXPECT_EQ(eval(project({1}, select(col_eq(2, "b"), base("Sta"))), db), Relation(1, {{"3"}}));
  Expr unit = project({}, base("Sta"));
  EXPECT_EQ(eval(unit, db), Relation(0, {{}}));
  EXPECT_EQ(eval(product(unit, singleton("c")), db), Relation(1, {{"c"}}));
  EXPECT_EQ(eval(project({}, select(col_eq(2, "zz"), base("Sta"))), db), Relation(0));
  EXPECT_EQ(eval(difference(base("Obj"), project({1}, base("Sta"))), db),
            Relation(1, {{"a"}, {"b"}, {"c"}, {"d"}}));
  EXPECT_EQ(eval(select({Column{1}, CompareOp::NotEqual, Column{2}}, product(base("Con"), base("Con"))), db),
            Relation(2, {{"code", "id"}, {"id", "code"}}));
  EXPECT_EQ(eval(project({2, 2}, base("Sta")), db).size(), 4u);
}

TEST(Relation, InsertChecksDegree) {
  Relation r(2);
  EXPECT_THROW(r.insert({"a"}), DegreeError);
  r.insert({"b", "a"});
  r.insert({"a", "z"});
  r.insert({"a", "z"});
  EXPECT_EQ(r.size(), 2u);
  EXPECT_EQ(*r.begin(), (Tuple{"a", "z"}));
}

TEST(Render, CanonicalForms) {
  EXPECT_EQ(render_algebra(project({1}, select(col_eq(2, "b"), base("Sta")))),
            "(project (1) (select (= 2 'b') Sta))");
  EXPECT_EQ(render_algebra(singleton("b")), "(const 'b')");
  EXPECT_EQ(render_algebra(difference(base("Obj"), base("Con"))), "(diff Obj Con)");
  EXPECT_EQ(render_algebra(project({}, base("Sta"))), "(project () Sta)");
  EXPECT_EQ(render_algebra(select({Column{1}, CompareOp::NotEqual, Column{3}}, base("Rel"))),
            "(select (!= 1 3) Rel)");
}

TEST(Render, ParseInvertsRender) {
  ExprGen g(3);
  for (int i = 0; i < 300; ++i) {
    Expr e = g.gen(1 + i % 4, 4);
    EXPECT_EQ(parse_algebra(render_algebra(e)), e) << render_algebra(e);
  }
  EXPECT_EQ(parse_algebra("(union (const 'it\\'s') Obj)"), unite(singleton("it's"), base("Obj")));
  EXPECT_THROW(parse_algebra("(project (1) Sta"), SyntaxError);
  EXPECT_THROW(parse_algebra("(frobnicate Sta)"), SyntaxError);
}

// The evaluator fuses selections over products; the reference does not.
TEST(Eval, AgreesWithNaiveReference) {
  auto db = example_db();
  ExprGen g(99);
  for (int i = 0; i < 2000; ++i) {
    Expr e = g.gen(1 + i % 5, 5);
    EXPECT_EQ(eval(e, db), naive(e, db)) << render_algebra(e);
  }
}

TEST(Eval, NodeCount) {
  EXPECT_EQ(node_count(project({1}, select(col_eq(2, "b"), base("Sta")))), 3u);
}
