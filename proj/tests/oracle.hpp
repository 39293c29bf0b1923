#pragma once

// Brute-force reference semantics used to derive expected answers. It reads
// only the raw model data (objects, concept values, edge pairs) and the AST,
// and shares no evaluation code with the library.

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "modalq/kripke.hpp"
#include "modalq/syntax.hpp"

namespace oracle {

struct World {
  std::vector<std::string> objects;
  std::vector<std::string> concepts;
  std::vector<std::map<std::string, std::string>> states;
  std::set<std::tuple<std::string, std::string, std::string>> edges;  // (relation, from id, to id)

  static World of(const modalq::kripke::KripkeModel& m) {
    World w{m.objects(), m.concepts(), m.state_records(), {}};
    for (const auto& [rel, pairs] : m.edge_list()) {
      for (const auto& [a, b] : pairs) w.edges.emplace(rel, a, b);
    }
    return w;
  }
};

using Env = std::map<std::string, std::string>;  // "?x" / "%a" -> value

inline std::string key(const modalq::syntax::Variable& v) {
  return (v.kind == modalq::syntax::VarKind::Object ? "?" : "%") + v.name;
}

inline std::string value(const World& w, const Env& env, const modalq::syntax::Term& t, std::size_t s) {
  using namespace modalq::syntax;
  if (auto* c = std::get_if<ObjectConstant>(&t)) return c->symbol;
  if (auto* c = std::get_if<ConceptConstant>(&t)) return c->symbol;
  if (auto* x = std::get_if<ObjectVariable>(&t)) return env.at("?" + x->name);
  if (auto* a = std::get_if<ConceptVariable>(&t)) return env.at("%" + a->name);
  const auto& r = std::get<Relativized>(t);
  std::string concept_name = std::holds_alternative<ConceptConstant>(r.inner)
                                 ? std::get<ConceptConstant>(r.inner).symbol
                                 : env.at("%" + std::get<ConceptVariable>(r.inner).name);
  return w.states[s].at(concept_name);
}

inline bool holds(const World& w, const Env& env, const modalq::syntax::Formula& f, std::size_t s) {
  using namespace modalq::syntax;
  if (auto* n = f.as<Eq>()) return value(w, env, n->lhs, s) == value(w, env, n->rhs, s);
  if (auto* n = f.as<Neq>()) return value(w, env, n->lhs, s) != value(w, env, n->rhs, s);
  if (auto* n = f.as<Not>()) return !holds(w, env, n->body, s);
  if (auto* n = f.as<And>()) return holds(w, env, n->lhs, s) && holds(w, env, n->rhs, s);
  if (auto* n = f.as<Or>()) return holds(w, env, n->lhs, s) || holds(w, env, n->rhs, s);
  if (auto* n = f.as<Implies>()) return !holds(w, env, n->lhs, s) || holds(w, env, n->rhs, s);
  auto some_successor = [&](const std::string& rel, const Formula& body, bool want) {
    for (std::size_t t = 0; t < w.states.size(); ++t) {
      if (w.edges.count({rel, w.states[s].at("id"), w.states[t].at("id")}) && holds(w, env, body, t) == want)
        return true;
    }
    return false;
  };
  if (auto* n = f.as<Diamond>()) return some_successor(n->relation, n->body, true);
  if (auto* n = f.as<Box>()) return !some_successor(n->relation, n->body, false);
  auto domain = [&](const Variable& v) { return v.kind == VarKind::Object ? w.objects : w.concepts; };
  auto count_true = [&](const Variable& v, const Formula& body) {
    std::size_t n = 0;
    for (const auto& d : domain(v)) {
      Env e = env;
      e[key(v)] = d;
      n += holds(w, e, body, s);
    }
    return n;
  };
  if (auto* n = f.as<Exists>()) return count_true(n->var, n->body) > 0;
  if (auto* n = f.as<Forall>()) return count_true(n->var, n->body) == domain(n->var).size();
  const auto& a = *f.as<Abstraction>();
  Env e = env;
  e[key(a.var)] = value(w, env, a.arg, s);
  return holds(w, e, a.body, s);
}

// Every <values of targets..., state id> satisfying the query.
inline std::set<std::vector<std::string>> answer(const World& w, const modalq::syntax::ModalQuery& q) {
  std::set<std::vector<std::string>> out;
  std::vector<std::vector<std::string>> rows = {{}};
  for (const auto& v : q.targets) {
    const auto& dom = v.kind == modalq::syntax::VarKind::Object ? w.objects : w.concepts;
    std::vector<std::vector<std::string>> next;
    for (const auto& r : rows) {
      for (const auto& d : dom) {
        auto r2 = r;
        r2.push_back(d);
        next.push_back(r2);
      }
    }
    rows = next;
  }
  for (const auto& r : rows) {
    Env env;
    for (std::size_t i = 0; i < r.size(); ++i) env[key(q.targets[i])] = r[i];
    for (std::size_t s = 0; s < w.states.size(); ++s) {
      if (holds(w, env, q.formula, s)) {
        auto t = r;
        t.push_back(w.states[s].at("id"));
        out.insert(t);
      }
    }
  }
  return out;
}

inline std::set<std::vector<std::string>> answer(const modalq::kripke::KripkeModel& m,
                                                 const modalq::syntax::ModalQuery& q) {
  return answer(World::of(m), q);
}

}  // namespace oracle
