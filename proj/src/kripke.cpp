#include "modalq/kripke.hpp"

#include <algorithm>

#include "modalq/errors.hpp"

namespace modalq::kripke {

using syntax::Formula;
using syntax::Term;
using syntax::Variable;
using syntax::VarKind;

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

}  // namespace

KripkeModel KripkeModel::create(std::vector<std::string> objects, std::vector<std::string> concepts,
                                std::vector<StateRecord> states, const EdgeList& relations) {
  KripkeModel m;
  if (objects.empty()) throw ModelInvariantError("model has no objects");
  std::sort(objects.begin(), objects.end());
  if (auto dup = std::adjacent_find(objects.begin(), objects.end()); dup != objects.end())
    throw ModelInvariantError("object " + *dup + " declared twice");
  m.objects_ = std::move(objects);

  for (std::size_t i = 0; i < concepts.size(); ++i) {
    if (!m.concept_pos_.emplace(concepts[i], i).second)
      throw ModelInvariantError("concept " + concepts[i] + " declared twice");
  }
  if (!m.concept_pos_.contains(kIdConcept)) throw ModelInvariantError("model has no concept named id");
  m.concepts_ = std::move(concepts);

  if (states.empty()) throw ModelInvariantError("model has no states");
  for (std::size_t s = 0; s < states.size(); ++s) {
    std::vector<std::string> row(m.concepts_.size());
    for (const auto& [name, value] : states[s]) {
      auto it = m.concept_pos_.find(name);
      if (it == m.concept_pos_.end())
        throw ModelInvariantError("state " + std::to_string(s + 1) + " sets undeclared concept " + name);
      if (!m.has_object(value))
        throw ModelInvariantError("state " + std::to_string(s + 1) + ": value " + value + " of concept " + name +
                                  " is not an object");
      row[it->second] = value;
    }
    for (const auto& c : m.concepts_) {
      if (!states[s].contains(c))
        throw ModelInvariantError("concept " + c + " is undefined at state " + std::to_string(s + 1));
    }
    const std::string& id = row[m.concept_pos_.at(kIdConcept)];
    if (!m.by_id_.emplace(id, s).second)
      throw ModelInvariantError("key violation: id value " + id + " identifies more than one state");
    m.values_.push_back(std::move(row));
  }

  if (relations.empty()) throw ModelInvariantError("model has no accessibility relations");
  for (const auto& [name, pairs] : relations) {
    auto& succ = m.successors_[name];
    succ.assign(m.values_.size(), {});
    for (const auto& [from, to] : pairs) {
      auto src = m.by_id_.find(from);
      auto dst = m.by_id_.find(to);
      if (src == m.by_id_.end() || dst == m.by_id_.end())
        throw ModelInvariantError("relation " + name + " edge (" + from + ", " + to + ") names an unknown state");
      succ[src->second].push_back(dst->second);
    }
    for (auto& list : succ) {
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
    }
  }
  return m;
}

std::vector<std::string> KripkeModel::relation_names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : successors_) out.push_back(name);
  return out;
}

const std::string& KripkeModel::value(StateHandle s, const std::string& concept_name) const {
  auto it = concept_pos_.find(concept_name);
  if (it == concept_pos_.end()) throw UnknownConstant("unknown concept " + concept_name);
  return values_.at(s)[it->second];
}

StateHandle KripkeModel::state_with_id(const std::string& id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) throw ModelInvariantError("no state has id " + id);
  return it->second;
}

bool KripkeModel::has_object(const std::string& o) const {
  return std::binary_search(objects_.begin(), objects_.end(), o);
}

const std::vector<StateHandle>& KripkeModel::successors(const std::string& relation, StateHandle s) const {
  auto it = successors_.find(relation);
  if (it == successors_.end()) throw UnknownRelation("unknown relation " + relation);
  return it->second.at(s);
}

std::vector<std::pair<StateHandle, StateHandle>> KripkeModel::edges(const std::string& relation) const {
  std::vector<std::pair<StateHandle, StateHandle>> out;
  for (StateHandle s = 0; s < state_count(); ++s) {
    for (StateHandle t : successors(relation, s)) out.emplace_back(s, t);
  }
  return out;
}

std::size_t KripkeModel::edge_count() const {
  std::size_t n = 0;
  for (const auto& [_, succ] : successors_) {
    for (const auto& list : succ) n += list.size();
  }
  return n;
}

std::vector<StateRecord> KripkeModel::state_records() const {
  std::vector<StateRecord> out;
  for (const auto& row : values_) {
    StateRecord rec;
    for (std::size_t i = 0; i < concepts_.size(); ++i) rec.emplace(concepts_[i], row[i]);
    out.push_back(std::move(rec));
  }
  return out;
}

EdgeList KripkeModel::edge_list() const {
  EdgeList out;
  for (const auto& [name, _] : successors_) {
    auto& pairs = out[name];
    for (auto [s, t] : edges(name)) pairs.emplace_back(id_of(s), id_of(t));
  }
  return out;
}

Assignment Assignment::with(const Variable& v, std::string value) const {
  Assignment out = *this;
  out.values_.insert_or_assign(v, std::move(value));
  return out;
}

const std::string* Assignment::find(const Variable& v) const {
  auto it = values_.find(v);
  return it == values_.end() ? nullptr : &it->second;
}

namespace {

// Evaluation state: the caller's assignment plus a stack of bindings
// introduced by quantifiers and abstractions (innermost last).
class Evaluator {
 public:
  Evaluator(const KripkeModel& m, const Assignment& outer) : m_(m), outer_(outer) {}

  const std::string& lookup(const Variable& v) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->first == v) return it->second;
    }
    if (auto* val = outer_.find(v)) return *val;
    throw UnboundVariable("variable " + syntax::to_string(v) + " is unbound");
  }

  const std::string& concept_named(const std::string& c) const {
    if (!m_.has_concept(c)) throw UnknownConstant("unknown concept constant " + c);
    return c;
  }

  std::string term(const Term& t, StateHandle s) const {
    return std::visit(overloaded{
                          [&](const syntax::ObjectConstant& c) {
                            if (!m_.has_object(c.symbol))
                              throw UnknownConstant("unknown object constant '" + c.symbol + "'");
                            return c.symbol;
                          },
                          [&](const syntax::ConceptConstant& c) { return concept_named(c.symbol); },
                          [&](const syntax::ObjectVariable& v) { return lookup(syntax::object_var(v.name)); },
                          [&](const syntax::ConceptVariable& v) { return lookup(syntax::concept_var(v.name)); },
                          [&](const syntax::Relativized& r) {
                            std::string concept_name = std::visit(
                                overloaded{
                                    [&](const syntax::ConceptConstant& c) { return concept_named(c.symbol); },
                                    [&](const syntax::ConceptVariable& v) {
                                      return lookup(syntax::concept_var(v.name));
                                    },
                                },
                                r.inner);
                            return m_.value(s, concept_name);
                          },
                      },
                      t);
  }

  bool holds(const Formula& f, StateHandle s) {
    return std::visit(
        overloaded{
            [&](const syntax::Eq& a) { return term(a.lhs, s) == term(a.rhs, s); },
            [&](const syntax::Neq& a) { return term(a.lhs, s) != term(a.rhs, s); },
            [&](const syntax::Not& n) { return !holds(n.body, s); },
            [&](const syntax::And& b) { return holds(b.lhs, s) && holds(b.rhs, s); },
            [&](const syntax::Or& b) { return holds(b.lhs, s) || holds(b.rhs, s); },
            [&](const syntax::Implies& b) { return !holds(b.lhs, s) || holds(b.rhs, s); },
            [&](const syntax::Diamond& d) {
              for (StateHandle t : m_.successors(d.relation, s)) {
                if (holds(d.body, t)) return true;
              }
              return false;
            },
            [&](const syntax::Box& b) {
              for (StateHandle t : m_.successors(b.relation, s)) {
                if (!holds(b.body, t)) return false;
              }
              return true;
            },
            [&](const syntax::Exists& q) {
              for (const auto& d : domain(q.var)) {
                if (bound(q.var, d, q.body, s)) return true;
              }
              return false;
            },
            [&](const syntax::Forall& q) {
              for (const auto& d : domain(q.var)) {
                if (!bound(q.var, d, q.body, s)) return false;
              }
              return true;
            },
            [&](const syntax::Abstraction& a) { return bound(a.var, term(a.arg, s), a.body, s); },
        },
        f.node().v);
  }

 private:
  const std::vector<std::string>& domain(const Variable& v) const {
    return v.kind == VarKind::Object ? m_.objects() : m_.concepts();
  }

  bool bound(const Variable& v, std::string value, const Formula& body, StateHandle s) {
    scope_.emplace_back(v, std::move(value));
    bool r = holds(body, s);
    scope_.pop_back();
    return r;
  }

  const KripkeModel& m_;
  const Assignment& outer_;
  std::vector<std::pair<Variable, std::string>> scope_;
};

void check_relations(const KripkeModel& m, const Formula& f) {
  std::visit(overloaded{
                 [](const syntax::Eq&) {},
                 [](const syntax::Neq&) {},
                 [&](const syntax::Not& n) { check_relations(m, n.body); },
                 [&](const syntax::And& b) { check_relations(m, b.lhs), check_relations(m, b.rhs); },
                 [&](const syntax::Or& b) { check_relations(m, b.lhs), check_relations(m, b.rhs); },
                 [&](const syntax::Implies& b) { check_relations(m, b.lhs), check_relations(m, b.rhs); },
                 [&](const syntax::Diamond& d) {
                   if (!m.has_relation(d.relation)) throw UnknownRelation("unknown relation " + d.relation);
                   check_relations(m, d.body);
                 },
                 [&](const syntax::Box& b) {
                   if (!m.has_relation(b.relation)) throw UnknownRelation("unknown relation " + b.relation);
                   check_relations(m, b.body);
                 },
                 [&](const syntax::Exists& q) { check_relations(m, q.body); },
                 [&](const syntax::Forall& q) { check_relations(m, q.body); },
                 [&](const syntax::Abstraction& a) { check_relations(m, a.body); },
             },
             f.node().v);
}

}  // namespace

std::string term_eval(const KripkeModel& model, const Assignment& v, const Term& t, StateHandle state) {
  return Evaluator(model, v).term(t, state);
}

bool satisfies(const KripkeModel& model, StateHandle state, const Assignment& v, const Formula& f) {
  // Unknown relations are an error even where a vacuous Box/Diamond would
  // never look at them.
  check_relations(model, f);
  return Evaluator(model, v).holds(f, state);
}

relalg::Relation answer_direct(const KripkeModel& model, const syntax::ModalQuery& q) {
  check_relations(model, q.formula);
  const auto& targets = q.targets;
  relalg::Relation out(targets.size() + 1);

  // Odometer over the target domains.
  std::vector<const std::vector<std::string>*> domains;
  for (const auto& t : targets) domains.push_back(t.kind == VarKind::Object ? &model.objects() : &model.concepts());
  std::vector<std::size_t> digit(targets.size(), 0);

  for (;;) {
    Assignment v;
    relalg::Tuple prefix;
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const std::string& d = (*domains[i])[digit[i]];
      v = v.with(targets[i], d);
      prefix.push_back(d);
    }
    Evaluator ev(model, v);
    for (StateHandle s = 0; s < model.state_count(); ++s) {
      if (ev.holds(q.formula, s)) {
        relalg::Tuple row = prefix;
        row.push_back(model.id_of(s));
        out.insert(std::move(row));
      }
    }
    std::size_t i = targets.size();
    while (i > 0) {
      --i;
      if (++digit[i] < domains[i]->size()) break;
      digit[i] = 0;
      if (i == 0) return out;
    }
    if (targets.empty()) return out;
  }
}

}  // namespace modalq::kripke
