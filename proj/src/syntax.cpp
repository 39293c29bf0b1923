#include "modalq/syntax.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <sstream>

#include "modalq/errors.hpp"

namespace modalq::syntax {

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  out += '\'';
  return out;
}

}  // namespace

std::string to_string(const Variable& v) {
  return (v.kind == VarKind::Object ? "?" : "%") + v.name;
}

bool is_object_term(const Term& t) {
  return std::holds_alternative<ObjectConstant>(t) || std::holds_alternative<ObjectVariable>(t) ||
         std::holds_alternative<Relativized>(t);
}

bool is_concept_term(const Term& t) { return !is_object_term(t); }

bool is_variable(const Term& t) {
  return std::holds_alternative<ObjectVariable>(t) || std::holds_alternative<ConceptVariable>(t);
}

bool is_rigid(const Term& t) { return !std::holds_alternative<Relativized>(t); }

VarKind kind_of(const Term& t) { return is_object_term(t) ? VarKind::Object : VarKind::Concept; }

Term as_term(const Variable& v) {
  if (v.kind == VarKind::Object) return ObjectVariable{v.name};
  return ConceptVariable{v.name};
}

const std::string* variable_name(const Term& t) {
  if (auto* ov = std::get_if<ObjectVariable>(&t)) return &ov->name;
  if (auto* cv = std::get_if<ConceptVariable>(&t)) return &cv->name;
  if (auto* r = std::get_if<Relativized>(&t)) {
    if (auto* cv = std::get_if<ConceptVariable>(&r->inner)) return &cv->name;
  }
  return nullptr;
}

std::string render_term(const Term& t) {
  return std::visit(overloaded{
                        [](const ObjectConstant& c) { return quote(c.symbol); },
                        [](const ConceptConstant& c) { return c.symbol; },
                        [](const ObjectVariable& v) { return "?" + v.name; },
                        [](const ConceptVariable& v) { return "%" + v.name; },
                        [](const Relativized& r) {
                          return std::visit(overloaded{
                                                [](const ConceptConstant& c) { return "@" + c.symbol; },
                                                [](const ConceptVariable& v) { return "@%" + v.name; },
                                            },
                                            r.inner);
                        },
                    },
                    t);
}

Formula::Formula(FormulaNode node) : node_(std::make_shared<const FormulaNode>(std::move(node))) {}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  return a.node_->v == b.node_->v;
}

Formula make_eq(Term lhs, Term rhs) { return Formula({Eq{std::move(lhs), std::move(rhs)}}); }
Formula make_neq(Term lhs, Term rhs) { return Formula({Neq{std::move(lhs), std::move(rhs)}}); }
Formula make_not(Formula body) { return Formula({Not{std::move(body)}}); }
Formula make_and(Formula lhs, Formula rhs) { return Formula({And{std::move(lhs), std::move(rhs)}}); }
Formula make_or(Formula lhs, Formula rhs) { return Formula({Or{std::move(lhs), std::move(rhs)}}); }
Formula make_implies(Formula lhs, Formula rhs) { return Formula({Implies{std::move(lhs), std::move(rhs)}}); }
Formula make_diamond(std::string relation, Formula body) {
  return Formula({Diamond{std::move(relation), std::move(body)}});
}
Formula make_box(std::string relation, Formula body) { return Formula({Box{std::move(relation), std::move(body)}}); }
Formula make_exists(Variable var, Formula body) { return Formula({Exists{std::move(var), std::move(body)}}); }
Formula make_forall(Variable var, Formula body) { return Formula({Forall{std::move(var), std::move(body)}}); }
Formula make_abstraction(Variable var, Formula body, Term arg) {
  return Formula({Abstraction{std::move(var), std::move(body), std::move(arg)}});
}

void check_kinds(const Formula& f) {
  std::visit(overloaded{
                 [](const Eq& a) {
                   if (!is_object_term(a.lhs) || !is_object_term(a.rhs))
                     throw KindError({}, "equality operands must be object terms");
                 },
                 [](const Neq& a) {
                   if (!is_object_term(a.lhs) || !is_object_term(a.rhs))
                     throw KindError({}, "inequality operands must be object terms");
                 },
                 [](const Not& n) { check_kinds(n.body); },
                 [](const And& b) { check_kinds(b.lhs), check_kinds(b.rhs); },
                 [](const Or& b) { check_kinds(b.lhs), check_kinds(b.rhs); },
                 [](const Implies& b) { check_kinds(b.lhs), check_kinds(b.rhs); },
                 [](const Diamond& m) { check_kinds(m.body); },
                 [](const Box& m) { check_kinds(m.body); },
                 [](const Exists& q) { check_kinds(q.body); },
                 [](const Forall& q) { check_kinds(q.body); },
                 [](const Abstraction& a) {
                   if (a.var.kind != kind_of(a.arg))
                     throw KindError({}, "abstraction binder " + to_string(a.var) + " and argument " +
                                             render_term(a.arg) + " differ in kind");
                   check_kinds(a.body);
                 },
             },
             f.node().v);
}

namespace {

std::optional<Variable> term_variable(const Term& t) {
  if (auto* ov = std::get_if<ObjectVariable>(&t)) return object_var(ov->name);
  if (auto* cv = std::get_if<ConceptVariable>(&t)) return concept_var(cv->name);
  if (auto* r = std::get_if<Relativized>(&t)) {
    if (auto* cv = std::get_if<ConceptVariable>(&r->inner)) return concept_var(cv->name);
  }
  return std::nullopt;
}

void collect_free(const Formula& f, std::vector<Variable>& bound, std::vector<Variable>& out) {
  auto visit_term = [&](const Term& t) {
    auto v = term_variable(t);
    if (!v) return;
    if (std::find(bound.begin(), bound.end(), *v) != bound.end()) return;
    if (std::find(out.begin(), out.end(), *v) == out.end()) out.push_back(*v);
  };
  auto scoped = [&](const Variable& var, const Formula& body) {
    bound.push_back(var);
    collect_free(body, bound, out);
    bound.pop_back();
  };
  std::visit(overloaded{
                 [&](const Eq& a) { visit_term(a.lhs), visit_term(a.rhs); },
                 [&](const Neq& a) { visit_term(a.lhs), visit_term(a.rhs); },
                 [&](const Not& n) { collect_free(n.body, bound, out); },
                 [&](const And& b) { collect_free(b.lhs, bound, out), collect_free(b.rhs, bound, out); },
                 [&](const Or& b) { collect_free(b.lhs, bound, out), collect_free(b.rhs, bound, out); },
                 [&](const Implies& b) { collect_free(b.lhs, bound, out), collect_free(b.rhs, bound, out); },
                 [&](const Diamond& m) { collect_free(m.body, bound, out); },
                 [&](const Box& m) { collect_free(m.body, bound, out); },
                 [&](const Exists& q) { scoped(q.var, q.body); },
                 [&](const Forall& q) { scoped(q.var, q.body); },
                 [&](const Abstraction& a) {
                   scoped(a.var, a.body);
                   visit_term(a.arg);
                 },
             },
             f.node().v);
}

}  // namespace

std::vector<Variable> free_vars(const Formula& f) {
  std::vector<Variable> bound, out;
  collect_free(f, bound, out);
  return out;
}

bool occurs_free(const Variable& v, const Formula& f) {
  auto fv = free_vars(f);
  return std::find(fv.begin(), fv.end(), v) != fv.end();
}

int depth(const Formula& f) {
  return std::visit(overloaded{
                        [](const Eq&) { return 0; },
                        [](const Neq&) { return 0; },
                        [](const Not& n) { return 1 + depth(n.body); },
                        [](const And& b) { return 1 + std::max(depth(b.lhs), depth(b.rhs)); },
                        [](const Or& b) { return 1 + std::max(depth(b.lhs), depth(b.rhs)); },
                        [](const Implies& b) { return 1 + std::max(depth(b.lhs), depth(b.rhs)); },
                        [](const Diamond& m) { return 1 + depth(m.body); },
                        [](const Box& m) { return 1 + depth(m.body); },
                        [](const Exists& q) { return 1 + depth(q.body); },
                        [](const Forall& q) { return 1 + depth(q.body); },
                        [](const Abstraction& a) { return 1 + depth(a.body); },
                    },
                    f.node().v);
}

std::size_t size(const Formula& f) {
  return std::visit(overloaded{
                        [](const Eq&) -> std::size_t { return 1; },
                        [](const Neq&) -> std::size_t { return 1; },
                        [](const Not& n) { return 1 + size(n.body); },
                        [](const And& b) { return 1 + size(b.lhs) + size(b.rhs); },
                        [](const Or& b) { return 1 + size(b.lhs) + size(b.rhs); },
                        [](const Implies& b) { return 1 + size(b.lhs) + size(b.rhs); },
                        [](const Diamond& m) { return 1 + size(m.body); },
                        [](const Box& m) { return 1 + size(m.body); },
                        [](const Exists& q) { return 1 + size(q.body); },
                        [](const Forall& q) { return 1 + size(q.body); },
                        [](const Abstraction& a) { return 1 + size(a.body); },
                    },
                    f.node().v);
}

namespace {

bool is_binary(const Formula& f) { return f.is<And>() || f.is<Or>() || f.is<Implies>(); }
bool is_quantifier(const Formula& f) { return f.is<Exists>() || f.is<Forall>(); }

// Binary operands and prefix-operator bodies get parentheses when they are
// binary or open to the right (quantifier scope extends maximally).
std::string render_operand(const Formula& f) {
  std::string s = render_formula(f);
  if (is_binary(f) || is_quantifier(f)) return "(" + s + ")";
  return s;
}

}  // namespace

std::string render_formula(const Formula& f) {
  return std::visit(
      overloaded{
          [](const Eq& a) { return render_term(a.lhs) + " = " + render_term(a.rhs); },
          [](const Neq& a) { return render_term(a.lhs) + " != " + render_term(a.rhs); },
          [](const Not& n) { return "!" + render_operand(n.body); },
          [](const And& b) { return render_operand(b.lhs) + " & " + render_operand(b.rhs); },
          [](const Or& b) { return render_operand(b.lhs) + " | " + render_operand(b.rhs); },
          [](const Implies& b) { return render_operand(b.lhs) + " -> " + render_operand(b.rhs); },
          [](const Diamond& m) { return "<" + m.relation + "> " + render_operand(m.body); },
          [](const Box& m) { return "[" + m.relation + "] " + render_operand(m.body); },
          [](const Exists& q) { return "exists " + to_string(q.var) + " . " + render_formula(q.body); },
          [](const Forall& q) { return "forall " + to_string(q.var) + " . " + render_formula(q.body); },
          [](const Abstraction& a) {
            return "<lam " + to_string(a.var) + " . " + render_formula(a.body) + ">(" + render_term(a.arg) + ")";
          },
      },
      f.node().v);
}

std::set<Variable> all_variables(const Formula& f) {
  std::set<Variable> out;
  auto add_term = [&](const Term& t) {
    if (auto v = term_variable(t)) out.insert(*v);
  };
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    std::visit(overloaded{
                   [&](const Eq& a) { add_term(a.lhs), add_term(a.rhs); },
                   [&](const Neq& a) { add_term(a.lhs), add_term(a.rhs); },
                   [&](const Not& n) { walk(n.body); },
                   [&](const And& b) { walk(b.lhs), walk(b.rhs); },
                   [&](const Or& b) { walk(b.lhs), walk(b.rhs); },
                   [&](const Implies& b) { walk(b.lhs), walk(b.rhs); },
                   [&](const Diamond& m) { walk(m.body); },
                   [&](const Box& m) { walk(m.body); },
                   [&](const Exists& q) { out.insert(q.var), walk(q.body); },
                   [&](const Forall& q) { out.insert(q.var), walk(q.body); },
                   [&](const Abstraction& a) { out.insert(a.var), walk(a.body), add_term(a.arg); },
               },
               g.node().v);
  };
  walk(f);
  return out;
}

Variable fresh_variable(const Variable& base, const std::set<Variable>& avoid) {
  for (int i = 1;; ++i) {
    Variable candidate{base.name + "_" + std::to_string(i), base.kind};
    if (!avoid.contains(candidate)) return candidate;
  }
}

namespace {

Term substitute_term(const Term& t, const Variable& var, const Term& replacement) {
  if (var.kind == VarKind::Object) {
    if (auto* ov = std::get_if<ObjectVariable>(&t); ov && ov->name == var.name) return replacement;
    return t;
  }
  if (auto* cv = std::get_if<ConceptVariable>(&t); cv && cv->name == var.name) return replacement;
  if (auto* r = std::get_if<Relativized>(&t)) {
    if (auto* cv = std::get_if<ConceptVariable>(&r->inner); cv && cv->name == var.name) {
      if (auto* cc = std::get_if<ConceptConstant>(&replacement)) return Relativized{*cc};
      if (auto* rv = std::get_if<ConceptVariable>(&replacement)) return Relativized{*rv};
      throw KindError({}, "cannot relativize " + render_term(replacement));
    }
  }
  return t;
}

}  // namespace

Formula substitute(const Formula& f, const Variable& var, const Term& replacement) {
  if (kind_of(replacement) != var.kind || !is_rigid(replacement))
    throw KindError({}, "substitution of " + render_term(replacement) + " for " + to_string(var));
  auto captured = term_variable(replacement);

  // Handles a binder scope: returns the (possibly renamed) binder and body.
  auto under_binder = [&](const Variable& binder, const Formula& body) -> std::pair<Variable, Formula> {
    if (binder == var || !occurs_free(var, body)) return {binder, body};
    if (captured && *captured == binder) {
      auto avoid = all_variables(body);
      avoid.insert(var);
      avoid.insert(*captured);
      Variable renamed = fresh_variable(binder, avoid);
      Formula body2 = rename_free(body, binder, renamed);
      return {renamed, substitute(body2, var, replacement)};
    }
    return {binder, substitute(body, var, replacement)};
  };

  return std::visit(
      overloaded{
          [&](const Eq& a) {
            return make_eq(substitute_term(a.lhs, var, replacement), substitute_term(a.rhs, var, replacement));
          },
          [&](const Neq& a) {
            return make_neq(substitute_term(a.lhs, var, replacement), substitute_term(a.rhs, var, replacement));
          },
          [&](const Not& n) { return make_not(substitute(n.body, var, replacement)); },
          [&](const And& b) {
            return make_and(substitute(b.lhs, var, replacement), substitute(b.rhs, var, replacement));
          },
          [&](const Or& b) {
            return make_or(substitute(b.lhs, var, replacement), substitute(b.rhs, var, replacement));
          },
          [&](const Implies& b) {
            return make_implies(substitute(b.lhs, var, replacement), substitute(b.rhs, var, replacement));
          },
          [&](const Diamond& m) { return make_diamond(m.relation, substitute(m.body, var, replacement)); },
          [&](const Box& m) { return make_box(m.relation, substitute(m.body, var, replacement)); },
          [&](const Exists& q) {
            auto [binder, body] = under_binder(q.var, q.body);
            return make_exists(binder, body);
          },
          [&](const Forall& q) {
            auto [binder, body] = under_binder(q.var, q.body);
            return make_forall(binder, body);
          },
          [&](const Abstraction& a) {
            auto [binder, body] = under_binder(a.var, a.body);
            return make_abstraction(binder, body, substitute_term(a.arg, var, replacement));
          },
      },
      f.node().v);
}

Formula rename_free(const Formula& f, const Variable& from, const Variable& to) {
  return substitute(f, from, as_term(to));
}

Formula desugar_implications(const Formula& f) {
  return std::visit(
      overloaded{
          [&](const Eq&) { return f; },
          [&](const Neq&) { return f; },
          [](const Not& n) { return make_not(desugar_implications(n.body)); },
          [](const And& b) { return make_and(desugar_implications(b.lhs), desugar_implications(b.rhs)); },
          [](const Or& b) { return make_or(desugar_implications(b.lhs), desugar_implications(b.rhs)); },
          [](const Implies& b) {
            return make_or(make_not(desugar_implications(b.lhs)), desugar_implications(b.rhs));
          },
          [](const Diamond& m) { return make_diamond(m.relation, desugar_implications(m.body)); },
          [](const Box& m) { return make_box(m.relation, desugar_implications(m.body)); },
          [](const Exists& q) { return make_exists(q.var, desugar_implications(q.body)); },
          [](const Forall& q) { return make_forall(q.var, desugar_implications(q.body)); },
          [](const Abstraction& a) { return make_abstraction(a.var, desugar_implications(a.body), a.arg); },
      },
      f.node().v);
}

ModalQuery make_query(Formula formula, std::vector<Variable> targets) {
  std::set<Variable> seen;
  for (const auto& t : targets) {
    if (!seen.insert(t).second) throw FreeVarMismatch("target " + to_string(t) + " listed twice");
  }
  auto fv = free_vars(formula);
  std::set<Variable> free(fv.begin(), fv.end());
  if (free != seen) {
    std::ostringstream msg;
    msg << "target list must equal the free variables {";
    for (std::size_t i = 0; i < fv.size(); ++i) msg << (i ? ", " : "") << to_string(fv[i]);
    msg << "}";
    throw FreeVarMismatch(msg.str());
  }
  return ModalQuery{std::move(formula), std::move(targets)};
}

}  // namespace modalq::syntax
