#include "modalq/translator.hpp"

#include <numeric>

#include "modalq/errors.hpp"

namespace modalq::translate {

using relalg::CompareOp;
using relalg::Expr;
using syntax::Formula;
using syntax::Term;
using syntax::Variable;

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

// first, first+1, ..., last
std::vector<std::size_t> range(std::size_t first, std::size_t last) {
  if (last < first) return {};
  std::vector<std::size_t> out(last - first + 1);
  std::iota(out.begin(), out.end(), first);
  return out;
}

}  // namespace

VarContext::VarContext(std::vector<Variable> vars) : vars_(std::move(vars)) {
  std::set<Variable> seen;
  for (const auto& v : vars_) {
    if (!seen.insert(v).second) throw UnknownVariable("variable " + syntax::to_string(v) + " repeated in context");
  }
}

std::optional<std::size_t> VarContext::position(const Variable& v) const {
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i] == v) return i + 1;
  }
  return std::nullopt;
}

VarContext VarContext::prepend(const Variable& v) const {
  std::vector<Variable> vars{v};
  vars.insert(vars.end(), vars_.begin(), vars_.end());
  return VarContext(std::move(vars));
}

std::vector<Mutation> all_mutations() {
  return {Mutation::BoxWithoutDuality,      Mutation::LambdaWithoutSubstitution,
          Mutation::ImplicationWithoutNegation, Mutation::ForallAsExists,
          Mutation::NegationWithoutComplement,  Mutation::DiamondReversedProduct,
          Mutation::AbstractionLiteralIndex};
}

std::string to_string(Mutation m) {
  switch (m) {
    case Mutation::None:
      return "none";
    case Mutation::BoxWithoutDuality:
      return "box-without-duality";
    case Mutation::LambdaWithoutSubstitution:
      return "lambda-without-substitution";
    case Mutation::ImplicationWithoutNegation:
      return "implication-without-negation";
    case Mutation::ForallAsExists:
      return "forall-as-exists";
    case Mutation::NegationWithoutComplement:
      return "negation-without-complement";
    case Mutation::DiamondReversedProduct:
      return "diamond-reversed-product";
    case Mutation::AbstractionLiteralIndex:
      return "abstraction-literal-index";
  }
  return "unknown";
}

Signature Signature::of(const kripke::KripkeModel& model) {
  Signature s;
  s.objects.insert(model.objects().begin(), model.objects().end());
  auto rels = model.relation_names();
  s.relations.insert(rels.begin(), rels.end());
  return s;
}

Expr unit() { return relalg::project({}, relalg::base(schema::kSta)); }

bool is_unit(const Expr& e) { return e == unit(); }

Expr cross(Expr a, Expr b) {
  if (is_unit(a)) return b;
  if (is_unit(b)) return a;
  return relalg::product(std::move(a), std::move(b));
}

Translator::Translator(schema::ConceptIndex ci, std::optional<Signature> sig, Options opts)
    : ci_(std::move(ci)), sig_(std::move(sig)), opts_(opts) {}

TermRef Translator::tt(const Term& t, const VarContext& ctx) const {
  auto column_of = [&](const Variable& v) -> TermRef {
    auto pos = ctx.position(v);
    if (!pos) throw UnknownVariable("variable " + syntax::to_string(v) + " is not in the translation context");
    return relalg::Column{*pos};
  };
  return std::visit(
      overloaded{
          [&](const syntax::ObjectConstant& c) -> TermRef {
            if (sig_ && !sig_->objects.contains(c.symbol))
              throw UnknownConstant("unknown object constant '" + c.symbol + "'");
            return relalg::Constant{c.symbol};
          },
          [&](const syntax::ConceptConstant& c) -> TermRef {
            throw UntranslatableTerm("concept constant " + c.symbol + " has no column; relativize it as @" +
                                     c.symbol);
          },
          [&](const syntax::ObjectVariable& v) { return column_of(syntax::object_var(v.name)); },
          [&](const syntax::ConceptVariable& v) { return column_of(syntax::concept_var(v.name)); },
          [&](const syntax::Relativized& r) -> TermRef {
            if (auto* cv = std::get_if<syntax::ConceptVariable>(&r.inner))
              throw UntranslatableTerm("relativized concept variable @%" + cv->name + " has no translation");
            const auto& c = std::get<syntax::ConceptConstant>(r.inner);
            return relalg::Column{ctx.size() + ci_[c.symbol]};
          },
      },
      t);
}

Expr Translator::vt(const VarContext& ctx) const {
  if (ctx.empty()) return unit();
  auto domain = [](const Variable& v) {
    return relalg::base(v.kind == syntax::VarKind::Object ? schema::kObj : schema::kCon);
  };
  Expr e = domain(ctx.vars()[0]);
  for (std::size_t i = 1; i < ctx.size(); ++i) e = relalg::product(std::move(e), domain(ctx.vars()[i]));
  return e;
}

void Translator::check_relation(const std::string& relation) const {
  if (sig_ && !sig_->relations.contains(relation)) throw UnknownRelation("unknown relation " + relation);
}

Expr Translator::atom(const Term& lhs, const Term& rhs, CompareOp op, const VarContext& ctx) const {
  const std::size_t n = ctx.size();
  relalg::SelectionPredicate pred{tt(lhs, ctx), op, tt(rhs, ctx)};
  return relalg::project(range(1, n + 1),
                         relalg::select(std::move(pred), cross(vt(ctx), relalg::base(schema::kSta))));
}

Expr Translator::diamond(const std::string& relation, const Formula& body, const VarContext& ctx) const {
  check_relation(relation);
  const std::size_t n = ctx.size();
  Expr inner = ft(body, ctx);
  Expr joined = opts_.mutation == Mutation::DiamondReversedProduct
                    ? relalg::product(relalg::base(schema::kRel), std::move(inner))
                    : relalg::product(std::move(inner), relalg::base(schema::kRel));
  auto cols = range(1, n);
  cols.push_back(n + 2);
  return relalg::project(std::move(cols),
                         relalg::select(relalg::col_eq(n + 4, relation),
                                        relalg::select(relalg::col_eq(n + 1, n + 3), std::move(joined))));
}

std::pair<Variable, Formula> Translator::unshadow(const Variable& var, const Formula& body,
                                                  const VarContext& ctx) const {
  if (!ctx.contains(var)) return {var, body};
  auto avoid = syntax::all_variables(body);
  avoid.insert(ctx.vars().begin(), ctx.vars().end());
  Variable fresh = syntax::fresh_variable(var, avoid);
  return {fresh, syntax::rename_free(body, var, fresh)};
}

Expr Translator::forall(const Variable& var, const Formula& body, const VarContext& ctx) const {
  if (opts_.forall == ForallStrategy::NotExistsNot)
    return ft(syntax::make_not(syntax::make_exists(var, syntax::make_not(body))), ctx);
  auto [bound, inner] = unshadow(var, body, ctx);
  const std::size_t n = ctx.size();
  Expr u = ft(inner, ctx.prepend(bound));
  auto keep = range(2, n + 2);
  if (opts_.mutation == Mutation::ForallAsExists) return relalg::project(keep, u);
  Expr candidates = relalg::project(keep, u);
  Expr missing = relalg::difference(relalg::product(vt(VarContext({bound})), candidates), u);
  return relalg::difference(candidates, relalg::project(keep, std::move(missing)));
}

Expr Translator::abstraction(const syntax::Abstraction& a, const VarContext& ctx) const {
  if (syntax::is_rigid(a.arg)) {
    // Rigid arguments denote the same value everywhere, so binding is plain
    // substitution.
    if (opts_.mutation == Mutation::LambdaWithoutSubstitution && a.var.kind == syntax::VarKind::Object)
      return ft(syntax::make_exists(a.var, a.body), ctx);
    if (auto* cc = std::get_if<syntax::ObjectConstant>(&a.arg); cc && sig_ && !sig_->objects.contains(cc->symbol))
      throw UnknownConstant("unknown object constant '" + cc->symbol + "'");
    if (auto* cc = std::get_if<syntax::ConceptConstant>(&a.arg); cc && !ci_.contains(cc->symbol))
      throw UnknownConstant("unknown concept constant " + cc->symbol);
    if (syntax::is_variable(a.arg)) tt(a.arg, ctx);
    return ft(syntax::substitute(a.body, a.var, a.arg), ctx);
  }
  const auto& rel = std::get<syntax::Relativized>(a.arg);
  if (auto* cv = std::get_if<syntax::ConceptVariable>(&rel.inner))
    throw UntranslatableTerm("abstraction argument @%" + cv->name + " has no translation");
  const std::string& concept_name = std::get<syntax::ConceptConstant>(rel.inner).symbol;

  auto [bound, inner] = unshadow(a.var, a.body, ctx);
  const std::size_t n = ctx.size();
  Expr u = ft(inner, ctx.prepend(bound));
  std::size_t value_col =
      opts_.mutation == Mutation::AbstractionLiteralIndex ? n + ci_[concept_name] : ci_[concept_name];
  Expr designation = relalg::project({value_col, 1}, relalg::base(schema::kSta));
  return relalg::project(range(2, n + 2),
                         relalg::select(relalg::col_eq(1, n + 3),
                                        relalg::select(relalg::col_eq(n + 2, n + 4),
                                                       relalg::product(std::move(u), std::move(designation)))));
}

Expr Translator::ft(const Formula& f, const VarContext& ctx) const {
  const std::size_t n = ctx.size();
  return std::visit(
      overloaded{
          [&](const syntax::Eq& a) { return atom(a.lhs, a.rhs, CompareOp::Equal, ctx); },
          [&](const syntax::Neq& a) { return atom(a.lhs, a.rhs, CompareOp::NotEqual, ctx); },
          [&](const syntax::Not& neg) {
            if (opts_.mutation == Mutation::NegationWithoutComplement) return ft(neg.body, ctx);
            Expr all = cross(vt(ctx), relalg::project({1}, relalg::base(schema::kSta)));
            return relalg::difference(std::move(all), ft(neg.body, ctx));
          },
          [&](const syntax::And& b) { return relalg::intersect(ft(b.lhs, ctx), ft(b.rhs, ctx)); },
          [&](const syntax::Or& b) { return relalg::unite(ft(b.lhs, ctx), ft(b.rhs, ctx)); },
          [&](const syntax::Implies& b) {
            if (opts_.mutation == Mutation::ImplicationWithoutNegation)
              return relalg::unite(ft(b.lhs, ctx), ft(b.rhs, ctx));
            return ft(syntax::make_or(syntax::make_not(b.lhs), b.rhs), ctx);
          },
          [&](const syntax::Diamond& d) { return diamond(d.relation, d.body, ctx); },
          [&](const syntax::Box& b) {
            check_relation(b.relation);
            if (opts_.mutation == Mutation::BoxWithoutDuality) return diamond(b.relation, b.body, ctx);
            return ft(syntax::make_not(syntax::make_diamond(b.relation, syntax::make_not(b.body))), ctx);
          },
          [&](const syntax::Exists& q) {
            auto [bound, inner] = unshadow(q.var, q.body, ctx);
            return relalg::project(range(2, n + 2), ft(inner, ctx.prepend(bound)));
          },
          [&](const syntax::Forall& q) { return forall(q.var, q.body, ctx); },
          [&](const syntax::Abstraction& a) { return abstraction(a, ctx); },
      },
      f.node().v);
}

TermRef tt(const Term& t, const VarContext& ctx, const schema::ConceptIndex& ci) { return Translator(ci).tt(t, ctx); }

Expr vt(const VarContext& ctx) { return Translator(schema::ConceptIndex({kripke::kIdConcept})).vt(ctx); }

Expr ft(const Formula& f, const VarContext& ctx, const schema::ConceptIndex& ci) { return Translator(ci).ft(f, ctx); }

Expr translate_query(const syntax::ModalQuery& q, const kripke::KripkeModel& model, Options opts) {
  Translator tr(schema::concept_index(model), Signature::of(model), opts);
  Formula body = opts.mutation == Mutation::ImplicationWithoutNegation ? q.formula
                                                                        : syntax::desugar_implications(q.formula);
  return tr.ft(body, VarContext(q.targets));
}

}  // namespace modalq::translate
