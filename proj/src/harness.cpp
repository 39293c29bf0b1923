#include "modalq/harness.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "modalq/errors.hpp"
#include "modalq/model_io.hpp"
#include "modalq/schema_map.hpp"
#include "modalq/tsv.hpp"

namespace modalq::harness {

using kripke::KripkeModel;
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

std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

int between(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

template <typename T>
const T& pick_from(Rng& rng, const std::vector<T>& v) {
  return v[pick(rng, v.size())];
}

const std::vector<std::string> kObjectPool = {"1", "2", "3", "4", "5", "6", "7", "8", "9", "a", "b",
                                              "c", "d", "e", "f", "g", "h", "k", "m", "n", "p", "q"};
const std::vector<std::string> kConceptPool = {"code", "color", "alpha", "zone", "mass"};
const std::vector<std::string> kRelationPool = {"COMP", "NEXT", "PART", "SEE"};
const std::vector<std::string> kObjectVarNames = {"x", "y", "z"};
const std::vector<std::string> kConceptVarNames = {"a", "b"};

}  // namespace

void GenParams::validate() const {
  if (max_states < 1 || max_objects < 1 || max_concepts < 1 || max_relations < 1 || max_depth < 0 ||
      max_free_vars < 0 || max_binders < 0)
    throw std::invalid_argument("generator bounds must be positive");
  if (max_objects < max_states) throw std::invalid_argument("max_objects must be at least max_states");
  if (static_cast<std::size_t>(max_objects) > kObjectPool.size())
    throw std::invalid_argument("max_objects exceeds " + std::to_string(kObjectPool.size()));
  if (static_cast<std::size_t>(max_concepts) > kConceptPool.size() + 1)
    throw std::invalid_argument("max_concepts exceeds " + std::to_string(kConceptPool.size() + 1));
  if (static_cast<std::size_t>(max_relations) > kRelationPool.size())
    throw std::invalid_argument("max_relations exceeds " + std::to_string(kRelationPool.size()));
}

std::uint64_t case_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over (seed, index)
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

KripkeModel gen_model(const GenParams& p) {
  Rng rng(p.seed);
  return gen_model(p, rng);
}

KripkeModel gen_model(const GenParams& p, Rng& rng) {
  p.validate();
  const int n_states = between(rng, 1, p.max_states);
  const int n_objects = between(rng, n_states, p.max_objects);

  std::vector<std::string> pool = kObjectPool;
  std::shuffle(pool.begin(), pool.end(), rng);
  std::vector<std::string> objects(pool.begin(), pool.begin() + n_objects);

  // The first n_states shuffled objects become the state ids.
  std::vector<std::string> ids = objects;
  std::shuffle(ids.begin(), ids.end(), rng);
  ids.resize(n_states);

  std::vector<std::string> concept_pool = kConceptPool;
  std::shuffle(concept_pool.begin(), concept_pool.end(), rng);
  const int n_concepts = between(rng, 1, p.max_concepts);
  std::vector<std::string> concepts(concept_pool.begin(), concept_pool.begin() + (n_concepts - 1));
  concepts.insert(concepts.begin() + static_cast<std::ptrdiff_t>(pick(rng, concepts.size() + 1)),
                  kripke::kIdConcept);

  std::vector<kripke::StateRecord> states;
  for (int s = 0; s < n_states; ++s) {
    kripke::StateRecord rec;
    for (const auto& c : concepts) {
      if (c == kripke::kIdConcept) {
        rec.emplace(c, ids[s]);
      } else if (s > 0 && chance(rng, 0.3)) {
        // Repeat an earlier state's value so equalities across states occur.
        rec.emplace(c, states[pick(rng, states.size())].at(c));
      } else {
        rec.emplace(c, pick_from(rng, objects));
      }
    }
    states.push_back(std::move(rec));
  }

  std::vector<std::string> rel_pool = kRelationPool;
  std::shuffle(rel_pool.begin(), rel_pool.end(), rng);
  const int n_relations = between(rng, 1, p.max_relations);
  kripke::EdgeList edges;
  for (int r = 0; r < n_relations; ++r) {
    const double density = std::vector<double>{0.1, 0.25, 0.45}[pick(rng, 3)];
    auto& list = edges[rel_pool[r]];
    for (int s = 0; s < n_states; ++s) {
      for (int t = 0; t < n_states; ++t) {
        if (chance(rng, density)) list.emplace_back(ids[s], ids[t]);
      }
    }
  }
  return KripkeModel::create(std::move(objects), std::move(concepts), std::move(states), edges);
}

namespace {

struct ScopedVar {
  Variable var;
  // Concept variables bound (directly or transitively) to a concept constant
  // may be relativized and still translate after substitution.
  bool relativizable = false;
};

class FormulaGen {
 public:
  FormulaGen(const GenParams& p, const KripkeModel& m, Rng& rng)
      : p_(p), m_(m), rng_(rng), relations_(m.relation_names()) {}

  void push(ScopedVar v) { scope_.push_back(std::move(v)); }

  Formula gen(int depth) {
    if (depth <= 0 || chance(rng_, 0.15)) return atom();

    enum Ctor { kNot, kAnd, kOr, kImplies, kDiamond, kBox, kExists, kForall, kLambda };
    std::vector<std::pair<Ctor, double>> options = {{kNot, 2},     {kAnd, 3},     {kOr, 3},
                                                    {kImplies, 1}, {kDiamond, 2.5}, {kBox, 2.5}};
    if (binders_ < p_.max_binders) {
      options.push_back({kExists, 1.5});
      options.push_back({kForall, 1.5});
      if (p_.allow_lambda) options.push_back({kLambda, 2});
    }
    std::vector<double> weights;
    for (auto& [_, w] : options) weights.push_back(w);
    Ctor ctor = options[std::discrete_distribution<std::size_t>(weights.begin(), weights.end())(rng_)].first;

    switch (ctor) {
      case kNot:
        return syntax::make_not(gen(depth - 1));
      case kAnd:
        return syntax::make_and(gen(depth - 1), gen(depth - 1));
      case kOr:
        return syntax::make_or(gen(depth - 1), gen(depth - 1));
      case kImplies:
        return syntax::make_implies(gen(depth - 1), gen(depth - 1));
      case kDiamond:
        return syntax::make_diamond(pick_from(rng_, relations_), gen(depth - 1));
      case kBox:
        return syntax::make_box(pick_from(rng_, relations_), gen(depth - 1));
      case kExists:
      case kForall: {
        Variable v = binder_var();
        Formula body = scoped({v, false}, depth - 1);
        return ctor == kExists ? syntax::make_exists(v, body) : syntax::make_forall(v, body);
      }
      case kLambda:
        return lambda(depth);
    }
    return atom();
  }

  Formula atom() {
    Term lhs = object_term();
    Term rhs = object_term();
    if (chance(rng_, 0.6)) return syntax::make_eq(std::move(lhs), std::move(rhs));
    return syntax::make_neq(std::move(lhs), std::move(rhs));
  }

 private:
  std::vector<ScopedVar> visible(VarKind kind) const {
    std::vector<ScopedVar> out;
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->var.kind != kind) continue;
      bool shadowed = std::any_of(out.begin(), out.end(), [&](const ScopedVar& o) { return o.var == it->var; });
      if (!shadowed) out.push_back(*it);
    }
    return out;
  }

  Term object_term() {
    auto vars = visible(VarKind::Object);
    std::vector<ScopedVar> rel_vars;
    for (auto& c : visible(VarKind::Concept)) {
      if (c.relativizable) rel_vars.push_back(c);
    }
    std::vector<double> w = {2, 3, vars.empty() ? 0.0 : 3.0, rel_vars.empty() ? 0.0 : 2.0};
    switch (std::discrete_distribution<int>(w.begin(), w.end())(rng_)) {
      case 0:
        return syntax::ObjectConstant{pick_from(rng_, m_.objects())};
      case 1:
        return syntax::Relativized{syntax::ConceptConstant{pick_from(rng_, m_.concepts())}};
      case 2:
        return syntax::ObjectVariable{pick_from(rng_, vars).var.name};
      default:
        return syntax::Relativized{syntax::ConceptVariable{pick_from(rng_, rel_vars).var.name}};
    }
  }

  Variable binder_var() {
    if (p_.allow_concept_vars && chance(rng_, 0.25)) return syntax::concept_var(pick_from(rng_, kConceptVarNames));
    return syntax::object_var(pick_from(rng_, kObjectVarNames));
  }

  Formula scoped(ScopedVar v, int depth) {
    scope_.push_back(std::move(v));
    ++binders_;
    Formula body = gen(depth);
    --binders_;
    scope_.pop_back();
    return body;
  }

  Formula lambda(int depth) {
    if (p_.allow_concept_vars && chance(rng_, 0.25)) {
      Variable v = syntax::concept_var(pick_from(rng_, kConceptVarNames));
      auto vars = visible(VarKind::Concept);
      if (!vars.empty() && chance(rng_, 0.3)) {
        const ScopedVar& arg = pick_from(rng_, vars);
        Formula body = scoped({v, arg.relativizable}, depth - 1);
        return syntax::make_abstraction(v, body, syntax::ConceptVariable{arg.var.name});
      }
      Formula body = scoped({v, true}, depth - 1);
      return syntax::make_abstraction(v, body, syntax::ConceptConstant{pick_from(rng_, m_.concepts())});
    }
    Variable v = syntax::object_var(pick_from(rng_, kObjectVarNames));
    Term arg = syntax::Relativized{syntax::ConceptConstant{pick_from(rng_, m_.concepts())}};
    auto vars = visible(VarKind::Object);
    double roll = std::uniform_real_distribution<double>(0, 1)(rng_);
    if (roll < 0.2) {
      arg = syntax::ObjectConstant{pick_from(rng_, m_.objects())};
    } else if (roll < 0.4 && !vars.empty()) {
      arg = syntax::ObjectVariable{pick_from(rng_, vars).var.name};
    }
    Formula body = scoped({v, false}, depth - 1);
    return syntax::make_abstraction(v, body, std::move(arg));
  }

  const GenParams& p_;
  const KripkeModel& m_;
  Rng& rng_;
  std::vector<std::string> relations_;
  std::vector<ScopedVar> scope_;
  int binders_ = 0;
};

std::vector<Variable> shuffled_free_vars(const Formula& f, Rng& rng) {
  auto fv = syntax::free_vars(f);
  std::shuffle(fv.begin(), fv.end(), rng);
  return fv;
}

std::vector<Variable> random_free_scope(const GenParams& p, Rng& rng) {
  std::vector<Variable> out;
  const int k = between(rng, 0, p.max_free_vars);
  std::vector<std::string> names = kObjectVarNames;
  std::shuffle(names.begin(), names.end(), rng);
  for (int i = 0; i < k && i < static_cast<int>(names.size()); ++i) {
    if (p.allow_concept_vars && chance(rng, 0.15)) {
      out.push_back(syntax::concept_var(kConceptVarNames[i % kConceptVarNames.size()]));
    } else {
      out.push_back(syntax::object_var(names[i]));
    }
  }
  return out;
}

}  // namespace

Formula gen_formula(const GenParams& p, const KripkeModel& model, Rng& rng, const std::vector<Variable>& scope,
                    int depth) {
  FormulaGen g(p, model, rng);
  for (const auto& v : scope) g.push({v, false});
  return g.gen(depth);
}

syntax::ModalQuery gen_query(const GenParams& p, const KripkeModel& model) {
  Rng rng(case_seed(p.seed, 0xfeed));
  return gen_query(p, model, rng);
}

syntax::ModalQuery gen_query(const GenParams& p, const KripkeModel& model, Rng& rng) {
  p.validate();
  auto scope = random_free_scope(p, rng);
  // Mostly deep formulas; the atom probability below keeps subtrees ragged.
  const int depth = chance(rng, 0.1)   ? 0
                    : chance(rng, 0.5) ? p.max_depth
                                       : between(rng, std::min(1, p.max_depth), p.max_depth);
  Formula f = gen_formula(p, model, rng, scope, depth);
  auto targets = shuffled_free_vars(f, rng);
  return syntax::make_query(std::move(f), std::move(targets));
}

std::string fingerprint(const KripkeModel& model) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : kripke::model_to_json(model)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << h;
  return out.str();
}

std::string describe_query(const syntax::ModalQuery& q) {
  std::string s = syntax::render_formula(q.formula) + "  targets=[";
  for (std::size_t i = 0; i < q.targets.size(); ++i) s += (i ? "," : "") + syntax::to_string(q.targets[i]);
  return s + "]";
}

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace

CorrespondenceReport check(const KripkeModel& model, const syntax::ModalQuery& q, translate::Options opts) {
  CorrespondenceReport r;
  r.model_fingerprint = fingerprint(model);
  r.query = describe_query(q);

  auto start = std::chrono::steady_clock::now();
  try {
    r.direct = kripke::answer_direct(model, q);
  } catch (const std::exception& e) {
    r.error = std::string("direct engine: ") + e.what();
  }
  r.direct_ms = elapsed_ms(start);

  start = std::chrono::steady_clock::now();
  try {
    auto expr = translate::translate_query(q, model, opts);
    r.algebra = relalg::eval(expr, schema::build_database(model).tables);
  } catch (const std::exception& e) {
    if (!r.error.empty()) r.error += "; ";
    r.error += std::string("algebra engine: ") + e.what();
  }
  r.algebra_ms = elapsed_ms(start);

  if (!r.direct || !r.algebra) return r;
  r.equal = *r.direct == *r.algebra;
  if (!r.equal) {
    for (const auto& t : *r.direct) {
      if (!r.algebra->contains(t)) {
        r.witness = t;
        r.witness_side = "direct";
        return r;
      }
    }
    for (const auto& t : *r.algebra) {
      if (!r.direct->contains(t)) {
        r.witness = t;
        r.witness_side = "algebra";
        return r;
      }
    }
  }
  return r;
}

namespace {

Formula rebuild_unary(const Formula& parent, Formula child) {
  return std::visit(overloaded{
                        [&](const syntax::Not&) { return syntax::make_not(std::move(child)); },
                        [&](const syntax::Diamond& d) { return syntax::make_diamond(d.relation, std::move(child)); },
                        [&](const syntax::Box& b) { return syntax::make_box(b.relation, std::move(child)); },
                        [&](const syntax::Exists& q) { return syntax::make_exists(q.var, std::move(child)); },
                        [&](const syntax::Forall& q) { return syntax::make_forall(q.var, std::move(child)); },
                        [&](const syntax::Abstraction& a) {
                          return syntax::make_abstraction(a.var, std::move(child), a.arg);
                        },
                        [&](const auto&) { return parent; },
                    },
                    parent.node().v);
}

// Every formula obtained by replacing one subformula with one of its children.
std::vector<Formula> reductions(const Formula& f) {
  std::vector<Formula> out;
  auto binary = [&](const Formula& l, const Formula& r, auto make) {
    out.push_back(l);
    out.push_back(r);
    for (auto& l2 : reductions(l)) out.push_back(make(l2, r));
    for (auto& r2 : reductions(r)) out.push_back(make(l, r2));
  };
  auto unary = [&](const Formula& body) {
    out.push_back(body);
    for (auto& b2 : reductions(body)) out.push_back(rebuild_unary(f, b2));
  };
  std::visit(overloaded{
                 [](const syntax::Eq&) {},
                 [](const syntax::Neq&) {},
                 [&](const syntax::Not& n) { unary(n.body); },
                 [&](const syntax::And& b) { binary(b.lhs, b.rhs, syntax::make_and); },
                 [&](const syntax::Or& b) { binary(b.lhs, b.rhs, syntax::make_or); },
                 [&](const syntax::Implies& b) { binary(b.lhs, b.rhs, syntax::make_implies); },
                 [&](const syntax::Diamond& d) { unary(d.body); },
                 [&](const syntax::Box& b) { unary(b.body); },
                 [&](const syntax::Exists& q) { unary(q.body); },
                 [&](const syntax::Forall& q) { unary(q.body); },
                 [&](const syntax::Abstraction& a) { unary(a.body); },
             },
             f.node().v);
  return out;
}

// Keeps the surviving targets in their original order, then any new free
// variables in first-occurrence order.
syntax::ModalQuery requery(const syntax::ModalQuery& original, Formula f) {
  auto fv = syntax::free_vars(f);
  std::vector<Variable> targets;
  for (const auto& t : original.targets) {
    if (std::find(fv.begin(), fv.end(), t) != fv.end()) targets.push_back(t);
  }
  for (const auto& v : fv) {
    if (std::find(targets.begin(), targets.end(), v) == targets.end()) targets.push_back(v);
  }
  return syntax::make_query(std::move(f), std::move(targets));
}

std::optional<KripkeModel> try_create(std::vector<std::string> objects, std::vector<std::string> concepts,
                                      std::vector<kripke::StateRecord> states, const kripke::EdgeList& edges) {
  try {
    return KripkeModel::create(std::move(objects), std::move(concepts), std::move(states), edges);
  } catch (const ModelInvariantError&) {
    return std::nullopt;
  }
}

}  // namespace

Counterexample shrink(Counterexample cx, translate::Options opts) {
  // A step must keep the failure's shape: the same engines answer or raise.
  const bool direct_ok = cx.report.direct.has_value();
  const bool algebra_ok = cx.report.algebra.has_value();
  auto still_fails = [&](const KripkeModel& m, const syntax::ModalQuery& q) -> std::optional<CorrespondenceReport> {
    auto r = check(m, q, opts);
    if (r.equal || r.direct.has_value() != direct_ok || r.algebra.has_value() != algebra_ok) return std::nullopt;
    return r;
  };
  auto accept = [&](KripkeModel m, syntax::ModalQuery q, CorrespondenceReport r) {
    cx.model = std::move(m);
    cx.query = std::move(q);
    cx.report = std::move(r);
  };

  for (bool progress = true; progress;) {
    progress = false;
    const auto records = cx.model.state_records();
    const auto edges = cx.model.edge_list();
    const auto& objects = cx.model.objects();
    const auto& concepts = cx.model.concepts();

    // States, last first.
    for (std::size_t s = records.size(); s-- > 0 && !progress && records.size() > 1;) {
      const std::string& id = records[s].at(kripke::kIdConcept);
      auto fewer = records;
      fewer.erase(fewer.begin() + static_cast<std::ptrdiff_t>(s));
      kripke::EdgeList kept;
      for (const auto& [name, pairs] : edges) {
        auto& list = kept[name];
        for (const auto& e : pairs) {
          if (e.first != id && e.second != id) list.push_back(e);
        }
      }
      if (auto m = try_create(objects, concepts, fewer, kept)) {
        if (auto r = still_fails(*m, cx.query)) {
          accept(std::move(*m), cx.query, std::move(*r));
          progress = true;
        }
      }
    }
    if (progress) continue;

    for (const auto& [name, pairs] : edges) {
      for (std::size_t i = 0; i < pairs.size() && !progress; ++i) {
        auto kept = edges;
        kept[name].erase(kept[name].begin() + static_cast<std::ptrdiff_t>(i));
        if (auto m = try_create(objects, concepts, records, kept)) {
          if (auto r = still_fails(*m, cx.query)) {
            accept(std::move(*m), cx.query, std::move(*r));
            progress = true;
          }
        }
      }
      if (progress) break;
    }
    if (progress) continue;

    for (std::size_t i = 0; i < objects.size() && !progress && objects.size() > 1; ++i) {
      auto fewer = objects;
      fewer.erase(fewer.begin() + static_cast<std::ptrdiff_t>(i));
      if (auto m = try_create(fewer, concepts, records, edges)) {
        if (auto r = still_fails(*m, cx.query)) {
          accept(std::move(*m), cx.query, std::move(*r));
          progress = true;
        }
      }
    }
    if (progress) continue;

    for (auto& smaller : reductions(cx.query.formula)) {
      auto q = requery(cx.query, smaller);
      if (auto r = still_fails(cx.model, q)) {
        accept(cx.model, std::move(q), std::move(*r));
        progress = true;
        break;
      }
    }
  }
  return cx;
}

CampaignSummary run_campaign(const GenParams& p, std::size_t cases, translate::Options opts,
                             bool shrink_counterexample) {
  if (cases == 0) throw std::invalid_argument("a campaign needs at least one case");
  p.validate();
  auto start = std::chrono::steady_clock::now();

  CampaignSummary s;
  s.seed = p.seed;
  s.cases = cases;
  for (std::size_t i = 0; i < cases; ++i) {
    Rng rng(case_seed(p.seed, i));
    KripkeModel model = gen_model(p, rng);
    syntax::ModalQuery q = gen_query(p, model, rng);
    s.lemma_violations += schema::validate_instance(schema::build_database(model)).size();
    CorrespondenceReport r = check(model, q, opts);
    if (r.equal) {
      ++s.passed;
      continue;
    }
    ++s.failed;
    if (!s.first_counterexample) s.first_counterexample = Counterexample{model, q, r, i};
  }
  if (s.first_counterexample && shrink_counterexample)
    s.first_counterexample = shrink(std::move(*s.first_counterexample), opts);
  s.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return s;
}

namespace {

std::string inline_relation(const std::optional<relalg::Relation>& r) {
  if (!r) return "(error)";
  std::string out = "{";
  bool first = true;
  for (const auto& t : *r) {
    out += first ? "<" : ", <";
    first = false;
    for (std::size_t j = 0; j < t.size(); ++j) out += (j ? "," : "") + t[j];
    out += ">";
  }
  return out + "}";
}

std::string inline_tuple(const relalg::Tuple& t) {
  std::string out = "<";
  for (std::size_t j = 0; j < t.size(); ++j) out += (j ? "," : "") + t[j];
  return out + ">";
}

}  // namespace

std::string render_summary(const CampaignSummary& s) {
  std::ostringstream out;
  out << "seed: " << s.seed << '\n'
      << "cases: " << s.cases << '\n'
      << "passed: " << s.passed << '\n'
      << "failed: " << s.failed << '\n'
      << "lemma-violations: " << s.lemma_violations << '\n';
  if (const auto& cx = s.first_counterexample) {
    out << "counterexample: case " << cx->case_index << '\n'
        << "  query: " << cx->report.query << '\n'
        << "  model: " << cx->report.model_fingerprint << '\n'
        << "  direct: " << inline_relation(cx->report.direct) << '\n'
        << "  algebra: " << inline_relation(cx->report.algebra) << '\n';
    if (cx->report.witness)
      out << "  witness: " << inline_tuple(*cx->report.witness) << " only in " << cx->report.witness_side << '\n';
    if (!cx->report.error.empty()) out << "  error: " << cx->report.error << '\n';
    std::istringstream model_text(kripke::model_to_json(cx->model));
    for (std::string line; std::getline(model_text, line);) out << "  | " << line << '\n';
  }
  return out.str();
}

std::string summary_json(const CampaignSummary& s) {
  nlohmann::ordered_json doc;
  doc["seed"] = s.seed;
  doc["cases"] = s.cases;
  doc["passed"] = s.passed;
  doc["failed"] = s.failed;
  doc["lemma_violations"] = s.lemma_violations;
  doc["wall_seconds"] = s.wall_seconds;
  if (const auto& cx = s.first_counterexample) {
    nlohmann::ordered_json c;
    c["case"] = cx->case_index;
    c["query"] = syntax::render_formula(cx->query.formula);
    std::vector<std::string> targets;
    for (const auto& t : cx->query.targets) targets.push_back(syntax::to_string(t));
    c["targets"] = targets;
    c["model"] = nlohmann::ordered_json::parse(kripke::model_to_json(cx->model));
    auto rel = [](const std::optional<relalg::Relation>& r) -> nlohmann::ordered_json {
      if (!r) return nullptr;
      auto arr = nlohmann::ordered_json::array();
      for (const auto& t : *r) arr.push_back(t);
      return arr;
    };
    c["direct"] = rel(cx->report.direct);
    c["algebra"] = rel(cx->report.algebra);
    if (cx->report.witness) {
      c["witness"] = *cx->report.witness;
      c["witness_side"] = cx->report.witness_side;
    }
    if (!cx->report.error.empty()) c["error"] = cx->report.error;
    doc["counterexample"] = std::move(c);
  } else {
    doc["counterexample"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

std::size_t box_duality_discrepancies(const GenParams& p, std::size_t count) {
  std::size_t bad = 0;
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(case_seed(p.seed ^ 0xb0c5ULL, i));
    KripkeModel model = gen_model(p, rng);
    auto q = gen_query(p, model, rng);
    const std::string rel = pick_from(rng, model.relation_names());
    Formula body = syntax::desugar_implications(q.formula);
    translate::Translator tr(schema::concept_index(model), translate::Signature::of(model));
    translate::VarContext ctx(q.targets);
    auto via_rule = tr.ft(syntax::make_box(rel, body), ctx);
    auto via_dual = tr.ft(syntax::make_not(syntax::make_diamond(rel, syntax::make_not(body))), ctx);
    if (!(via_rule == via_dual)) ++bad;
  }
  return bad;
}

std::size_t forall_rewrite_discrepancies(const GenParams& p, std::size_t count) {
  std::size_t bad = 0;
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(case_seed(p.seed ^ 0xa11ULL, i));
    KripkeModel model = gen_model(p, rng);
    auto scope = random_free_scope(p, rng);
    Variable bound = p.allow_concept_vars && chance(rng, 0.2) ? syntax::concept_var(pick_from(rng, kConceptVarNames))
                                                              : syntax::object_var(pick_from(rng, kObjectVarNames));
    scope.push_back(bound);
    GenParams inner = p;
    inner.max_binders = std::max(0, p.max_binders - 1);
    Formula body = gen_formula(inner, model, rng, scope, between(rng, 0, std::max(0, p.max_depth - 1)));
    Formula f = syntax::make_forall(bound, body);
    auto q = syntax::make_query(f, shuffled_free_vars(f, rng));

    auto db = schema::build_database(model);
    auto division = relalg::eval(translate::translate_query(q, model, {translate::ForallStrategy::Division}), db.tables);
    auto rewrite =
        relalg::eval(translate::translate_query(q, model, {translate::ForallStrategy::NotExistsNot}), db.tables);
    if (!(division == rewrite) || !(division == kripke::answer_direct(model, q))) ++bad;
  }
  return bad;
}

std::size_t atomic_equality_discrepancies(const GenParams& p, std::size_t count) {
  std::size_t bad = 0;
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(case_seed(p.seed ^ 0xe9ULL, i));
    KripkeModel model = gen_model(p, rng);
    std::vector<Variable> scope;
    for (const auto& v : random_free_scope(p, rng)) {
      if (v.kind == VarKind::Object) scope.push_back(v);
    }
    FormulaGen g(p, model, rng);
    for (const auto& v : scope) g.push({v, false});
    Formula atom = g.atom();
    const auto* eq = atom.as<syntax::Eq>();
    if (!eq) atom = syntax::make_eq(atom.as<syntax::Neq>()->lhs, atom.as<syntax::Neq>()->rhs), eq = atom.as<syntax::Eq>();

    auto targets = syntax::free_vars(atom);
    auto q = syntax::make_query(atom, targets);
    auto image = relalg::eval(translate::translate_query(q, model), schema::build_database(model).tables);

    // Exhaustive over assignments to the atom's variables and over states.
    std::vector<std::size_t> digit(targets.size(), 0);
    for (bool more = true; more;) {
      kripke::Assignment v;
      relalg::Tuple prefix;
      for (std::size_t k = 0; k < targets.size(); ++k) {
        v = v.with(targets[k], model.objects()[digit[k]]);
        prefix.push_back(model.objects()[digit[k]]);
      }
      for (kripke::StateHandle s = 0; s < model.state_count(); ++s) {
        bool same = kripke::term_eval(model, v, eq->lhs, s) == kripke::term_eval(model, v, eq->rhs, s);
        relalg::Tuple row = prefix;
        row.push_back(model.id_of(s));
        if (same != image.contains(row)) ++bad;
      }
      more = false;
      for (std::size_t k = targets.size(); k-- > 0;) {
        if (++digit[k] < model.objects().size()) {
          more = true;
          break;
        }
        digit[k] = 0;
      }
    }
  }
  return bad;
}

}  // namespace modalq::harness
