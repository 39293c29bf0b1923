#include <gtest/gtest.h>

#include <json.hpp>
#include <map>
#include <set>

#include "modalq/harness.hpp"
#include "modalq/model_io.hpp"
#include "modalq/schema_map.hpp"
#include "modalq/translator.hpp"

using namespace modalq;
using namespace modalq::harness;

namespace {

kripke::KripkeModel example_model() { return kripke::load_model(std::string(MODALQ_DATA_DIR) + "/example_model.json"); }

void count_constructors(const syntax::Formula& f, std::map<std::string, int>& hist) {
  using namespace syntax;
  auto visit = [&](const char* name, std::initializer_list<const Formula*> kids) {
    ++hist[name];
    for (auto* k : kids) count_constructors(*k, hist);
  };
  if (f.is<Eq>()) return visit("Eq", {});
  if (f.is<Neq>()) return visit("Neq", {});
  if (auto* n = f.as<Not>()) return visit("Not", {&n->body});
  if (auto* n = f.as<And>()) return visit("And", {&n->lhs, &n->rhs});
  if (auto* n = f.as<Or>()) return visit("Or", {&n->lhs, &n->rhs});
  if (auto* n = f.as<Implies>()) return visit("Implies", {&n->lhs, &n->rhs});
  if (auto* n = f.as<Diamond>()) return visit("Diamond", {&n->body});
  if (auto* n = f.as<Box>()) return visit("Box", {&n->body});
  if (auto* n = f.as<Exists>()) return visit("Exists", {&n->body});
  if (auto* n = f.as<Forall>()) return visit("Forall", {&n->body});
  visit("Abstraction", {&f.as<Abstraction>()->body});
}

}  // namespace

TEST(GenModel, MinimalFrame) {
  GenParams p;
  p.max_states = 1;
  for (std::uint64_t s = 0; s < 20; ++s) {
    p.seed = s;
    auto m = gen_model(p);
    EXPECT_EQ(m.state_count(), 1u);
    EXPECT_TRUE(m.has_object(m.id_of(0)));
  }
}

TEST(GenModel, DeterministicInSeed) {
  GenParams p;
  p.seed = 1234;
  EXPECT_EQ(gen_model(p), gen_model(p));
  EXPECT_EQ(fingerprint(gen_model(p)), fingerprint(gen_model(p)));
  GenParams q = p;
  q.seed = 1235;
  EXPECT_NE(fingerprint(gen_model(p)), fingerprint(gen_model(q)));
}

TEST(GenModel, RespectsBoundsAndValidates) {
  GenParams p;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    Rng rng(case_seed(42, i));
    auto m = gen_model(p, rng);
    EXPECT_LE(m.state_count(), 6u);
    EXPECT_LE(m.objects().size(), 8u);
    EXPECT_LE(m.concepts().size(), 3u);
    EXPECT_LE(m.relation_names().size(), 2u);
    EXPECT_TRUE(schema::validate_instance(schema::build_database(m)).empty());
  }
}

TEST(GenParams, Validation) {
  GenParams p;
  p.max_states = 0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = GenParams{};
  p.max_objects = 3;
  p.max_states = 4;
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(GenQuery, DepthZeroIsAtomic) {
  GenParams p;
  p.max_depth = 0;
  auto m = example_model();
  for (std::uint64_t i = 0; i < 50; ++i) {
    Rng rng(case_seed(3, i));
    auto q = gen_query(p, m, rng);
    EXPECT_TRUE(q.formula.is<syntax::Eq>() || q.formula.is<syntax::Neq>());
  }
}

TEST(GenQuery, WellFormedAndTranslatable) {
  GenParams p;
  for (std::uint64_t i = 0; i < 500; ++i) {
    Rng rng(case_seed(8, i));
    auto m = gen_model(p, rng);
    auto q = gen_query(p, m, rng);
    EXPECT_LE(syntax::depth(q.formula), p.max_depth);
    EXPECT_NO_THROW(syntax::check_kinds(q.formula));
    auto fv = syntax::free_vars(q.formula);
    EXPECT_EQ(std::set<syntax::Variable>(fv.begin(), fv.end()),
              std::set<syntax::Variable>(q.targets.begin(), q.targets.end()));
    EXPECT_NO_THROW(translate::translate_query(q, m)) << describe_query(q);
  }
}

TEST(GenQuery, CoversEveryConstructor) {
  GenParams p;
  p.max_depth = 4;
  std::map<std::string, int> hist;
  for (std::uint64_t i = 0; i < 200; ++i) {
    Rng rng(case_seed(21, i));
    auto m = gen_model(p, rng);
    count_constructors(gen_formula(p, m, rng, {}, 4), hist);
  }
  for (const char* name : {"Eq", "Neq", "Not", "And", "Or", "Diamond", "Box", "Exists", "Forall", "Abstraction"}) {
    EXPECT_GT(hist[name], 0) << name;
  }
}

TEST(Check, ExampleQueries) {
  auto m = example_model();
  auto r = check(m, syntax::parse_query("@code = 'b'", {}));
  EXPECT_TRUE(r.equal);
  EXPECT_EQ(r.direct->tuples(), (std::set<relalg::Tuple>{{"3"}}));
  auto box = check(m, syntax::parse_query("[COMP] @code = 'b'", {}));
  EXPECT_TRUE(box.equal);
  EXPECT_EQ(box.algebra->tuples(), (std::set<relalg::Tuple>{{"2"}, {"3"}, {"4"}}));
}

TEST(Check, CorruptedTranslatorYieldsWitness) {
  auto m = example_model();
  auto r = check(m, syntax::parse_query("[COMP] @code = 'b'", {}), {.mutation = translate::Mutation::BoxWithoutDuality});
  EXPECT_FALSE(r.equal);
  ASSERT_TRUE(r.witness.has_value());
  bool in_direct = r.direct->contains(*r.witness);
  EXPECT_NE(in_direct, r.algebra->contains(*r.witness));
  EXPECT_EQ(r.witness_side, in_direct ? "direct" : "algebra");
}

TEST(Check, ErrorsBecomeFailures) {
  auto m = example_model();
  auto r = check(m, syntax::parse_query("exists %a . @%a = 'b'", {}));
  EXPECT_FALSE(r.equal);
  EXPECT_TRUE(r.direct.has_value());
  EXPECT_FALSE(r.algebra.has_value());
  EXPECT_NE(r.error.find("algebra"), std::string::npos);
}

TEST(Campaign, SmallRunPasses) {
  GenParams p;
  auto s = run_campaign(p, 10);
  EXPECT_EQ(s.passed, 10u);
  EXPECT_EQ(s.failed, 0u);
  EXPECT_FALSE(s.first_counterexample.has_value());
  EXPECT_EQ(render_summary(s), render_summary(run_campaign(p, 10)));
  EXPECT_THROW(run_campaign(p, 0), std::invalid_argument);
}

TEST(Campaign, JsonReport) {
  GenParams p;
  auto s = run_campaign(p, 200, {.mutation = translate::Mutation::NegationWithoutComplement});
  ASSERT_TRUE(s.first_counterexample.has_value());
  auto doc = nlohmann::json::parse(summary_json(s));
  EXPECT_EQ(doc["cases"], 200);
  EXPECT_EQ(doc["failed"].get<std::size_t>(), s.failed);
  EXPECT_TRUE(doc["counterexample"].contains("witness"));
  EXPECT_EQ(kripke::parse_model(doc["counterexample"]["model"].dump()), s.first_counterexample->model);
}

TEST(Shrink, KeepsFailureAndShrinks) {
  GenParams p;
  translate::Options opts{.mutation = translate::Mutation::DiamondReversedProduct};
  auto raw = run_campaign(p, 300, opts, false);
  ASSERT_TRUE(raw.first_counterexample.has_value());
  auto small = shrink(*raw.first_counterexample, opts);
  EXPECT_FALSE(check(small.model, small.query, opts).equal);
  EXPECT_TRUE(check(small.model, small.query).equal);
  EXPECT_LE(small.model.state_count(), raw.first_counterexample->model.state_count());
  EXPECT_LE(syntax::size(small.query.formula), syntax::size(raw.first_counterexample->query.formula));
}

TEST(CrossChecks, NoDiscrepancies) {
  GenParams p;
  EXPECT_EQ(box_duality_discrepancies(p, 200), 0u);
  EXPECT_EQ(forall_rewrite_discrepancies(p, 200), 0u);
  EXPECT_EQ(atomic_equality_discrepancies(p, 200), 0u);
}
