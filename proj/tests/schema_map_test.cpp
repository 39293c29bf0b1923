#include <gtest/gtest.h>

#include <algorithm>

#include "modalq/errors.hpp"
#include "modalq/harness.hpp"
#include "modalq/model_io.hpp"
#include "modalq/schema_map.hpp"

using namespace modalq;
using namespace modalq::schema;
using relalg::Relation;

namespace {

kripke::KripkeModel example_model() { return kripke::load_model(std::string(MODALQ_DATA_DIR) + "/example_model.json"); }

bool has_kind(const std::vector<Violation>& v, ViolationKind k) {
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.kind == k; });
}

}  // namespace

TEST(ConceptIndex, Examples) {
  ConceptIndex two(std::vector<std::string>{"id", "code"});
  EXPECT_EQ(two["id"], 1u);
  EXPECT_EQ(two["code"], 2u);
  EXPECT_EQ(ConceptIndex(std::vector<std::string>{"id"})["id"], 1u);
  ConceptIndex three(std::vector<std::string>{"id", "b", "a"});
  EXPECT_EQ(three["a"], 2u);
  EXPECT_EQ(three["b"], 3u);
  EXPECT_THROW(three["c"], UnknownConstant);
}

TEST(ConceptIndex, IdFirstThenSortedNames) {
  harness::GenParams p;
  p.max_concepts = 6;
  for (std::uint64_t i = 0; i < 100; ++i) {
    harness::Rng rng(harness::case_seed(5, i));
    auto m = harness::gen_model(p, rng);
    std::vector<std::string> rest;
    for (const auto& c : m.concepts()) {
      if (c != "id") rest.push_back(c);
    }
    std::sort(rest.begin(), rest.end());
    auto ci = concept_index(m);
    EXPECT_EQ(ci["id"], 1u);
    for (std::size_t k = 0; k < rest.size(); ++k) EXPECT_EQ(ci[rest[k]], k + 2);
  }
}

TEST(BuildDatabase, ExampleTables) {
  auto db = build_database(example_model());
  const auto& t = db.tables;
  EXPECT_EQ(t.get(kSta), Relation(2, {{"1", "d"}, {"2", "a"}, {"3", "b"}, {"4", "c"}}));
  EXPECT_EQ(t.get(kRel), Relation(3, {{"1", "2", "COMP"}, {"1", "3", "COMP"}, {"1", "4", "COMP"}}));
  EXPECT_EQ(t.get(kCon), Relation(1, {{"id"}, {"code"}}));
  EXPECT_EQ(t.get(kObj), Relation(1, {{"1"}, {"2"}, {"3"}, {"4"}, {"a"}, {"b"}, {"c"}, {"d"}}));
  EXPECT_EQ(db.type_codes, std::set<std::string>{"COMP"});
  EXPECT_TRUE(validate_instance(db).empty());
}

TEST(BuildDatabase, SingleState) {
  auto m = kripke::KripkeModel::create({"s"}, {"id"}, {{{"id", "s"}}}, {{"R", {}}});
  auto db = build_database(m);
  EXPECT_EQ(db.tables.get(kSta), Relation(1, {{"s"}}));
  EXPECT_TRUE(db.tables.get(kRel).empty());
}

TEST(BuildDatabase, GeneratedModels) {
  harness::GenParams p;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    harness::Rng rng(harness::case_seed(42, i));
    auto m = harness::gen_model(p, rng);
    auto db = build_database(m);
    std::size_t pairs = 0;
    for (const auto& [_, list] : m.edge_list()) pairs += list.size();
    EXPECT_EQ(db.tables.get(kRel).size(), pairs);
    EXPECT_EQ(db.tables.get(kSta).size(), m.state_count());
    EXPECT_TRUE(validate_instance(db).empty());
    // State order and concept declaration order are not part of the image.
    auto back = model_from_database(db);
    EXPECT_EQ(back.objects(), m.objects());
    EXPECT_EQ(concept_index(back), concept_index(m));
    auto records = [](const kripke::KripkeModel& k) {
      auto r = k.state_records();
      return std::set<kripke::StateRecord>(r.begin(), r.end());
    };
    EXPECT_EQ(records(back), records(m));
    auto edges = [](const kripke::KripkeModel& k) {
      std::set<std::tuple<std::string, std::string, std::string>> out;
      for (const auto& [name, pairs] : k.edge_list()) {
        for (const auto& [a, b] : pairs) out.emplace(name, a, b);
      }
      return out;
    };
    EXPECT_EQ(edges(back), edges(m));
  }
}

TEST(Validate, DetectsViolations) {
  auto good = build_database(example_model());

  auto empty = good;
  empty.tables.add(kSta, Relation(2));
  EXPECT_TRUE(has_kind(validate_instance(empty), ViolationKind::StaEmpty));

  auto dup = good;
  dup.tables.add(kSta, Relation(2, {{"1", "d"}, {"1", "a"}, {"3", "b"}, {"4", "c"}}));
  EXPECT_TRUE(has_kind(validate_instance(dup), ViolationKind::StaKeyViolation));

  auto stray = good;
  stray.tables.add(kSta, Relation(2, {{"1", "d"}, {"2", "z"}, {"3", "b"}, {"4", "c"}}));
  EXPECT_TRUE(has_kind(validate_instance(stray), ViolationKind::StaValueNotInObj));

  auto dangling = good;
  dangling.tables.add(kRel, Relation(3, {{"1", "9", "COMP"}}));
  EXPECT_TRUE(has_kind(validate_instance(dangling), ViolationKind::RelUnknownState));

  auto untyped = good;
  untyped.tables.add(kRel, Relation(3, {{"1", "2", "PART"}}));
  EXPECT_TRUE(has_kind(validate_instance(untyped), ViolationKind::RelUnknownType));

  auto wide = good;
  wide.tables.add(kCon, Relation(2, {{"id", "x"}}));
  EXPECT_TRUE(has_kind(validate_instance(wide), ViolationKind::SchemaDegree));

  EXPECT_THROW(model_from_database(dup), ModelInvariantError);
}
