#include "modalq/schema_map.hpp"

#include <algorithm>

#include "modalq/errors.hpp"

namespace modalq::schema {

using relalg::Relation;
using relalg::Tuple;

ConceptIndex::ConceptIndex(const std::vector<std::string>& concepts) {
  std::vector<std::string> rest;
  bool has_id = false;
  for (const auto& c : concepts) {
    if (c == kripke::kIdConcept) {
      has_id = true;
    } else {
      rest.push_back(c);
    }
  }
  if (!has_id) throw ModelInvariantError("concept index needs a concept named id");
  std::sort(rest.begin(), rest.end());
  rest.erase(std::unique(rest.begin(), rest.end()), rest.end());
  order_.push_back(kripke::kIdConcept);
  order_.insert(order_.end(), rest.begin(), rest.end());
  for (std::size_t i = 0; i < order_.size(); ++i) index_.emplace(order_[i], i + 1);
}

std::size_t ConceptIndex::operator[](const std::string& concept_name) const {
  auto it = index_.find(concept_name);
  if (it == index_.end()) throw UnknownConstant("unknown concept constant " + concept_name);
  return it->second;
}

ConceptIndex concept_index(const kripke::KripkeModel& model) { return ConceptIndex(model.concepts()); }

DatabaseInstance build_database(const kripke::KripkeModel& model) {
  ConceptIndex ci = concept_index(model);

  Relation sta(ci.size());
  for (kripke::StateHandle s = 0; s < model.state_count(); ++s) {
    Tuple row;
    for (const auto& c : ci.columns()) row.push_back(model.value(s, c));
    sta.insert(std::move(row));
  }

  Relation rel(3);
  for (const auto& name : model.relation_names()) {
    for (auto [s, t] : model.edges(name)) rel.insert({model.id_of(s), model.id_of(t), name});
  }

  Relation con(1);
  for (const auto& c : model.concepts()) con.insert({c});
  Relation obj(1);
  for (const auto& o : model.objects()) obj.insert({o});

  DatabaseInstance db;
  db.tables.add(kSta, std::move(sta));
  db.tables.add(kRel, std::move(rel));
  db.tables.add(kCon, std::move(con));
  db.tables.add(kObj, std::move(obj));
  auto names = model.relation_names();
  db.type_codes.insert(names.begin(), names.end());
  return db;
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::StaValueNotInObj:
      return "sta-value-not-in-obj";
    case ViolationKind::StaEmpty:
      return "sta-empty";
    case ViolationKind::StaKeyViolation:
      return "sta-key-violation";
    case ViolationKind::RelUnknownState:
      return "rel-unknown-state";
    case ViolationKind::RelUnknownType:
      return "rel-unknown-type";
    case ViolationKind::SchemaDegree:
      return "schema-degree";
  }
  return "unknown";
}

std::vector<Violation> validate_instance(const DatabaseInstance& db) {
  std::vector<Violation> out;
  const auto& t = db.tables;
  auto degree_is = [&](const char* name, std::size_t expected) {
    if (!t.has(name)) {
      out.push_back({ViolationKind::SchemaDegree, std::string("missing table ") + name});
      return false;
    }
    if (t.get(name).degree() != expected) {
      out.push_back({ViolationKind::SchemaDegree, std::string(name) + " has degree " +
                                                      std::to_string(t.get(name).degree()) + ", expected " +
                                                      std::to_string(expected)});
      return false;
    }
    return true;
  };
  bool con_ok = degree_is(kCon, 1);
  bool obj_ok = degree_is(kObj, 1);
  bool rel_ok = degree_is(kRel, 3);
  bool sta_ok = t.has(kSta);
  if (!sta_ok) out.push_back({ViolationKind::SchemaDegree, "missing table Sta"});
  if (sta_ok && con_ok && t.get(kSta).degree() != t.get(kCon).size()) {
    out.push_back({ViolationKind::SchemaDegree, "Sta has degree " + std::to_string(t.get(kSta).degree()) +
                                                    " but Con lists " + std::to_string(t.get(kCon).size()) +
                                                    " concepts"});
  }
  if (!sta_ok) return out;

  const Relation& sta = t.get(kSta);
  if (sta.empty()) out.push_back({ViolationKind::StaEmpty, "Sta is empty: a model has at least one state"});
  if (sta.degree() == 0) return out;

  if (obj_ok) {
    const Relation& obj = t.get(kObj);
    std::set<std::string> reported;
    for (const auto& row : sta) {
      for (const auto& cell : row) {
        if (!obj.contains({cell}) && reported.insert(cell).second)
          out.push_back({ViolationKind::StaValueNotInObj, "Sta value " + cell + " is not in Obj"});
      }
    }
  }

  std::set<std::string> ids;
  std::set<std::string> duplicated;
  for (const auto& row : sta) {
    if (!ids.insert(row[0]).second && duplicated.insert(row[0]).second)
      out.push_back({ViolationKind::StaKeyViolation, "id " + row[0] + " identifies more than one Sta row"});
  }

  if (rel_ok) {
    for (const auto& row : t.get(kRel)) {
      for (std::size_t k = 0; k < 2; ++k) {
        if (!ids.contains(row[k]))
          out.push_back({ViolationKind::RelUnknownState, "Rel row (" + row[0] + ", " + row[1] + ", " + row[2] +
                                                             ") names unknown state " + row[k]});
      }
      if (!db.type_codes.contains(row[2]))
        out.push_back({ViolationKind::RelUnknownType, "Rel type code " + row[2] + " is not a relation name"});
    }
  }
  return out;
}

kripke::KripkeModel model_from_database(const DatabaseInstance& db) {
  if (auto v = validate_instance(db); !v.empty()) throw ModelInvariantError(v.front().message);
  const auto& t = db.tables;

  std::vector<std::string> concepts;
  for (const auto& row : t.get(kCon)) concepts.push_back(row[0]);
  ConceptIndex ci(concepts);
  std::vector<std::string> objects;
  for (const auto& row : t.get(kObj)) objects.push_back(row[0]);

  std::vector<kripke::StateRecord> states;
  for (const auto& row : t.get(kSta)) {
    kripke::StateRecord rec;
    for (std::size_t k = 0; k < row.size(); ++k) rec.emplace(ci.columns()[k], row[k]);
    states.push_back(std::move(rec));
  }

  kripke::EdgeList edges;
  for (const auto& name : db.type_codes) edges[name];
  for (const auto& row : t.get(kRel)) edges[row[2]].emplace_back(row[0], row[1]);

  return kripke::KripkeModel::create(std::move(objects), ci.columns(), std::move(states), edges);
}

}  // namespace modalq::schema
