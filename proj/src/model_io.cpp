#include "modalq/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "modalq/errors.hpp"

namespace modalq::kripke {

using nlohmann::json;

namespace {

std::string scalar(const json& j, const std::string& where) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  if (j.is_number_unsigned()) return std::to_string(j.get<unsigned long long>());
  throw ModelFormatError(where + ": expected a string or integer");
}

const json& field(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw ModelFormatError(std::string("missing field \"") + key + "\"");
  return *it;
}

std::vector<std::string> string_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw ModelFormatError(where + ": expected an array");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(scalar(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace

KripkeModel parse_model(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ModelFormatError(std::string("malformed model file: ") + e.what());
  }
  if (!doc.is_object()) throw ModelFormatError("model file must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "objects" && key != "concepts" && key != "states" && key != "relations")
      throw ModelFormatError("unknown field \"" + key + "\"");
  }

  auto objects = string_list(field(doc, "objects"), "objects");
  auto concepts = string_list(field(doc, "concepts"), "concepts");

  const json& states_j = field(doc, "states");
  if (!states_j.is_array()) throw ModelFormatError("states: expected an array");
  std::vector<StateRecord> states;
  for (std::size_t i = 0; i < states_j.size(); ++i) {
    const std::string where = "states[" + std::to_string(i) + "]";
    if (!states_j[i].is_object()) throw ModelFormatError(where + ": expected an object");
    StateRecord rec;
    for (const auto& [key, val] : states_j[i].items()) rec.emplace(key, scalar(val, where + "." + key));
    states.push_back(std::move(rec));
  }

  const json& rel_j = field(doc, "relations");
  if (!rel_j.is_object()) throw ModelFormatError("relations: expected an object");
  EdgeList relations;
  for (const auto& [name, pairs] : rel_j.items()) {
    const std::string where = "relations." + name;
    if (!pairs.is_array()) throw ModelFormatError(where + ": expected an array of pairs");
    auto& list = relations[name];
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const std::string pw = where + "[" + std::to_string(i) + "]";
      if (!pairs[i].is_array() || pairs[i].size() != 2) throw ModelFormatError(pw + ": expected [source, target]");
      list.emplace_back(scalar(pairs[i][0], pw), scalar(pairs[i][1], pw));
    }
  }

  return KripkeModel::create(std::move(objects), std::move(concepts), std::move(states), relations);
}

KripkeModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ModelFormatError("cannot open model file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

std::string model_to_json(const KripkeModel& model) {
  // ordered_json keeps the documented key order.
  nlohmann::ordered_json doc;
  doc["objects"] = model.objects();
  doc["concepts"] = model.concepts();
  auto states = nlohmann::ordered_json::array();
  for (const auto& rec : model.state_records()) {
    nlohmann::ordered_json s = nlohmann::ordered_json::object();
    for (const auto& c : model.concepts()) s[c] = rec.at(c);
    states.push_back(std::move(s));
  }
  doc["states"] = std::move(states);
  auto rels = nlohmann::ordered_json::object();
  for (const auto& [name, pairs] : model.edge_list()) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& [s, t] : pairs) arr.push_back({s, t});
    rels[name] = std::move(arr);
  }
  doc["relations"] = std::move(rels);
  return doc.dump(2) + "\n";
}

}  // namespace modalq::kripke
