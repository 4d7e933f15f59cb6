#include "fvm/json_io.hpp"

#include <json.hpp>

namespace fvm {

using ojson = nlohmann::ordered_json;

Structure structure_from_json(const std::string& text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("structure JSON must be an object");
  if (!j.contains("signature") || !j["signature"].is_object())
    throw ParseError("missing or invalid \"signature\" object");
  if (!j.contains("universe") || !j["universe"].is_number_integer())
    throw ParseError("missing or invalid \"universe\"");

  std::vector<Relation> rels;
  for (auto& [name, ar] : j["signature"].items()) {
    if (!ar.is_number_integer() || ar.get<int>() < 1)
      throw ParseError("arity of " + name + " must be a positive integer");
    rels.push_back({name, ar.get<int>()});
  }
  Signature sig(std::move(rels));
  int n = j["universe"].get<int>();

  std::vector<std::vector<Tuple>> interp(sig.count());
  if (j.contains("relations")) {
    if (!j["relations"].is_object()) throw ParseError("\"relations\" must be an object");
    for (auto& [name, tuples] : j["relations"].items()) {
      int r = sig.index_of(name);
      if (r < 0) throw ParseError("relation not in signature: " + name);
      if (!tuples.is_array()) throw ParseError("tuples of " + name + " must be an array");
      for (auto& t : tuples) {
        if (!t.is_array()) throw ParseError("tuple in " + name + " must be an array");
        Tuple tup;
        for (auto& v : t) {
          if (!v.is_number_integer()) throw ParseError("tuple entry in " + name + " must be an integer");
          tup.push_back(v.get<int>());
        }
        interp[r].push_back(std::move(tup));
      }
    }
  }

  std::optional<int> point;
  if (j.contains("point") && !j["point"].is_null()) {
    if (!j["point"].is_number_integer()) throw ParseError("\"point\" must be an integer");
    point = j["point"].get<int>();
  }
  return Structure(std::move(sig), n, std::move(interp), point);
}

std::string structure_to_json(const Structure& s, bool pretty) {
  ojson j;
  ojson sig = ojson::object();
  for (const auto& r : s.sig().rels()) sig[r.name] = r.arity;
  j["signature"] = std::move(sig);
  j["universe"] = s.size();
  ojson rels = ojson::object();
  for (int r = 0; r < s.sig().count(); ++r) {
    ojson arr = ojson::array();
    for (const Tuple& t : s.tuples(r)) arr.push_back(t);
    rels[s.sig().rel(r).name] = std::move(arr);
  }
  j["relations"] = std::move(rels);
  if (s.pointed()) j["point"] = s.point();
  return pretty ? j.dump(2) : j.dump();
}

}  // namespace fvm
