#include "topo/structure_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace topo {

namespace {

nlohmann::ordered_json sets_to_json(const std::vector<Mask>& sets) {
  auto arr = nlohmann::ordered_json::array();
  for (Mask m : sets) arr.push_back(PointSet(m).points());
  return arr;
}

std::vector<Mask> sets_from_json(const nlohmann::json& arr, int n,
                                 const char* what) {
  if (!arr.is_array()) throw StructureError(std::string(what) + " must be an array");
  std::vector<Mask> out;
  for (const auto& item : arr) {
    if (!item.is_array())
      throw StructureError(std::string(what) + " entries must be arrays of points");
    Mask m = 0;
    for (const auto& p : item) {
      if (!p.is_number_integer())
        throw StructureError("points must be integers");
      int v = p.get<int>();
      if (v < 1 || v > n)
        throw StructureError("point " + std::to_string(v) +
                             " outside ground set [" + std::to_string(n) + "]");
      m |= Mask{1} << (v - 1);
    }
    out.push_back(m);
  }
  return out;
}

}  // namespace

std::string to_json_string(const Topology& t) {
  nlohmann::ordered_json j;
  j["n"] = t.n;
  j["opens"] = sets_to_json(t.opens);
  return j.dump();
}

std::string to_json_string(const Preorder& q) {
  nlohmann::ordered_json j;
  j["n"] = q.n;
  j["below"] = sets_to_json(q.below);
  return j.dump();
}

Structure structure_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw StructureError(std::string("bad structure JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer())
    throw StructureError("structure JSON needs an integer field \"n\"");
  int n = j["n"].get<int>();
  if (n < 0 || n > kMaxGroundSize)
    throw StructureError("ground-set size out of range: " + std::to_string(n));
  if (j.contains("opens")) {
    auto v = validate_topology(n, sets_from_json(j["opens"], n, "opens"));
    if (!v.ok())
      throw StructureError("not a topology: " + v.diagnostic->axiom + " (" +
                           v.diagnostic->message + ")");
    return *std::move(v.topology);
  }
  if (j.contains("below")) {
    auto below = sets_from_json(j["below"], n, "below");
    if ((int)below.size() != n)
      throw StructureError("\"below\" must list one set per point");
    Preorder q{n, std::move(below)};
    if (!is_valid_preorder(q))
      throw StructureError("relation is not reflexive and transitive");
    return q;
  }
  throw StructureError("structure JSON needs \"opens\" or \"below\"");
}

Structure load_structure_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StructureError("cannot open structure file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return structure_from_json(ss.str());
}

}  // namespace topo
