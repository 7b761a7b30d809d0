#pragma once

#include <iosfwd>
#include <string>
#include <variant>

#include "topo/structures.hpp"

namespace topo {

// Canonical text form, 1-based points:
//   topology  {"n": 2, "opens": [[], [1], [1,2]]}
//   preorder  {"n": 2, "below": [[1], [1,2]]}
std::string to_json_string(const Topology& t);
std::string to_json_string(const Preorder& q);

using Structure = std::variant<Topology, Preorder>;

// Parses either form; topologies are validated, preorders checked for
// reflexivity and transitivity. Throws StructureError on malformed input.
Structure structure_from_json(const std::string& text);

Structure load_structure_file(const std::string& path);

}  // namespace topo
