#pragma once

#include <json.hpp>

#include "dendron/tree.hpp"
#include "dendron/tree_map.hpp"

namespace dendron {

using Json = nlohmann::json;

Json tree_to_json(const Tree& t);
Tree tree_from_json(const Json& j);

Json map_to_json(const TreeMap& m);
TreeMap map_from_json(const Json& j);

/// Reads a tree given either inline as DSL text or as JSON text.
Tree read_tree(const std::string& text);

}  // namespace dendron
