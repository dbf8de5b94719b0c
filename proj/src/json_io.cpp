#include "dendron/json_io.hpp"

#include <cctype>

namespace dendron {

Json tree_to_json(const Tree& t) {
  Json vs = Json::array();
  for (const auto& r : records(t))
    vs.push_back(Json{{"out", r.out}, {"in", r.inputs}});
  return Json{{"root", t.name(t.root())}, {"vertices", vs}};
}

Tree tree_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("root"))
    throw TreeError("tree JSON needs a \"root\" field");
  std::vector<VertexRecord> recs;
  if (j.contains("vertices"))
    for (const auto& v : j.at("vertices"))
      recs.push_back(VertexRecord{v.at("out").get<std::string>(),
                                  v.at("in").get<std::vector<std::string>>()});
  return Tree::from_records(j.at("root").get<std::string>(), recs);
}

Json map_to_json(const TreeMap& m) {
  Json a = Json::object();
  for (const auto& [k, v] : m.by_name()) a[k] = v;
  return Json{{"source", tree_to_json(m.source)},
              {"target", tree_to_json(m.target)},
              {"assignment", a}};
}

TreeMap map_from_json(const Json& j) {
  Tree s = tree_from_json(j.at("source"));
  Tree t = tree_from_json(j.at("target"));
  return validate_map(s, t,
                      j.at("assignment").get<std::map<std::string, std::string>>());
}

Tree read_tree(const std::string& text) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
    ++i;
  if (i < text.size() && text[i] == '{') {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw TreeError(std::string("invalid tree JSON: ") + e.what());
    }
    return tree_from_json(j);
  }
  return parse_tree(text);
}

}  // namespace dendron
