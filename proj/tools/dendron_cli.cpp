#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "dendron/dendroidal_set.hpp"
#include "dendron/faces.hpp"
#include "dendron/json_io.hpp"
#include "dendron/necklace.hpp"
#include "dendron/nw.hpp"
#include "dendron/sset.hpp"
#include "dendron/tree.hpp"
#include "dendron/tree_map.hpp"
#include "dendron/w_construction.hpp"

using namespace dendron;

namespace {

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Inline text, or the contents of a file when the argument names one.
std::string load(const std::string& arg) {
  std::error_code ec;
  if (arg.empty() || !std::filesystem::is_regular_file(arg, ec)) return arg;
  std::ifstream in(arg);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string s = ss.str();
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ')) s.pop_back();
  return s;
}

Tree tree_arg(const std::string& arg) {
  std::size_t limit = default_max_edges();
  Tree t = read_tree(load(arg));
  if (t.edge_count() > limit)
    throw DomainError("tree has " + std::to_string(t.edge_count()) +
                      " edges, more than the bound " + std::to_string(limit));
  return t;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    auto b = item.find_first_not_of(" \t");
    auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::vector<EdgeId> edge_ids(const Tree& t, const std::string& names) {
  std::vector<EdgeId> out;
  for (const auto& n : split(names, ',')) {
    auto id = t.find(n);
    if (!id) throw DomainError("unknown edge: " + n);
    out.push_back(*id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

TreeMap map_arg(const Tree& s, const Tree& t, const std::string& text) {
  std::string body = load(text);
  if (!body.empty() && body.front() == '{') {
    TreeMap m = map_from_json(Json::parse(body));
    return validate_map(s, t, m.by_name());
  }
  std::map<std::string, std::string> a;
  for (const auto& pair : split(body, ',')) {
    auto colon = pair.find(':');
    if (colon == std::string::npos) throw DomainError("map entries look like src:tgt");
    a[pair.substr(0, colon)] = pair.substr(colon + 1);
  }
  return validate_map(s, t, a);
}

Json class_json(const MapClass& c) {
  return Json{{"tall", c.tall},       {"face", c.face},
              {"inner_face", c.inner_face}, {"outer_face", c.outer_face},
              {"degeneracy", c.degeneracy}, {"planar", c.planar},
              {"convex", c.convex},   {"iso", c.iso}};
}

std::string tree_dot(const Tree& t) {
  std::ostringstream o;
  o << "digraph tree {\n  rankdir=BT;\n";
  for (std::size_t v = 0; v < t.vertex_count(); ++v) o << "  v" << v << " [shape=point];\n";
  auto lower = [&](EdgeId e) {
    int v = t.vertex_below(e);
    return v < 0 ? std::string("root") : "v" + std::to_string(v);
  };
  o << "  root [shape=none,label=\"\"];\n";
  for (EdgeId e = 0; e < static_cast<EdgeId>(t.edge_count()); ++e) {
    int v = t.vertex_above(e);
    std::string upper = v < 0 ? "l" + std::to_string(e) : "v" + std::to_string(v);
    if (v < 0) o << "  " << upper << " [shape=none,label=\"\"];\n";
    o << "  " << upper << " -> " << lower(e) << " [label=\"" << t.name(e) << "\"];\n";
  }
  o << "}\n";
  return o.str();
}

Json necklace_json(const Necklace& n) {
  Json j = necklace_to_json(n);
  Json beads = Json::array();
  for (const Tree& b : n.beads()) beads.push_back(print_tree(b));
  j["beads"] = beads;
  j["joint_tree"] = print_tree(n.joint_tree());
  return j;
}

// ---- presheaves ----

std::unique_ptr<DendroidalSet> presheaf_from_json(const Json& j) {
  if (j.contains("generators")) {
    std::vector<Tree> gens;
    for (const auto& g : j.at("generators"))
      gens.push_back(g.is_string() ? read_tree(g.get<std::string>()) : tree_from_json(g));
    std::vector<ColimitPresentation::Relation> rels;
    for (const auto& r : j.value("relations", Json::array())) {
      std::size_t from = r.at("from"), to = r.at("to");
      if (from >= gens.size() || to >= gens.size())
        throw DomainError("relation refers to a missing generator");
      TreeMap m = map_from_json(r.at("map"));
      rels.push_back({from, to, validate_map(gens[from], gens[to], m.by_name())});
    }
    return std::make_unique<ColimitPresentation>(std::move(gens), std::move(rels));
  }
  std::string kind = j.at("kind");
  Tree t = j.at("tree").is_string() ? read_tree(j.at("tree").get<std::string>())
                                   : tree_from_json(j.at("tree"));
  std::vector<std::string> names;
  for (const char* key : {"edges", "joints"})
    if (j.contains(key))
      for (const auto& n : j.at(key)) names.push_back(n);
  std::string joined;
  for (const auto& n : names) joined += (joined.empty() ? "" : ",") + n;
  if (kind == "representable" || kind == "rep") return std::make_unique<Representable>(t);
  if (kind == "boundary") return std::make_unique<Boundary>(t);
  if (kind == "segal_core" || kind == "core") return std::make_unique<SegalCore>(t);
  if (kind == "horn") return std::make_unique<Horn>(t, edge_ids(t, joined));
  if (kind == "necklace")
    return std::make_unique<NecklaceSet>(make_necklace(t, edge_ids(t, joined)));
  throw DomainError("unknown presheaf kind: " + kind);
}

// "kind:TREE" with TREE inline or a file; horn and necklace take "|e1,e2",
// or a JSON document (file or inline).
std::unique_ptr<DendroidalSet> presheaf_arg(const std::string& arg) {
  std::string body = load(arg);
  if (!body.empty() && body.front() == '{') return presheaf_from_json(Json::parse(body));
  auto colon = body.find(':');
  if (colon == std::string::npos) throw DomainError("presheaf looks like kind:tree");
  std::string kind = body.substr(0, colon);
  std::string rest = body.substr(colon + 1);
  std::string edges;
  if (auto bar = rest.rfind('|'); bar != std::string::npos) {
    edges = rest.substr(bar + 1);
    rest = rest.substr(0, bar);
  }
  Json j{{"kind", kind}, {"tree", tree_to_json(tree_arg(rest))}};
  j["edges"] = split(edges, ',');
  return presheaf_from_json(j);
}

Dendrex color_arg(const DendroidalSet& x, const std::string& name) {
  if (auto* r = dynamic_cast<const Representable*>(&x)) {
    auto id = r->base().find(name);
    if (!id) throw DomainError("unknown color: " + name);
    return {*id};
  }
  auto* c = dynamic_cast<const ColimitPresentation*>(&x);
  auto colon = name.find(':');
  if (!c || colon == std::string::npos)
    throw DomainError("colors of a colimit look like generator:edge");
  std::size_t g = std::stoul(name.substr(0, colon));
  if (g >= c->generators().size()) throw DomainError("unknown generator in " + name);
  const Tree& t = c->generators()[g];
  auto e = t.find(name.substr(colon + 1));
  if (!e) throw DomainError("unknown color: " + name);
  Dendrex top{static_cast<int>(g)};
  for (EdgeId i = 0; i < static_cast<EdgeId>(t.edge_count()); ++i) top.push_back(i);
  Tree stick = Tree::stick(t.name(*e));
  return x.restrict(top, TreeMap{stick, t, {*e}});
}

std::string color_name(const DendroidalSet& x, const Dendrex& d) {
  if (auto* r = dynamic_cast<const Representable*>(&x)) return r->base().name(d.at(0));
  if (auto* c = dynamic_cast<const ColimitPresentation*>(&x))
    return std::to_string(d.at(0)) + ":" +
           c->generators().at(static_cast<std::size_t>(d.at(0))).name(d.at(1));
  return Json(d).dump();
}

Signature signature_arg(const DendroidalSet& x, const std::string& text) {
  Signature sig;
  if (text == "leaf-root") {
    auto* r = dynamic_cast<const Representable*>(&x);
    if (!r) throw DomainError("leaf-root needs a presheaf on a single tree");
    for (EdgeId e : r->base().leaves()) sig.leaves.push_back({e});
    sig.root = {r->base().root()};
    return sig;
  }
  auto semi = text.find(';');
  if (semi == std::string::npos) throw DomainError("signature looks like \"a,b;r\"");
  for (const auto& n : split(text.substr(0, semi), ',')) sig.leaves.push_back(color_arg(x, n));
  auto root = split(text.substr(semi + 1), ',');
  if (root.size() != 1) throw DomainError("signature needs exactly one root color");
  sig.root = color_arg(x, root[0]);
  return sig;
}

Json witness_json(const DendroidalSet& x, const SegalWitness& w) {
  Json colors = Json::array();
  for (const Dendrex& d : w.coloring) colors.push_back(color_name(x, d));
  return Json{{"tree", print_tree(w.tree)},
              {"coloring", colors},
              {"fiber", w.fiber},
              {"families", w.families},
              {"injective", w.injective}};
}

// ---- output ----

struct Output {
  std::string format = "json";

  void json(const Json& j) const {
    if (format != "json") throw DomainError("this result has no " + format + " form");
    std::cout << j.dump(2) << "\n";
  }
  void tree(const Tree& t, Json j = {}) const {
    if (format == "dot") {
      std::cout << tree_dot(t);
      return;
    }
    if (j.is_null()) j = Json::object();
    j["tree"] = tree_to_json(t);
    j["dsl"] = print_tree(t);
    std::cout << j.dump(2) << "\n";
  }
  void sset(const SimplicialSet& s) const {
    if (format == "dot")
      std::cout << sset_to_dot(s);
    else
      std::cout << sset_to_json(s).dump(2) << "\n";
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dendron: trees, necklaces and the W construction"};
  app.require_subcommand(1);
  app.fallthrough();
  Output out;
  app.add_option("--format", out.format, "json or dot")
      ->check(CLI::IsMember({"json", "dot"}));

  std::string tree, source, target, map, kind = "all", lower, upper, at, joints, face,
                    target_joints, presheaf, signature = "leaf-root", verb;
  std::size_t level = 0, bound = 0;
  int dim = -1;
  bool all_failures = false;

  auto* parse = app.add_subcommand("parse", "parse a tree and print it back");
  parse->add_option("tree", tree, "DSL text, JSON text or a file")->required();

  auto map_opts = [&](CLI::App* c) {
    c->add_option("--source", source)->required();
    c->add_option("--target", target)->required();
    c->add_option("--map", map, "src:tgt,... or map JSON")->required();
  };
  auto* mapc = app.add_subcommand("map", "validate a map of trees");
  map_opts(mapc);
  auto* fact = app.add_subcommand("factorize", "iso, degeneracy, inner face, outer face");
  map_opts(fact);
  auto* cls = app.add_subcommand("classify", "classes a map belongs to");
  map_opts(cls);

  auto* faces = app.add_subcommand("faces", "faces of a tree");
  faces->add_option("tree", tree)->required();
  faces->add_option("--kind", kind)->check(CLI::IsMember({"all", "inner", "outer", "segal_core"}));

  auto* graftc = app.add_subcommand("graft", "graft upper onto a leaf of lower");
  graftc->add_option("--lower", lower)->required();
  graftc->add_option("--upper", upper)->required();
  graftc->add_option("--at", at)->required();

  auto* neck = app.add_subcommand("necklace", "necklace beads, membership, restriction, maps");
  neck->add_option("verb", verb)->required()->check(
      CLI::IsMember({"beads", "member", "restrict", "map-check"}));
  neck->add_option("--carrier", tree)->required();
  neck->add_option("--joints", joints);
  neck->add_option("--face", face, "a face named by carrier edges");
  neck->add_option("--target", target);
  neck->add_option("--target-joints", target_joints);
  neck->add_option("--map", map);

  auto* nw = app.add_subcommand("nw", "simplices of NW(T) or NW(n) over a tree");
  nw->add_option("--carrier", tree)->required();
  nw->add_option("--joints", joints);
  nw->add_option("--source", source)->required();
  nw->add_option("--level", level);

  auto* w = app.add_subcommand("w", "mapping spaces of the rigidification");
  w->add_option("verb", verb)->required()->check(CLI::IsMember({"space", "count"}));
  w->add_option("--presheaf", presheaf)->required();
  w->add_option("--signature", signature, "\"a,b;r\" or leaf-root");
  w->add_option("--dim", dim, "keep cells up to this dimension");
  w->add_option("--bound", bound);

  auto* tau = app.add_subcommand("tau", "operations of the homotopy operad");
  tau->add_option("--presheaf", presheaf)->required();
  tau->add_option("--signature", signature);
  tau->add_option("--bound", bound)->required();

  auto* segal = app.add_subcommand("segal", "strict Segal condition");
  segal->add_option("--presheaf", presheaf)->required();
  segal->add_option("--bound", bound);
  segal->add_flag("--all", all_failures, "report every failure");

  std::size_t cube_k = 0, boundary_axes = 0, endpoint_axes = 0;
  auto* exp = app.add_subcommand("export", "export a tree or a standard complex");
  auto* exp_tree = exp->add_option("--tree", tree);
  exp->add_option("--cube", cube_k);
  exp->add_option("--boundary-axes", boundary_axes);
  exp->add_option("--endpoint-axes", endpoint_axes);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << Json{{"error", "usage"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  }

  try {
    if (bound == 0) bound = default_max_edges();
    if (*parse) {
      out.tree(tree_arg(tree));
    } else if (*mapc || *fact || *cls) {
      Tree s = tree_arg(source), t = tree_arg(target);
      TreeMap m = map_arg(s, t, map);
      if (*mapc) {
        out.json(Json{{"valid", true}, {"map", map_to_json(m)}, {"describe", describe(m)}});
      } else if (*cls) {
        out.json(class_json(classify_map(m)));
      } else {
        Factorization f = factorize(m);
        out.json(Json{{"iso", map_to_json(f.iso)},
                      {"degeneracy", map_to_json(f.pd)},
                      {"inner_face", map_to_json(f.pi)},
                      {"outer_face", map_to_json(f.po)},
                      {"recomposes", compose(f.po, compose(f.pi, compose(f.pd, f.iso))) == m}});
      }
    } else if (*faces) {
      Tree t = tree_arg(tree);
      Json list = Json::array();
      for (const Face& f : enumerate_faces(t, parse_face_kind(kind)))
        list.push_back(Json{{"tree", print_tree(f.tree)}, {"inclusion", map_to_json(f.inclusion)}});
      out.json(Json{{"kind", kind}, {"count", list.size()}, {"faces", list}});
    } else if (*graftc) {
      out.tree(graft(tree_arg(lower), tree_arg(upper), at));
    } else if (*neck) {
      Tree t = tree_arg(tree);
      Necklace n = make_necklace(t, edge_ids(t, joints));
      if (verb == "beads") {
        out.json(necklace_json(n));
      } else if (verb == "member" || verb == "restrict") {
        if (face.empty()) throw DomainError("--face is required");
        Tree f = tree_arg(face);
        if (verb == "member")
          out.json(Json{{"face", print_tree(f)}, {"member", face_in_necklace(n, f)}});
        else
          out.json(necklace_json(restrict_necklace(n, f)));
      } else {
        if (target.empty() || map.empty()) throw DomainError("--target and --map are required");
        Tree tt = tree_arg(target);
        Necklace m = make_necklace(tt, edge_ids(tt, target_joints));
        TreeMap f = map_arg(t, tt, map);
        out.json(Json{{"map", map_to_json(f)}, {"necklace_map", necklace_map_check(n, m, f)}});
      }
    } else if (*nw) {
      Tree t = tree_arg(tree), s = tree_arg(source);
      Necklace n = make_necklace(t, edge_ids(t, joints));
      std::vector<NWString> strings = nw_simplices(n, s, static_cast<int>(level));
      Json list = Json::array();
      for (const NWString& str : strings) {
        Json chain = Json::array();
        for (const Tree& c : str.chain) chain.push_back(print_tree(c));
        list.push_back(Json{{"chain", chain}, {"head", map_to_json(str.head)}});
      }
      out.json(Json{{"necklace", necklace_to_json(n)},
                    {"source", print_tree(s)},
                    {"level", level},
                    {"count", strings.size()},
                    {"simplices", list}});
    } else if (*w) {
      auto x = presheaf_arg(presheaf);
      Signature sig = signature_arg(*x, signature);
      MappingSpace ms = mapping_space(*x, sig, bound);
      SimplicialSet space = ms.space;
      if (dim >= 0 && space.dimension() > dim) {
        SimplicialSet cut;
        for (int d = 0; d <= dim; ++d)
          for (std::size_t c = 0; c < space.cell_count(d); ++c)
            cut.add_cell(d, space.faces(d, static_cast<int>(c)),
                         space.label(d, static_cast<int>(c)));
        space = std::move(cut);
      }
      if (verb == "space")
        out.sset(space);
      else
        out.json(Json{{"presheaf", x->describe()},
                      {"signature", signature},
                      {"cells", space.cell_vector()}});
    } else if (*tau) {
      auto x = presheaf_arg(presheaf);
      Signature sig = signature_arg(*x, signature);
      TauReport r = tau_operations(*x, sig, bound);
      out.json(Json{{"presheaf", x->describe()},
                    {"signature", signature},
                    {"bound", r.bound},
                    {"exact", r.exact},
                    {"triples", r.triples.size()},
                    {"classes", r.classes}});
    } else if (*segal) {
      auto x = presheaf_arg(presheaf);
      SegalReport r = segal_check(*x, bound, all_failures);
      Json fails = Json::array();
      for (const auto& f : r.failures) fails.push_back(witness_json(*x, f));
      out.json(Json{{"presheaf", x->describe()},
                    {"bound", bound},
                    {"pass", r.pass},
                    {"trees_checked", r.trees_checked},
                    {"failures", fails}});
    } else if (*exp) {
      if (exp_tree->count() > 0)
        out.tree(tree_arg(tree));
      else if (cube_k > 0)
        out.sset(cube(cube_k));
      else
        out.sset(pushout_product_domain(boundary_axes, endpoint_axes));
    }
    return 0;
  } catch (const ParseError& e) {
    std::cerr << Json{{"error", "parse"}, {"message", e.what()}, {"position", e.position()}}.dump()
              << "\n";
  } catch (const RelationViolation& e) {
    std::cerr << Json{{"error", "relation"}, {"relation", e.relation()}, {"message", e.what()}}
                     .dump()
              << "\n";
  } catch (const Json::exception& e) {
    std::cerr << Json{{"error", "json"}, {"message", e.what()}}.dump() << "\n";
  } catch (const std::exception& e) {
    std::cerr << Json{{"error", "domain"}, {"message", e.what()}}.dump() << "\n";
  }
  return 1;
}
