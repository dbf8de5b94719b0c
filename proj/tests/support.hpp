#pragma once

#include <random>
#include <string>
#include <vector>

#include "dendron/tree.hpp"
#include "dendron/tree_map.hpp"

namespace testing {

using namespace dendron;

inline Tree sample_tree() { return parse_tree("r(c(a,b),d,e())"); }

inline Tree figure_tree() {
  return parse_tree("r(a(a1(l1,l2),l3),b(b1(b2())),d(c(c1(),c2()),d1(d2())))");
}

/// Random tree grown by attaching vertices to random leaves.
inline Tree random_tree(std::mt19937& rng, int max_vertices,
                        const std::string& prefix = "e",
                        int max_arity = 3) {
  std::vector<VertexRecord> recs;
  std::vector<std::string> leaves{prefix + "0"};
  int next = 1;
  int target = std::uniform_int_distribution<int>(0, max_vertices)(rng);
  for (int i = 0; i < target && !leaves.empty(); ++i) {
    std::size_t pick =
        std::uniform_int_distribution<std::size_t>(0, leaves.size() - 1)(rng);
    std::string out = leaves[pick];
    leaves.erase(leaves.begin() + static_cast<long>(pick));
    int arity = std::uniform_int_distribution<int>(0, max_arity)(rng);
    VertexRecord r{out, {}};
    for (int k = 0; k < arity; ++k) {
      r.inputs.push_back(prefix + std::to_string(next++));
      leaves.push_back(r.inputs.back());
    }
    recs.push_back(std::move(r));
  }
  return Tree::from_records(prefix + "0", recs);
}

/// Random tree with at most max_edges edges.
inline Tree random_small_tree(std::mt19937& rng, std::size_t max_edges,
                              const std::string& prefix = "e") {
  while (true) {
    Tree t = random_tree(rng, static_cast<int>(max_edges), prefix, 3);
    if (t.edge_count() <= max_edges) return t;
  }
}

/// Degeneracy s' -> s where s' has a new unary vertex on edge e of s, its
/// input named `fresh`.
inline TreeMap insert_unary(const Tree& s, EdgeId e, const std::string& fresh) {
  auto recs = records(s);
  std::string root = s.name(s.root());
  for (auto& r : recs)
    if (r.out == s.name(e)) r.out = fresh;
  recs.push_back({s.name(e), {fresh}});
  Tree bigger = Tree::from_records(root, recs);
  std::vector<EdgeId> a;
  for (const auto& n : bigger.names()) a.push_back(s.id(n == fresh ? s.name(e) : n));
  return TreeMap{bigger, s, a};
}

}  // namespace testing
