#include "dendron/tree_map.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace dendron {

std::map<std::string, std::string> TreeMap::by_name() const {
  std::map<std::string, std::string> out;
  for (EdgeId e = 0; e < static_cast<EdgeId>(source.edge_count()); ++e)
    out[source.name(e)] = target.name(assignment[e]);
  return out;
}

bool MapClass::satisfies(const MapClass& r) const {
  return (!r.tall || tall) && (!r.face || face) &&
         (!r.inner_face || inner_face) && (!r.outer_face || outer_face) &&
         (!r.degeneracy || degeneracy) && (!r.planar || planar) &&
         (!r.convex || convex) && (!r.iso || iso);
}

namespace {

std::string relation_text(const Tree& s, const Vertex& v) {
  std::string out;
  for (EdgeId e : v.inputs) out += s.name(e) + " ";
  if (v.inputs.empty()) out += "() ";
  return out + "<= " + s.name(v.out);
}

std::vector<EdgeId> image_of(const std::vector<EdgeId>& a,
                             const std::vector<EdgeId>& es) {
  std::vector<EdgeId> out;
  out.reserve(es.size());
  for (EdgeId e : es) out.push_back(a[e]);
  return out;
}

}  // namespace

bool is_valid_assignment(const Tree& source, const Tree& target,
                         const std::vector<EdgeId>& a) {
  if (a.size() != source.edge_count()) return false;
  for (EdgeId e : a)
    if (e < 0 || e >= static_cast<EdgeId>(target.edge_count())) return false;
  for (const auto& v : source.vertices())
    if (!broad_leq(image_of(a, v.inputs), a[v.out], target, false))
      return false;
  return true;
}

TreeMap validate_map(const Tree& source, const Tree& target,
                     std::vector<EdgeId> a) {
  if (a.size() != source.edge_count())
    throw TreeError("assignment is not total on source edges");
  for (const auto& v : source.vertices())
    if (!broad_leq(image_of(a, v.inputs), a[v.out], target, false)) {
      std::string rel = relation_text(source, v);
      throw RelationViolation(rel, "relation " + rel + " is not preserved");
    }
  return TreeMap{source, target, std::move(a)};
}

TreeMap validate_map(const Tree& source, const Tree& target,
                     const std::map<std::string, std::string>& assignment) {
  std::vector<EdgeId> a(source.edge_count(), -1);
  for (const auto& [from, to] : assignment) a[source.id(from)] = target.id(to);
  for (EdgeId e = 0; e < static_cast<EdgeId>(a.size()); ++e)
    if (a[e] < 0)
      throw TreeError("no image given for edge '" + source.name(e) + "'");
  return validate_map(source, target, std::move(a));
}

TreeMap identity_map(const Tree& t) {
  std::vector<EdgeId> a(t.edge_count());
  std::iota(a.begin(), a.end(), 0);
  return TreeMap{t, t, std::move(a)};
}

bool is_identity(const TreeMap& m) {
  if (m.source.vertices() != m.target.vertices() ||
      m.source.edge_count() != m.target.edge_count())
    return false;
  for (EdgeId e = 0; e < static_cast<EdgeId>(m.assignment.size()); ++e)
    if (m.assignment[e] != e) return false;
  return true;
}

TreeMap name_map(const Tree& source, const Tree& target) {
  std::vector<EdgeId> a;
  for (const auto& n : source.names()) a.push_back(target.id(n));
  return validate_map(source, target, std::move(a));
}

bool is_tall(const TreeMap& m) {
  if (m(m.source.root()) != m.target.root()) return false;
  auto ls = m.source.leaves();
  auto lt = m.target.leaves();
  if (ls.size() != lt.size()) return false;
  auto img = image_of(m.assignment, ls);
  std::sort(img.begin(), img.end());
  return img == lt;
}

bool is_face(const TreeMap& m) {
  std::set<EdgeId> s(m.assignment.begin(), m.assignment.end());
  return s.size() == m.assignment.size();
}

bool is_degeneracy(const TreeMap& m) {
  std::set<EdgeId> s(m.assignment.begin(), m.assignment.end());
  if (s.size() != m.target.edge_count()) return false;
  for (EdgeId l : m.source.leaves())
    if (!m.target.is_leaf(m(l))) return false;
  return true;
}

bool is_convex(const TreeMap& m) {
  const Tree& t = m.target;
  std::vector<char> in(t.edge_count(), 0);
  for (EdgeId e : m.assignment) in[e] = 1;
  std::vector<char> below_image(t.edge_count(), 0);
  for (EdgeId e : m.assignment)
    for (int v = t.vertex_below(e); v >= 0; v = t.vertex_below(t.vertex(v).out))
      below_image[t.vertex(v).out] = 1;
  for (EdgeId mid = 0; mid < static_cast<EdgeId>(t.edge_count()); ++mid) {
    if (in[mid] || !below_image[mid]) continue;
    for (int v = t.vertex_below(mid); v >= 0;
         v = t.vertex_below(t.vertex(v).out))
      if (in[t.vertex(v).out]) return false;
  }
  // Edges capped by nullary vertices are forced into the closure of the
  // image without lying between two image edges.
  Tree closure = image_closure(m);
  for (const auto& n : closure.names())
    if (!in[t.id(n)]) return false;
  return true;
}

bool is_planar(const TreeMap& m) {
  for (const auto& v : m.source.vertices())
    if (!broad_leq(image_of(m.assignment, v.inputs), m(v.out), m.target,
                   true))
      return false;
  return true;
}

TreeMap compose(const TreeMap& g, const TreeMap& f) {
  if (!(f.target == g.source))
    throw TreeError("maps are not composable: target and source differ");
  std::vector<EdgeId> a;
  a.reserve(f.assignment.size());
  for (EdgeId e : f.assignment) a.push_back(g.assignment[e]);
  return TreeMap{f.source, g.target, std::move(a)};
}

Tree image_closure(const TreeMap& m) {
  return outer_subtree(m.target, m(m.source.root()),
                       image_of(m.assignment, m.source.leaves()));
}

Tree image_tree(const TreeMap& m) {
  Tree closure = image_closure(m);
  std::set<std::string> img;
  for (EdgeId e : m.assignment) img.insert(m.target.name(e));
  std::vector<EdgeId> drop;
  for (EdgeId e : closure.inner_edges())
    if (!img.count(closure.name(e))) drop.push_back(e);
  return contract(closure, drop);
}

Factorization factorize(const TreeMap& m) {
  const Tree& s = m.source;
  Tree closure = image_closure(m);
  Tree img = image_tree(m);

  auto recs = records(s);
  for (std::size_t i = 0; i < s.vertex_count(); ++i) {
    const Vertex& v = s.vertex(static_cast<int>(i));
    if (v.inputs.size() < 2) continue;
    auto cut = image_of(m.assignment, v.inputs);
    auto order = outer_subtree_leaves(m.target, m(v.out), cut);
    if (!order) throw TreeError("factorize: invalid map");
    std::vector<std::string> sorted;
    for (EdgeId t : *order)
      for (EdgeId c : v.inputs)
        if (m(c) == t) sorted.push_back(s.name(c));
    recs[i].inputs = sorted;
  }
  Tree sp = Tree::from_records(s.name(s.root()), recs);

  TreeMap iso = name_map(s, sp);
  std::vector<EdgeId> pd_a;
  for (const auto& n : sp.names())
    pd_a.push_back(img.id(m.image(n)));
  TreeMap pd{sp, img, std::move(pd_a)};
  TreeMap pi = name_map(img, closure);
  TreeMap po = name_map(closure, m.target);
  return Factorization{std::move(iso), std::move(pd), std::move(pi),
                       std::move(po)};
}

MapClass classify_map(const TreeMap& m) {
  MapClass c;
  c.tall = is_tall(m);
  c.face = is_face(m);
  c.degeneracy = is_degeneracy(m);
  c.planar = is_planar(m);
  c.convex = is_convex(m);
  c.iso = c.face && c.degeneracy;
  c.inner_face = c.face && c.tall;
  c.outer_face = c.face && c.convex;
  return c;
}

TreeMap leaf_root(const Tree& t) {
  if (t.is_stick()) return identity_map(t);
  Tree c = Tree::from_records(t.name(t.root()),
                              {VertexRecord{t.name(t.root()), t.leaf_names()}});
  return name_map(c, t);
}

std::vector<TreeMap> enumerate_maps(const Tree& source, const Tree& target,
                                    const MapClass& required) {
  std::vector<TreeMap> out;
  std::size_t n = source.edge_count();
  std::size_t k = target.edge_count();
  std::vector<EdgeId> a(n, 0);
  while (true) {
    if (is_valid_assignment(source, target, a)) {
      TreeMap m{source, target, a};
      if (classify_map(m).satisfies(required)) out.push_back(std::move(m));
    }
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (++a[i] < static_cast<EdgeId>(k)) break;
      a[i] = 0;
      if (i == 0) return out;
    }
    if (n == 0) return out;
  }
}

namespace {

// cuts[t][k]: leaf sets (planar order) of outer subtrees rooted at t with k
// leaves.
std::vector<std::vector<std::vector<std::vector<EdgeId>>>> cuts_by_size(
    const Tree& t) {
  std::vector<std::vector<std::vector<EdgeId>>> options(t.edge_count());
  for (EdgeId e = static_cast<EdgeId>(t.edge_count()) - 1; e >= 0; --e) {
    auto& opt = options[e];
    opt.push_back({e});
    int v = t.vertex_above(e);
    if (v < 0) continue;
    std::vector<std::vector<EdgeId>> acc{{}};
    for (EdgeId i : t.vertex(v).inputs) {
      std::vector<std::vector<EdgeId>> next;
      for (const auto& a : acc)
        for (const auto& o : options[i]) {
          auto c = a;
          c.insert(c.end(), o.begin(), o.end());
          next.push_back(std::move(c));
        }
      acc = std::move(next);
    }
    opt.insert(opt.end(), acc.begin(), acc.end());
  }
  std::vector<std::vector<std::vector<std::vector<EdgeId>>>> out(
      t.edge_count());
  for (EdgeId e = 0; e < static_cast<EdgeId>(t.edge_count()); ++e)
    for (auto& c : options[e]) {
      if (out[e].size() <= c.size()) out[e].resize(c.size() + 1);
      out[e][c.size()].push_back(c);
    }
  return out;
}

}  // namespace

std::vector<std::vector<EdgeId>> map_assignments(const Tree& source,
                                                 const Tree& target,
                                                 bool tall_only) {
  std::vector<std::vector<EdgeId>> out;
  auto cuts = cuts_by_size(target);
  std::vector<EdgeId> a(source.edge_count(), -1);
  std::vector<char> leaf_used(target.edge_count(), 0);
  std::size_t nv = source.vertex_count();

  auto rec = [&](auto&& self, std::size_t vi) -> void {
    if (vi == nv) {
      if (tall_only) {
        for (EdgeId l : target.leaves())
          if (!leaf_used[l]) return;
      }
      out.push_back(a);
      return;
    }
    const Vertex& v = source.vertex(static_cast<int>(vi));
    std::size_t k = v.inputs.size();
    EdgeId t = a[v.out];
    if (cuts[t].size() <= k) return;
    for (const auto& cut : cuts[t][k]) {
      std::vector<EdgeId> perm = cut;
      std::sort(perm.begin(), perm.end());
      do {
        bool ok = true;
        std::size_t placed = 0;
        for (; placed < k; ++placed) {
          EdgeId s = v.inputs[placed];
          EdgeId img = perm[placed];
          if (tall_only && source.is_leaf(s)) {
            if (!target.is_leaf(img) || leaf_used[img]) {
              ok = false;
              break;
            }
            leaf_used[img] = 1;
          }
          a[s] = img;
        }
        if (ok) self(self, vi + 1);
        for (std::size_t j = 0; j < placed; ++j) {
          EdgeId s = v.inputs[j];
          if (tall_only && source.is_leaf(s)) leaf_used[a[s]] = 0;
          a[s] = -1;
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  };

  std::vector<EdgeId> roots;
  if (tall_only)
    roots.push_back(target.root());
  else
    for (EdgeId e = 0; e < static_cast<EdgeId>(target.edge_count()); ++e)
      roots.push_back(e);
  for (EdgeId r : roots) {
    a[source.root()] = r;
    bool root_leaf = tall_only && source.is_leaf(source.root());
    if (root_leaf) {
      if (!target.is_leaf(r)) continue;
      leaf_used[r] = 1;
    }
    rec(rec, 0);
    if (root_leaf) leaf_used[r] = 0;
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<TreeMap> maps_between(const Tree& source, const Tree& target) {
  std::vector<TreeMap> out;
  for (auto& a : map_assignments(source, target))
    out.push_back(TreeMap{source, target, std::move(a)});
  return out;
}

std::vector<TreeMap> tall_maps(const Tree& source, const Tree& target) {
  std::vector<TreeMap> out;
  for (auto& a : map_assignments(source, target, true))
    out.push_back(TreeMap{source, target, std::move(a)});
  return out;
}

std::vector<TreeMap> isomorphisms(const Tree& source, const Tree& target) {
  std::vector<TreeMap> out;
  if (source.edge_count() != target.edge_count() ||
      source.vertex_count() != target.vertex_count())
    return out;
  for (auto& a : map_assignments(source, target, true)) {
    TreeMap m{source, target, std::move(a)};
    if (is_face(m)) out.push_back(std::move(m));
  }
  return out;
}

std::vector<int> unary_vertices(const Tree& t) {
  std::vector<int> out;
  for (int v = 0; v < static_cast<int>(t.vertex_count()); ++v)
    if (t.vertex(v).inputs.size() == 1) out.push_back(v);
  return out;
}

UnaryCollapse collapse_unary(const Tree& t, int v) {
  const Vertex& u = t.vertex(v);
  if (u.inputs.size() != 1) throw TreeError("vertex is not unary");
  const std::string& lower = t.name(u.out);
  const std::string& upper = t.name(u.inputs[0]);
  std::vector<VertexRecord> recs;
  for (int w = 0; w < static_cast<int>(t.vertex_count()); ++w) {
    if (w == v) continue;
    VertexRecord r{t.name(t.vertex(w).out), {}};
    if (r.out == upper) r.out = lower;
    for (EdgeId e : t.vertex(w).inputs) r.inputs.push_back(t.name(e));
    recs.push_back(std::move(r));
  }
  Tree c = Tree::from_records(t.name(t.root()), recs);
  std::vector<EdgeId> sigma;
  for (const auto& n : t.names()) sigma.push_back(c.id(n == upper ? lower : n));
  TreeMap s{t, c, std::move(sigma)};
  TreeMap d = name_map(c, t);
  return UnaryCollapse{std::move(c), std::move(s), std::move(d)};
}

std::string describe(const TreeMap& m) {
  std::ostringstream os;
  for (EdgeId e = 0; e < static_cast<EdgeId>(m.source.edge_count()); ++e) {
    if (e) os << ' ';
    os << m.source.name(e) << "->" << m.target.name(m(e));
  }
  return os.str();
}

}  // namespace dendron
