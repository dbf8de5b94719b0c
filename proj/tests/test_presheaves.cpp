#include <doctest.h>

#include <map>
#include <set>

#include "dendron/dendroidal_set.hpp"
#include "dendron/faces.hpp"
#include "support.hpp"

using namespace dendron;
using testing::sample_tree;

namespace {

std::vector<std::vector<EdgeId>> nonempty_subsets(const std::vector<EdgeId>& s) {
  std::vector<std::vector<EdgeId>> out;
  for (unsigned m = 1; m < (1u << s.size()); ++m) {
    std::vector<EdgeId> sub;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (m >> i & 1u) sub.push_back(s[i]);
    out.push_back(sub);
  }
  return out;
}

// Membership in a union of faces, straight from the definition.
bool in_union(const TreeMap& m, const std::vector<Tree>& faces) {
  Tree img = image_tree(m);
  for (const Tree& f : faces)
    if (face_leq(img, f)) return true;
  return false;
}

std::vector<Tree> face_trees(const Tree& u, FaceKind k) {
  std::vector<Tree> out;
  for (auto& f : enumerate_faces(u, k)) out.push_back(f.tree);
  return out;
}

// The colimit of the vertex corollas of t glued along their shared edges.
ColimitPresentation vertex_colimit(const Tree& t) {
  std::vector<Tree> gens;
  std::vector<ColimitPresentation::Relation> rels;
  std::map<std::string, std::size_t> stick;
  for (EdgeId e = 0; e < static_cast<EdgeId>(t.edge_count()); ++e) {
    stick[t.name(e)] = gens.size();
    gens.push_back(Tree::stick(t.name(e)));
  }
  for (const auto& v : t.vertices()) {
    Tree c = outer_subtree(t, v.out, v.inputs);
    std::size_t ci = gens.size();
    gens.push_back(c);
    for (const auto& n : c.names()) {
      Tree s = Tree::stick(n);
      rels.push_back({stick.at(n), ci, TreeMap{s, c, {c.id(n)}}});
    }
  }
  return ColimitPresentation(gens, rels);
}

void check_functoriality(const DendroidalSet& x, std::size_t max_edges,
                         std::mt19937& rng, int samples) {
  auto trees = enumerate_trees(max_edges);
  int done = 0;
  int attempts = 0;
  while (done < samples && attempts < samples * 200) {
    ++attempts;
    const Tree& a = trees[rng() % trees.size()];
    const Tree& b = trees[rng() % trees.size()];
    const Tree& c = trees[rng() % trees.size()];
    auto xs = x.dendrices(c);
    auto g = maps_between(b, c);
    auto f = maps_between(a, b);
    if (xs.empty() || g.empty() || f.empty()) continue;
    const Dendrex& d = xs[rng() % xs.size()];
    const TreeMap& gm = g[rng() % g.size()];
    const TreeMap& fm = f[rng() % f.size()];
    CHECK(x.restrict(d, compose(gm, fm)) == x.restrict(x.restrict(d, gm), fm));
    CHECK(x.restrict(d, identity_map(c)) == d);
    auto xb = x.dendrices(b);
    CHECK(std::binary_search(xb.begin(), xb.end(), x.restrict(d, gm)));
    ++done;
  }
  CHECK(done == samples);
}

}  // namespace

TEST_CASE("face enumeration of the sample tree") {
  Tree t = sample_tree();
  CHECK(enumerate_faces(t, FaceKind::inner).size() == 4);
  CHECK(enumerate_faces(t, FaceKind::segal_core).size() == 9);
  auto eta = enumerate_faces(parse_tree("x"), FaceKind::all);
  REQUIRE(eta.size() == 1);
  CHECK(eta[0].tree == parse_tree("x"));

  // planar inner faces and planar faces counted as maps from all shapes
  std::size_t inner = 0, all = 0;
  for (const Tree& s : enumerate_trees(t.edge_count()))
    for (const TreeMap& m : maps_between(s, t)) {
      MapClass c = classify_map(m);
      if (c.face && c.planar) ++all;
      if (c.inner_face && c.planar) ++inner;
    }
  CHECK(inner == 4);
  CHECK(all == enumerate_faces(t, FaceKind::all).size());
}

TEST_CASE("face counts agree with planar face maps") {
  for (const Tree& t : enumerate_trees(5)) {
    std::size_t all = 0, outer = 0, inner = 0;
    for (const Tree& s : enumerate_trees(t.edge_count()))
      for (const TreeMap& m : maps_between(s, t)) {
        MapClass c = classify_map(m);
        if (!c.planar || !c.face) continue;
        ++all;
        if (c.outer_face) ++outer;
        if (c.inner_face) ++inner;
      }
    CHECK(all == enumerate_faces(t, FaceKind::all).size());
    CHECK(outer == enumerate_faces(t, FaceKind::outer).size());
    CHECK(inner == enumerate_faces(t, FaceKind::inner).size());
    std::size_t sc = t.edge_count() + t.vertex_count();
    CHECK(enumerate_faces(t, FaceKind::segal_core).size() == sc);
  }
}

TEST_CASE("inner faces form a Boolean lattice") {
  for (const Tree& t : enumerate_trees(6)) {
    InnerFaceLattice lat(t);
    CHECK(lat.size() == (std::size_t{1} << t.inner_edges().size()));
    std::set<std::string> printed;
    for (std::size_t a = 0; a < lat.size(); ++a) {
      printed.insert(print_tree(lat.face(a)));
      for (std::size_t b = 0; b < lat.size(); ++b) {
        CHECK(face_leq(lat.face(a), lat.face(b)) == lat.leq(a, b));
        // the join is the least face above both
        std::size_t j = lat.join(a, b);
        CHECK(face_leq(lat.face(a), lat.face(j)));
        CHECK(face_leq(lat.face(b), lat.face(j)));
      }
    }
    CHECK(printed.size() == lat.size());
  }
}

TEST_CASE("dendrices of representables and subpresheaves") {
  Tree t = sample_tree();
  Representable rep(t);
  CHECK(rep.colors().size() == 6);
  Boundary bd(t);
  CHECK(bd.dendrices(t).empty());
  Tree c2 = parse_tree("r(a,b)");
  SegalCore sc(c2);
  Representable rc(c2);
  for (const Tree& s : enumerate_trees(5))
    CHECK(sc.dendrices(s) == rc.dendrices(s));
  CHECK(Boundary(parse_tree("x")).colors().empty());
}

TEST_CASE("subpresheaf membership matches the defining unions") {
  for (const Tree& u : enumerate_trees(5)) {
    std::vector<Tree> proper;
    for (const Tree& f : face_trees(u, FaceKind::all))
      if (!(f == u)) proper.push_back(f);
    std::vector<Tree> sc = face_trees(u, FaceKind::segal_core);
    Boundary bd(u);
    SegalCore core(u);
    std::vector<std::pair<std::unique_ptr<Horn>, std::vector<Tree>>> horns;
    for (const auto& e : nonempty_subsets(u.inner_edges())) {
      Tree minus = contract(u, e);
      std::vector<Tree> fs;
      for (const Tree& f : face_trees(u, FaceKind::all))
        if (!face_leq(minus, f)) fs.push_back(f);
      horns.emplace_back(std::make_unique<Horn>(u, e), fs);
    }
    for (const Tree& s : enumerate_trees(4))
      for (const TreeMap& m : maps_between(s, u)) {
        CHECK(bd.contains(s, m.assignment) == in_union(m, proper));
        CHECK(core.contains(s, m.assignment) == in_union(m, sc));
        for (const auto& [h, fs] : horns)
          CHECK(h->contains(s, m.assignment) == in_union(m, fs));
      }
  }
}

TEST_CASE("strict Segal condition for representables") {
  for (const Tree& s : enumerate_trees(5)) {
    Representable rep(s);
    auto r = segal_check(rep, 5);
    CHECK(r.pass);
    CHECK(r.trees_checked == 122);
  }
}

TEST_CASE("boundaries fail the Segal condition at the leaf-root signature") {
  for (const Tree& t : enumerate_trees(5)) {
    if (t.is_stick()) continue;
    Boundary bd(t);
    auto r = segal_check(bd, 5, true);
    if (t.inner_edges().empty()) {
      // a corolla boundary is a union of sticks, hence discrete and Segal
      CHECK(r.pass);
      continue;
    }
    CHECK_FALSE(r.pass);
    auto leaves = t.leaves();
    for (const SegalWitness& w : r.failures) {
      CHECK(w.coloring[w.tree.root()] == Dendrex{t.root()});
      std::vector<EdgeId> got;
      for (EdgeId l : w.tree.leaves()) got.push_back(w.coloring[l].at(0));
      std::sort(got.begin(), got.end());
      CHECK(got == leaves);
      CHECK(w.fiber < w.families);
    }
  }
  // at the corolla itself both sides are empty
  Boundary c2(parse_tree("r(a,b)"));
  CHECK(segal_check_at(c2, parse_tree("r(a,b)")).empty());
}

TEST_CASE("the stick never fails") {
  Boundary bd(sample_tree());
  CHECK(segal_check_at(bd, parse_tree("x")).empty());
  Horn h(sample_tree(), {sample_tree().id("c")});
  CHECK(segal_check_at(h, parse_tree("x")).empty());
}

TEST_CASE("dendrices split over colorings") {
  std::mt19937 rng(3);
  Tree u = parse_tree("r(c(a,b),d(x))");
  std::vector<std::unique_ptr<DendroidalSet>> sets;
  sets.push_back(std::make_unique<Representable>(u));
  sets.push_back(std::make_unique<Boundary>(u));
  sets.push_back(std::make_unique<Horn>(u, std::vector<EdgeId>{u.id("c")}));
  sets.push_back(std::make_unique<SegalCore>(u));
  auto vc = vertex_colimit(u);
  for (const auto& x : sets) {
    auto colors = x->colors();
    for (const Tree& s : enumerate_trees(3)) {
      std::size_t total = 0;
      std::size_t n = s.edge_count();
      std::vector<std::size_t> idx(n, 0);
      while (true) {
        Coloring c{s, {}};
        for (std::size_t i = 0; i < n; ++i) c.colors.push_back(colors[idx[i]]);
        total += fiber(*x, c).size();
        std::size_t i = 0;
        for (; i < n; ++i) {
          if (++idx[i] < colors.size()) break;
          idx[i] = 0;
        }
        if (i == n) break;
      }
      CHECK(total == x->dendrices(s).size());
    }
    check_functoriality(*x, 4, rng, 30);
  }
  check_functoriality(vc, 4, rng, 30);
}

TEST_CASE("colimit of vertex corollas is the Segal core") {
  for (const char* text : {"r(a(c,d),b)", "r(c(a,b),d,e())", "r(a(b(c)))"}) {
    Tree t = parse_tree(text);
    auto vc = vertex_colimit(t);
    SegalCore sc(t);
    for (const Tree& s : enumerate_trees(5))
      CHECK(vc.dendrices(s).size() == sc.dendrices(s).size());
    // the core is not itself Segal: the vertex families over t have no filler
    auto w = segal_check_at(vc, t);
    REQUIRE_FALSE(w.empty());
    CHECK(w[0].fiber == 0);
    CHECK(segal_check_at(Representable(t), t).empty());
  }
}

TEST_CASE("degenerate-input policy") {
  ColimitPresentation empty({}, {});
  CHECK(empty.colors().empty());
  CHECK(segal_check(empty, 4).pass);
  ColimitPresentation point({parse_tree("x")}, {});
  CHECK(point.colors().size() == 1);
  CHECK(point.dendrices(parse_tree("r(a)")).size() == 1);
  CHECK(point.dendrices(parse_tree("r(a,b)")).empty());
  CHECK(segal_check(point, 5).pass);
}

TEST_CASE("Eilenberg-Zilber normal forms") {
  Tree t = parse_tree("r(c(a,b),d(x))");
  Representable rep(t);
  // non-degenerate dendrices are their own normal form
  for (const Dendrex& d : rep.dendrices(t)) {
    if (!is_identity(factorize(TreeMap{t, t, d}).pd)) continue;
    EzForm ez = ez_normal_form(rep, t, d);
    CHECK(is_identity(ez.degeneracy));
    CHECK(ez.y == d);
  }

  // degenerate iff the pd factor is not the identity
  for (const Tree& s : enumerate_trees(5))
    for (const TreeMap& m : maps_between(s, t)) {
      bool deg = is_degenerate(rep, s, m.assignment);
      CHECK(deg == !is_identity(factorize(m).pd));
      // oracle: try every degeneracy out of s
      bool oracle = false;
      auto unary = unary_vertices(s);
      for (unsigned mask = 1; mask < (1u << unary.size()) && !oracle; ++mask) {
        Tree cur = s;
        TreeMap sigma = identity_map(s);
        // collapse the chosen vertices one at a time, tracking them by name
        std::vector<std::string> outs;
        for (std::size_t i = 0; i < unary.size(); ++i)
          if (mask >> i & 1u)
            outs.push_back(s.name(s.vertex(unary[i]).inputs[0]));
        for (const auto& upper : outs) {
          auto e = cur.find(upper);
          if (!e) break;
          int v = cur.vertex_below(*e);
          UnaryCollapse c = collapse_unary(cur, v);
          sigma = compose(c.sigma, sigma);
          cur = c.collapsed;
        }
        for (const Dendrex& y : rep.dendrices(cur))
          if (rep.restrict(y, sigma) == m.assignment) oracle = true;
      }
      CHECK(deg == oracle);
      EzForm ez = ez_normal_form(rep, s, m.assignment);
      CHECK_FALSE(is_degenerate(rep, ez.degeneracy.target, ez.y));
      CHECK(rep.restrict(ez.y, ez.degeneracy) == m.assignment);
      CHECK(classify_map(ez.degeneracy).degeneracy);
      EzForm again = ez_normal_form(rep, ez.degeneracy.target, ez.y);
      CHECK(is_identity(again.degeneracy));
    }
}

TEST_CASE("construct then recover degenerate dendrices") {
  std::mt19937 rng(5);
  Tree u = parse_tree("r(c(a,b),d(x))");
  Horn h(u, {u.id("c")});
  int done = 0;
  while (done < 100) {
    Tree y_tree = testing::random_small_tree(rng, 4, "y");
    auto ys = h.dendrices(y_tree);
    std::vector<Dendrex> nondeg;
    for (const Dendrex& y : ys)
      if (!is_degenerate(h, y_tree, y)) nondeg.push_back(y);
    if (nondeg.empty()) continue;
    const Dendrex& y = nondeg[rng() % nondeg.size()];
    // insert one or two unary vertices to get a degeneracy s -> y_tree
    Tree s = y_tree;
    TreeMap sigma = identity_map(y_tree);
    int reps = 1 + static_cast<int>(rng() % 2);
    for (int k = 0; k < reps; ++k) {
      EdgeId e = static_cast<EdgeId>(rng() % s.edge_count());
      TreeMap up = testing::insert_unary(s, e, "z" + std::to_string(k));
      sigma = compose(sigma, up);
      s = up.source;
    }
    Dendrex x = h.restrict(y, sigma);
    CHECK(is_degenerate(h, s, x));
    EzForm ez = ez_normal_form(h, s, x);
    // recovered up to the unique iso compatible with the degeneracies
    bool found = false;
    for (const TreeMap& iso : isomorphisms(ez.degeneracy.target, y_tree))
      if (compose(iso, ez.degeneracy).assignment == sigma.assignment &&
          h.restrict(y, iso) == ez.y)
        found = true;
    CHECK(found);
    ++done;
  }
}
