#include <doctest.h>

#include <map>
#include <set>
#include <unordered_map>

#include "dendron/json_io.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace dendron;
using testing::sample_tree;

namespace {

TreeMap by_names(const char* s, const char* t,
                 std::map<std::string, std::string> extra = {}) {
  Tree src = parse_tree(s);
  Tree tgt = parse_tree(t);
  std::map<std::string, std::string> a;
  for (const auto& n : src.names()) a[n] = n;
  for (const auto& [k, v] : extra) a[k] = v;
  return validate_map(src, tgt, a);
}

const char* T = "r(c(a,b),d,e())";

struct FactorBits {
  bool iso, pd, pi, po;
};

FactorBits factor_bits(const TreeMap& m) {
  Factorization f = factorize(m);
  return {is_identity(f.iso), is_identity(f.pd), is_identity(f.pi),
          is_identity(f.po)};
}

}  // namespace

TEST_CASE("validation of the sample maps") {
  CHECK_NOTHROW(by_names("r(a,b,d)", T));
  CHECK_NOTHROW(by_names("r(c(a,b),d,e)", T));
  CHECK_NOTHROW(by_names("r(a,b,d,e)", T));
  CHECK_NOTHROW(by_names("r(c(a,b),d(x),e())", T, {{"x", "d"}}));
  CHECK_NOTHROW(by_names("r(c,d(x),e)", T, {{"x", "d"}}));
  try {
    by_names("r(c(b),d)", T);
    FAIL("expected a violation");
  } catch (const RelationViolation& e) {
    CHECK(e.relation() == "b <= c");
  }
  Tree t = sample_tree();
  CHECK_NOTHROW(validate_map(t, t, identity_map(t).assignment));
  CHECK_THROWS_AS(validate_map(t, t, std::map<std::string, std::string>{}),
                  TreeError);
}

TEST_CASE("classification of the sample maps") {
  MapClass s1 = classify_map(by_names("r(a,b,d)", T));
  CHECK(s1.inner_face);
  CHECK(s1.tall);
  CHECK_FALSE(s1.outer_face);

  MapClass s2 = classify_map(by_names("r(c(a,b),d,e)", T));
  CHECK(s2.outer_face);
  CHECK_FALSE(s2.inner_face);

  MapClass s3 = classify_map(by_names("r(a,b,d,e)", T));
  CHECK(s3.face);
  CHECK_FALSE(s3.inner_face);
  CHECK_FALSE(s3.outer_face);

  MapClass s4 =
      classify_map(by_names("r(c(a,b),d(x),e())", T, {{"x", "d"}}));
  CHECK(s4.degeneracy);
  CHECK(s4.tall);
  CHECK_FALSE(s4.face);

  MapClass s5 = classify_map(by_names("r(c,d(x),e)", T, {{"x", "d"}}));
  CHECK(s5.convex);
  CHECK_FALSE(s5.face);
  CHECK_FALSE(s5.tall);
  CHECK_FALSE(s5.degeneracy);

  MapClass id = classify_map(identity_map(sample_tree()));
  CHECK(id.tall);
  CHECK(id.face);
  CHECK(id.degeneracy);
  CHECK(id.planar);
  CHECK(id.convex);
  CHECK(id.iso);
  CHECK(id.inner_face);
  CHECK(id.outer_face);
}

TEST_CASE("factorization of the sample maps") {
  Tree t = sample_tree();
  Factorization id = factorize(identity_map(t));
  CHECK(is_identity(id.iso));
  CHECK(is_identity(id.pd));
  CHECK(is_identity(id.pi));
  CHECK(is_identity(id.po));

  Factorization s4 = factorize(by_names("r(c(a,b),d(x),e())", T, {{"x", "d"}}));
  CHECK(is_identity(s4.pi));
  CHECK(is_identity(s4.po));
  CHECK_FALSE(is_identity(s4.pd));

  Factorization s3 = factorize(by_names("r(a,b,d,e)", T));
  CHECK(is_identity(s3.pd));
  CHECK(is_identity(s3.iso));
  CHECK_FALSE(is_identity(s3.pi));
  CHECK_FALSE(is_identity(s3.po));
  CHECK(print_tree(s3.closure()) == "r(c(a,b),d,e)");
  CHECK(print_tree(s3.image()) == "r(a,b,d,e)");

  oracle::FactorizationOracle o;
  auto m = by_names("r(a,b,d,e)", T);
  auto res = o.check(m, s3);
  CHECK(res.chains == 1);
  CHECK(res.matches);

  // a non-planar map: the iso factor reorders siblings
  TreeMap swap = by_names("r(a,b)", "r(a,b)", {{"a", "b"}, {"b", "a"}});
  Factorization fs = factorize(swap);
  CHECK_FALSE(is_identity(fs.iso));
  CHECK(print_tree(fs.planarized()) == "r(b,a)");
  CHECK(is_identity(fs.po));
}

TEST_CASE("map counts") {
  Tree t = sample_tree();
  CHECK(enumerate_maps(parse_tree("x"), t).size() == 6);
  CHECK(enumerate_maps(parse_tree("x"), parse_tree("y")).size() == 1);
  CHECK(enumerate_maps(parse_tree("r(a,b)"), parse_tree("r(a,b)")).size() == 2);
  MapClass inner;
  inner.inner_face = true;
  inner.planar = true;
  CHECK(enumerate_maps(parse_tree("r(a,b,d)"), t, inner).size() == 1);
}

TEST_CASE("vertex-wise enumeration equals brute force") {
  auto trees = enumerate_trees(4);
  for (const Tree& s : trees)
    for (const Tree& t : trees) {
      auto brute = enumerate_maps(s, t);
      auto fast = maps_between(s, t);
      REQUIRE(brute.size() == fast.size());
      for (std::size_t i = 0; i < brute.size(); ++i)
        CHECK(brute[i].assignment == fast[i].assignment);
      MapClass tall;
      tall.tall = true;
      auto brute_tall = enumerate_maps(s, t, tall);
      auto fast_tall = tall_maps(s, t);
      REQUIRE(brute_tall.size() == fast_tall.size());
      for (std::size_t i = 0; i < brute_tall.size(); ++i)
        CHECK(brute_tall[i].assignment == fast_tall[i].assignment);
    }
}

TEST_CASE("factorization is strictly unique on trees with at most 5 edges") {
  auto trees = enumerate_trees(5);
  oracle::FactorizationOracle o;
  long maps = 0;
  for (const Tree& s : trees)
    for (const Tree& t : trees)
      for (const TreeMap& m : maps_between(s, t)) {
        ++maps;
        Factorization f = factorize(m);
        TreeMap back = compose(f.po, compose(f.pi, compose(f.pd, f.iso)));
        CHECK(back.assignment == m.assignment);
        auto res = o.check(m, f);
        CHECK(res.chains == 1);
        CHECK(res.matches);
      }
  CHECK(maps > 0);
}

TEST_CASE("factor classes and characterizations") {
  auto trees = enumerate_trees(5);
  for (const Tree& s : trees)
    for (const Tree& t : trees)
      for (const TreeMap& m : maps_between(s, t)) {
        Factorization f = factorize(m);
        MapClass c = classify_map(m);
        CHECK(classify_map(f.iso).iso);
        MapClass pd = classify_map(f.pd);
        CHECK((pd.degeneracy && pd.planar));
        MapClass pi = classify_map(f.pi);
        CHECK((pi.inner_face && pi.planar));
        MapClass po = classify_map(f.po);
        CHECK((po.outer_face && po.planar));
        CHECK(c.tall == is_identity(f.po));
        CHECK(c.face == is_identity(f.pd));
        CHECK(c.convex == is_identity(f.pi));
        CHECK(c.planar == is_identity(f.iso));
        CHECK(c.outer_face == (c.face && is_identity(f.pi)));
        CHECK(c.inner_face == (c.face && is_identity(f.po)));
        CHECK(c.degeneracy ==
              (is_identity(f.pi) && is_identity(f.po)));
      }
}

TEST_CASE("classes closed under composition") {
  auto trees = enumerate_trees(4);
  struct Entry {
    std::size_t s, t;
    std::vector<EdgeId> a;
    FactorBits bits;
  };
  std::vector<Entry> all;
  std::map<std::tuple<std::size_t, std::size_t, std::vector<EdgeId>>,
           FactorBits>
      index;
  for (std::size_t i = 0; i < trees.size(); ++i)
    for (std::size_t j = 0; j < trees.size(); ++j)
      for (const TreeMap& m : maps_between(trees[i], trees[j])) {
        FactorBits b = factor_bits(m);
        all.push_back({i, j, m.assignment, b});
        index[{i, j, m.assignment}] = b;
      }
  std::vector<std::vector<std::size_t>> from(trees.size());
  for (std::size_t k = 0; k < all.size(); ++k) from[all[k].s].push_back(k);
  long pairs = 0;
  for (const Entry& f : all)
    for (std::size_t gk : from[f.t]) {
      const Entry& g = all[gk];
      std::vector<EdgeId> a;
      for (EdgeId e : f.a) a.push_back(g.a[e]);
      FactorBits c = index.at({f.s, g.t, a});
      ++pairs;
      for (unsigned subset = 0; subset < 16; ++subset) {
        auto has = [&](const FactorBits& b) {
          return (!(subset & 1u) || b.iso) && (!(subset & 2u) || b.pd) &&
                 (!(subset & 4u) || b.pi) && (!(subset & 8u) || b.po);
        };
        if (has(f.bits) && has(g.bits)) CHECK(has(c));
      }
    }
  CHECK(pairs > 0);
}

TEST_CASE("tall maps compose to tall maps on trees with at most 5 edges") {
  auto trees = enumerate_trees(5);
  std::vector<std::vector<std::vector<TreeMap>>> tall(trees.size());
  for (std::size_t i = 0; i < trees.size(); ++i)
    for (std::size_t j = 0; j < trees.size(); ++j)
      tall[i].push_back(tall_maps(trees[i], trees[j]));
  long pairs = 0;
  for (std::size_t i = 0; i < trees.size(); ++i)
    for (std::size_t j = 0; j < trees.size(); ++j)
      for (std::size_t k = 0; k < trees.size(); ++k)
        for (const TreeMap& f : tall[i][j])
          for (const TreeMap& g : tall[j][k]) {
            ++pairs;
            TreeMap h = compose(g, f);
            CHECK(is_valid_assignment(h.source, h.target, h.assignment));
            CHECK(is_tall(h));
          }
  CHECK(pairs > 0);
}

TEST_CASE("random degeneracies compose to degeneracies") {
  std::mt19937 rng(11);
  auto trees = enumerate_trees(6);
  int done = 0;
  while (done < 50) {
    const Tree& t = trees[rng() % trees.size()];
    // build s by inserting unary vertices above random edges of t
    auto insert_unary = [&](const Tree& base, const std::string& tag) {
      auto recs = records(base);
      EdgeId e = static_cast<EdgeId>(rng() % base.edge_count());
      std::string lower = base.name(e) + tag;
      std::string root = base.name(base.root());
      // the new edge sits below e
      for (auto& r : recs)
        for (auto& in : r.inputs)
          if (in == base.name(e)) in = lower;
      recs.push_back(VertexRecord{lower, {base.name(e)}});
      if (e == base.root()) root = lower;
      Tree s = Tree::from_records(root, recs);
      std::vector<EdgeId> a;
      for (const auto& n : s.names())
        a.push_back(base.id(n == lower ? base.name(e) : n));
      return TreeMap{s, base, a};
    };
    TreeMap g = insert_unary(t, "'");
    TreeMap f = insert_unary(g.source, "\"");
    TreeMap h = compose(g, f);
    CHECK(is_valid_assignment(h.source, h.target, h.assignment));
    CHECK(is_degeneracy(h));
    CHECK(classify_map(g).degeneracy);
    ++done;
  }
}

TEST_CASE("composition plumbing") {
  Tree t = sample_tree();
  TreeMap f = by_names("r(a,b,d)", T);
  CHECK(compose(identity_map(t), f) == f);
  CHECK(compose(f, identity_map(f.source)) == f);
  CHECK_THROWS_AS(compose(f, f), TreeError);
  CHECK(map_from_json(map_to_json(f)) == f);
}

TEST_CASE("leaf-root") {
  TreeMap lr = leaf_root(sample_tree());
  CHECK(print_tree(lr.source) == "r(a,b,d)");
  CHECK(classify_map(lr).inner_face);
  CHECK(classify_map(lr).planar);
  Tree c = parse_tree("r(a,b,c)");
  CHECK(is_identity(leaf_root(c)));
  Tree x = parse_tree("x");
  CHECK(is_identity(leaf_root(x)));
  CHECK(print_tree(leaf_root(parse_tree("r(a(),b)")).source) == "r(b)");
}

TEST_CASE("tall maps counted vertex by vertex") {
  auto trees = enumerate_trees(5);
  for (const Tree& s : trees)
    for (const Tree& t : trees)
      CHECK(static_cast<long>(tall_maps(s, t).size()) ==
            oracle::tall_count_by_vertices(s, t));
}
