#include <doctest.h>

#include <random>

#include "dendron/sset.hpp"

using namespace dendron;

namespace {

using Counts = std::vector<std::size_t>;

// Strict chains of length m+1 in the Boolean lattice on k elements: each
// element picks the first level it enters, or never.
std::size_t chain_count_oracle(std::size_t k, std::size_t m) {
  std::size_t levels = m + 2;
  std::size_t total = 0;
  std::vector<std::size_t> pick(k, 0);
  while (true) {
    std::vector<char> hit(levels, 0);
    for (auto p : pick) hit[p] = 1;
    bool ok = true;
    for (std::size_t l = 1; l <= m; ++l) ok = ok && hit[l];
    if (ok) ++total;
    std::size_t i = 0;
    for (; i < k; ++i) {
      if (++pick[i] < levels) break;
      pick[i] = 0;
    }
    if (i == k) break;
  }
  return total;
}

// Chains of the cube that move in every axis at every step.
std::size_t interior_chain_oracle(std::size_t k, std::size_t m) {
  std::size_t total = 0;
  std::size_t n = std::size_t{1} << k;
  std::vector<std::size_t> c;
  auto rec = [&](auto&& self) -> void {
    if (c.size() == m + 1) {
      for (std::size_t a = 0; a < k; ++a)
        if ((c.front() >> a & 1u) == (c.back() >> a & 1u)) return;
      ++total;
      return;
    }
    for (std::size_t x = 0; x < n; ++x)
      if (c.empty() || ((c.back() & ~x) == 0 && x != c.back())) {
        c.push_back(x);
        self(self);
        c.pop_back();
      }
  };
  rec(rec);
  return total;
}

SimplicialSet circle() {
  SimplicialSet s;
  s.add_cell(0, {}, "v");
  s.add_cell(1, {Simplex{{0}, 0, 0}, Simplex{{0}, 0, 0}}, "e");
  return s;
}

// A 2-cell whose boundary is e, e and the degenerate edge on v.
SimplicialSet cone_disk() {
  SimplicialSet s = circle();
  Simplex e{{0, 1}, 1, 0};
  Simplex sv{{0, 0}, 0, 0};
  s.add_cell(2, {e, e, sv}, "t");
  return s;
}

IsoWitness compose_witness(const IsoWitness& g, const IsoWitness& f) {
  IsoWitness out = f;
  for (std::size_t d = 0; d < f.map.size(); ++d)
    for (std::size_t c = 0; c < f.map[d].size(); ++c)
      out.map[d][c] = g.map[d][f.map[d][c]];
  return out;
}

bool is_witness(const SimplicialSet& a, const SimplicialSet& b,
                const IsoWitness& w) {
  for (int d = 1; d <= a.dimension(); ++d)
    for (int c = 0; c < static_cast<int>(a.cell_count(d)); ++c) {
      const auto& fa = a.faces(d, c);
      const auto& fb = b.faces(d, w.map[d][c]);
      for (std::size_t i = 0; i < fa.size(); ++i)
        if (!(Simplex{fa[i].sigma, fa[i].dim, w.map[fa[i].dim][fa[i].cell]} ==
              fb[i]))
          return false;
    }
  return true;
}

}  // namespace

TEST_CASE("nerves of small posets") {
  CHECK(nerve_of_poset(chain_poset(1)).cell_vector() == Counts{1});
  CHECK(nerve_of_poset(chain_poset(3)).cell_vector() == Counts{3, 3, 1});
  CHECK(nerve_of_poset(chain_poset(4)).cell_vector() == Counts{4, 6, 4, 1});
  CHECK(nerve_of_poset(boolean_lattice(2)).cell_vector() == Counts{4, 5, 2});
  CHECK(cube(0).cell_vector() == Counts{1});
  CHECK(cube(1).cell_vector() == Counts{2, 1});
  CHECK(cube(2).cell_vector() == Counts{4, 5, 2});
  for (std::size_t k = 0; k <= 4; ++k) {
    SimplicialSet c = cube(k);
    for (int m = 0; m <= c.dimension(); ++m)
      CHECK(c.cell_count(m) == chain_count_oracle(k, m));
    CHECK(c.dimension() == static_cast<int>(k));
    CHECK_FALSE(c.check_identities());
  }
}

TEST_CASE("pushout product domains") {
  CHECK(pushout_product_domain(1, 0).cell_vector() == Counts{2});
  CHECK(pushout_product_domain(2, 0).cell_vector() == Counts{4, 4});
  CHECK(pushout_product_domain(1, 1).cell_vector() == Counts{4, 3});
  CHECK(pushout_product_domain(0, 1).cell_vector() == Counts{1});
  CHECK(pushout_product_domain(0, 0).cell_vector().empty());
  for (std::size_t b = 1; b <= 4; ++b) {
    SimplicialSet full = cube(b);
    SimplicialSet dom = pushout_product_domain(b, 0);
    for (int m = 0; m <= full.dimension(); ++m)
      CHECK(full.cell_count(m) - dom.cell_count(m) ==
            interior_chain_oracle(b, static_cast<std::size_t>(m)));
    CHECK_FALSE(dom.check_identities());
  }
}

TEST_CASE("face and degeneracy algebra") {
  std::mt19937 rng(2);
  std::vector<SimplicialSet> corpus{cube(3), pushout_product_domain(2, 1),
                                    circle(), cone_disk()};
  for (const SimplicialSet& s : corpus) {
    CHECK_FALSE(s.check_identities());
    for (int trial = 0; trial < 200; ++trial) {
      int d = static_cast<int>(rng() % (s.dimension() + 1));
      if (s.cell_count(d) == 0) continue;
      Simplex x = s.cell(d, static_cast<int>(rng() % s.cell_count(d)));
      // a random degenerate simplex over x
      for (int k = static_cast<int>(rng() % 3); k > 0; --k)
        x = s.degeneracy(x, static_cast<int>(rng() % (x.simplex_dim() + 1)));
      int n = x.simplex_dim();
      for (int j = 0; j <= n; ++j) {
        Simplex sx = s.degeneracy(x, j);
        CHECK(s.face(sx, j) == x);
        CHECK(s.face(sx, j + 1) == x);
        for (int i = 0; i < j; ++i)
          CHECK(s.face(sx, i) == s.degeneracy(s.face(x, i), j - 1));
        for (int i = j + 2; i <= n + 1; ++i)
          CHECK(s.face(sx, i) == s.degeneracy(s.face(x, i - 1), j));
      }
      for (int j = 1; j <= n && n >= 2; ++j)
        for (int i = 0; i < j; ++i)
          CHECK(s.face(s.face(x, j), i) == s.face(s.face(x, i), j - 1));
    }
  }
  std::vector<int> sig{0, 0, 1, 2, 2};
  CHECK(degeneracy_word(sig) == std::vector<int>{0, 3});
  CHECK(sigma_from_word(4, {0, 3}) == sig);
}

TEST_CASE("isomorphism search") {
  std::vector<SimplicialSet> corpus{cube(2),
                                    nerve_of_poset(boolean_lattice(2)),
                                    pushout_product_domain(2, 0),
                                    pushout_product_domain(1, 1),
                                    cube(1),
                                    nerve_of_poset(chain_poset(2)),
                                    circle(),
                                    cone_disk(),
                                    cube(3)};
  for (const auto& s : corpus) {
    auto w = iso_check(s, s);
    REQUIRE(w);
    CHECK(is_witness(s, s, *w));
  }
  CHECK(iso_check(cube(1), nerve_of_poset(chain_poset(2))));
  CHECK_FALSE(iso_check(cube(2), pushout_product_domain(2, 0)));
  CHECK_FALSE(iso_check(pushout_product_domain(2, 0), pushout_product_domain(1, 1)));
  CHECK_FALSE(iso_check(circle(), nerve_of_poset(chain_poset(2))));
  // the square with its diagonal reversed is still a square
  Poset p = boolean_lattice(2);
  std::swap(p.labels[1], p.labels[2]);
  CHECK(iso_check(cube(2), nerve_of_poset(p)));
  for (const auto& a : corpus)
    for (const auto& b : corpus) {
      auto ab = iso_check(a, b);
      auto ba = iso_check(b, a);
      CHECK(static_cast<bool>(ab) == static_cast<bool>(ba));
      if (ab) CHECK(is_witness(a, b, *ab));
      for (const auto& c : corpus) {
        auto bc = iso_check(b, c);
        if (ab && bc) {
          IsoWitness ac = compose_witness(*bc, *ab);
          CHECK(is_witness(a, c, ac));
          CHECK(iso_check(a, c));
        }
      }
    }
}

TEST_CASE("serialization") {
  SimplicialSet c = cube(2);
  Json j = sset_to_json(c);
  CHECK(j.dump() == sset_to_json(cube(2)).dump());
  CHECK(j["cells"]["0"].size() == 4);
  CHECK(j["cells"]["1"].size() == 5);
  CHECK(j["cells"]["2"].size() == 2);
  CHECK(j["faces"]["4"].size() == 2);
  std::string dot = sset_to_dot(c);
  std::size_t nodes = 0, arcs = 0;
  for (std::size_t p = dot.find("[label"); p != std::string::npos;
       p = dot.find("[label", p + 1))
    ++nodes;
  for (std::size_t p = dot.find("->"); p != std::string::npos;
       p = dot.find("->", p + 1))
    ++arcs;
  CHECK(nodes == 4);
  CHECK(arcs == 5);
  Json disk = sset_to_json(cone_disk());
  CHECK(disk["faces"]["2"][2]["deg"] == Json::array({0}));
}
