#include "dendron/w_construction.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>
#include <typeinfo>
#include <unordered_map>

#include "dendron/faces.hpp"

namespace dendron {

namespace {

TreeMap retarget(const TreeMap& m, const Tree& target) {
  std::vector<EdgeId> a(m.assignment.size());
  for (std::size_t e = 0; e < a.size(); ++e)
    a[e] = target.id(m.target.name(m.assignment[e]));
  return TreeMap{m.source, target, std::move(a)};
}

std::vector<EdgeId> reindex(const Tree& from, const Tree& to,
                            const std::vector<EdgeId>& ids) {
  std::vector<EdgeId> out;
  out.reserve(ids.size());
  for (EdgeId e : ids) out.push_back(to.id(from.name(e)));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<EdgeId> apply_sorted(const TreeMap& m, const std::vector<EdgeId>& ids) {
  std::vector<EdgeId> out;
  out.reserve(ids.size());
  for (EdgeId e : ids) out.push_back(m(e));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<EdgeId> mask_edges(const InnerFaceLattice& lat, std::size_t mask) {
  std::vector<EdgeId> out;
  for (std::size_t i = 0; i < lat.inner_edges().size(); ++i)
    if (mask >> i & 1u) out.push_back(lat.inner_edges()[i]);
  return out;
}

struct Replan {
  Tree tree;
  TreeMap iso;
};

// Every planar structure on t, renamed to depth-first names, with the
// isomorphism from t.
const std::vector<Replan>& replans(const Tree& t) {
  static std::mutex mutex;
  static std::map<std::string, std::vector<Replan>> cache;
  std::string key;
  for (const auto& n : t.names()) key += n + ",";
  key += print_tree(t);
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<Replan> out;
  for (const Tree& p : replanarizations(t)) {
    CanonicalTree cf = canonical_form(p);
    std::vector<EdgeId> a(t.edge_count());
    for (EdgeId e = 0; e < static_cast<EdgeId>(a.size()); ++e)
      a[e] = cf.tree.id(cf.renaming[p.id(t.name(e))]);
    out.push_back(Replan{cf.tree, TreeMap{t, cf.tree, std::move(a)}});
  }
  return cache.emplace(key, std::move(out)).first->second;
}

TreeMap inverse_iso(const TreeMap& iso) {
  std::vector<EdgeId> b(iso.assignment.size());
  for (std::size_t e = 0; e < b.size(); ++e)
    b[iso.assignment[e]] = static_cast<EdgeId>(e);
  return TreeMap{iso.target, iso.source, std::move(b)};
}

std::vector<Dendrex> family_colors(const Necklace& n, const DendroidalSet& x,
                                   const BeadFamily& f) {
  const Tree& t = n.carrier();
  std::vector<Dendrex> out(t.edge_count());
  for (std::size_t b = 0; b < n.pieces().size(); ++b) {
    const Tree& p = n.pieces()[b];
    for (EdgeId e = 0; e < static_cast<EdgeId>(p.edge_count()); ++e)
      out[t.id(p.name(e))] = x.color(f[b], p, e);
  }
  return out;
}

std::size_t resolve_bound(const DendroidalSet& x, std::size_t bound) {
  if (bound) return bound;
  if (dynamic_cast<const Representable*>(&x)) return x.max_nondegenerate_edges();
  return default_max_edges();
}

// Chains from `low` to `high` of the given length, weak or strict.
void lattice_chains(std::size_t low, std::size_t high, std::size_t length,
                    bool strict, std::vector<std::size_t>& cur,
                    std::vector<std::vector<std::size_t>>& out) {
  if (cur.empty()) cur.push_back(low);
  if (cur.size() == length) {
    if (cur.back() == high) out.push_back(cur);
    return;
  }
  std::size_t last = cur.back();
  std::size_t free = high & ~last;
  for (std::size_t add = free;; add = (add - 1) & free) {
    if (!(strict && add == 0)) {
      cur.push_back(last | add);
      lattice_chains(low, high, length, strict, cur, out);
      cur.pop_back();
    }
    if (add == 0) break;
  }
}

std::vector<std::vector<std::size_t>> chains_between(std::size_t low,
                                                     std::size_t high,
                                                     std::size_t length,
                                                     bool strict) {
  std::vector<std::vector<std::size_t>> out;
  if ((low & ~high) != 0 || length == 0) return out;
  std::vector<std::size_t> cur;
  lattice_chains(low, high, length, strict, cur, out);
  return out;
}

// t' with a unary vertex inserted on edge e: the new vertex has out-edge
// named as e and input `fresh`. Returns the collapse t' -> t.
TreeMap insert_unary_vertex(const Tree& t, EdgeId e, const std::string& fresh) {
  auto recs = records(t);
  for (auto& r : recs)
    if (r.out == t.name(e)) r.out = fresh;
  recs.push_back({t.name(e), {fresh}});
  Tree bigger = Tree::from_records(t.name(t.root()), recs);
  std::vector<EdgeId> a;
  for (const auto& n : bigger.names()) a.push_back(t.id(n == fresh ? t.name(e) : n));
  return TreeMap{bigger, t, std::move(a)};
}

std::string fresh_name(const Tree& t) {
  std::string n = "u";
  while (t.find(n)) n += "'";
  return n;
}

}  // namespace

Tree WQuadruple::chain_tree(std::size_t k) const {
  return inner_face(carrier(), chain.at(k));
}

bool WQuadruple::operator==(const WQuadruple& o) const {
  return necklace == o.necklace && phi == o.phi && x == o.x && chain == o.chain;
}

bool WQuadruple::operator<(const WQuadruple& o) const {
  return std::tie(carrier(), necklace.joints(), chain, phi.assignment, x,
                  phi.source) < std::tie(o.carrier(), o.necklace.joints(),
                                         o.chain, o.phi.assignment, o.x,
                                         o.phi.source);
}

std::optional<std::string> check_quadruple(const WQuadruple& q,
                                           const DendroidalSet& x) {
  const Tree& t = q.carrier();
  if (!(q.phi.target == t)) return "phi does not land in the carrier";
  if (!is_valid_assignment(q.phi.source, t, q.phi.assignment))
    return "phi is not a map";
  if (!is_tall(q.phi)) return "phi is not tall";
  for (EdgeId y : q.phi.assignment)
    if (y != t.root() && !t.is_leaf(y) && !q.necklace.is_joint(y))
      return "phi S is not inside J";
  if (q.x.size() != q.necklace.pieces().size() ||
      !is_compatible_family(q.necklace, x, q.x))
    return "x is not a map out of the necklace";
  if (q.chain.empty()) return "empty chain";
  std::vector<EdgeId> inner = t.inner_edges();
  const std::vector<EdgeId>* prev = &q.necklace.joints();
  for (const auto& c : q.chain) {
    if (!std::is_sorted(c.begin(), c.end()) ||
        std::adjacent_find(c.begin(), c.end()) != c.end())
      return "chain entry is not a sorted edge set";
    if (!std::includes(inner.begin(), inner.end(), c.begin(), c.end()))
      return "chain entry is not an inner face";
    if (!std::includes(c.begin(), c.end(), prev->begin(), prev->end()))
      return "chain is not increasing from J";
    prev = &c;
  }
  return std::nullopt;
}

bool is_flanked(const WQuadruple& q) {
  return q.chain.front() == q.necklace.joints() &&
         q.chain.back() == q.carrier().inner_edges();
}

std::vector<EdgeId> push_inner_face(const TreeMap& m,
                                    const std::vector<EdgeId>& inner) {
  Tree j = inner_face(m.source, inner);
  Tree img = image_tree(compose(m, name_map(j, m.source)));
  std::vector<EdgeId> out;
  for (EdgeId e : img.inner_edges()) out.push_back(m.target.id(img.name(e)));
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<std::string> check_move(const WMove& m, const DendroidalSet& x) {
  if (auto e = check_quadruple(m.from, x)) return "source: " + *e;
  if (auto e = check_quadruple(m.to, x)) return "target: " + *e;
  if (!(m.map.source == m.from.necklace) || !(m.map.target == m.to.necklace))
    return "necklace map has the wrong ends";
  const TreeMap& c = m.map.carrier_map;
  if (!(c.source == m.from.carrier()) || !(c.target == m.to.carrier()) ||
      !is_valid_assignment(c.source, c.target, c.assignment))
    return "carrier map is not a map";
  if (!necklace_map_check(m.from.necklace, m.to.necklace, c))
    return "carrier map is not a necklace map";
  if (!(m.to.phi == compose(c, m.from.phi))) return "phi' != map . phi";
  if (!(m.from.x == pull_family(x, m.map, m.to.x))) return "x != x' . map";
  if (m.from.chain.size() != m.to.chain.size()) return "chain lengths differ";
  for (std::size_t k = 0; k < m.from.chain.size(); ++k)
    if (m.to.chain[k] != push_inner_face(c, m.from.chain[k]))
      return "chain is not pushed forward";
  return std::nullopt;
}

WMove flank(const WQuadruple& q, const DendroidalSet& x) {
  const Tree& t = q.carrier();
  Tree jn = q.chain_tree(q.chain.size() - 1);
  TreeMap incl = name_map(jn, t);
  Necklace nf(jn, reindex(t, jn, q.chain.front()));
  NecklaceMap m{nf, q.necklace, incl};
  std::vector<std::vector<EdgeId>> chain;
  for (const auto& c : q.chain) chain.push_back(reindex(t, jn, c));
  WQuadruple from{nf, retarget(q.phi, jn), pull_family(x, m, q.x),
                  std::move(chain)};
  return WMove{std::move(from), q, std::move(m)};
}

WMove reduce(const WQuadruple& q, const DendroidalSet& x) {
  TndFactorization f = tnd_factorize(q.necklace, x, q.x);
  const TreeMap& s = f.degeneracy.carrier_map;
  std::vector<std::vector<EdgeId>> chain;
  for (const auto& c : q.chain) chain.push_back(push_inner_face(s, c));
  WQuadruple to{f.degeneracy.target, compose(s, q.phi), f.family,
                std::move(chain)};
  return WMove{q, std::move(to), f.degeneracy};
}

WMove transport(const WQuadruple& q, const TreeMap& iso, const DendroidalSet& x) {
  Necklace np(iso.target, apply_sorted(iso, q.necklace.joints()));
  NecklaceMap back{np, q.necklace, inverse_iso(iso)};
  std::vector<std::vector<EdgeId>> chain;
  for (const auto& c : q.chain) chain.push_back(apply_sorted(iso, c));
  WQuadruple to{np, compose(iso, q.phi), pull_family(x, back, q.x),
                std::move(chain)};
  return WMove{q, std::move(to), NecklaceMap{q.necklace, np, iso}};
}

WMove canonical_planar(const WQuadruple& q, const DendroidalSet& x) {
  std::optional<WMove> best;
  for (const Replan& r : replans(q.carrier())) {
    WMove m = transport(q, r.iso, x);
    if (!best || m.to < best->to) best = std::move(m);
  }
  return std::move(*best);
}

WQuadruple normalize_quadruple(const WQuadruple& q, const DendroidalSet& x) {
  WQuadruple f = flank(q, x).from;
  WQuadruple r = reduce(f, x).to;
  return canonical_planar(r, x).to;
}

bool is_normal(const WQuadruple& q, const DendroidalSet& x) {
  return normalize_quadruple(q, x) == q;
}

std::optional<std::vector<ZigzagStep>> find_zigzag(const WQuadruple& a,
                                                   const WQuadruple& b,
                                                   const DendroidalSet& x,
                                                   std::size_t max_steps) {
  struct Seen {
    std::optional<ZigzagStep> step;  // how we got here, walking outwards
    std::optional<WQuadruple> parent;
    std::size_t depth = 0;
  };
  // side 0 grows from a, side 1 from b
  std::map<WQuadruple, Seen> seen[2];
  std::deque<WQuadruple> frontier[2];
  seen[0].emplace(a, Seen{});
  seen[1].emplace(b, Seen{});
  frontier[0].push_back(a);
  frontier[1].push_back(b);

  auto neighbours = [&](const WQuadruple& q) {
    std::vector<std::pair<ZigzagStep, WQuadruple>> out;
    WMove f = flank(q, x);
    if (!(f.from == q)) {
      WQuadruple next = f.from;
      out.push_back({ZigzagStep{std::move(f), false}, std::move(next)});
    }
    WMove r = reduce(q, x);
    if (!(r.to == q)) {
      WQuadruple next = r.to;
      out.push_back({ZigzagStep{std::move(r), true}, std::move(next)});
    }
    for (const Replan& p : replans(q.carrier())) {
      WMove m = transport(q, p.iso, x);
      if (m.to == q) continue;
      WQuadruple next = m.to;
      out.push_back({ZigzagStep{std::move(m), true}, std::move(next)});
    }
    return out;
  };
  auto path_to = [&](int side, WQuadruple q) {
    std::vector<ZigzagStep> steps;
    while (true) {
      const Seen& s = seen[side].at(q);
      if (!s.parent) break;
      steps.push_back(*s.step);
      q = *s.parent;
    }
    std::reverse(steps.begin(), steps.end());
    return steps;
  };

  if (a == b) return std::vector<ZigzagStep>{};
  std::size_t depth[2] = {0, 0};
  while ((!frontier[0].empty() || !frontier[1].empty()) &&
         depth[0] + depth[1] < max_steps) {
    int side = (frontier[0].size() <= frontier[1].size() && !frontier[0].empty()) ||
                       frontier[1].empty()
                   ? 0
                   : 1;
    std::deque<WQuadruple> next_frontier;
    for (const WQuadruple& q : frontier[side]) {
      for (auto& [step, next] : neighbours(q)) {
        if (seen[side].count(next)) continue;
        seen[side].emplace(next, Seen{step, q, depth[side] + 1});
        if (seen[1 - side].count(next)) {
          std::vector<ZigzagStep> left = path_to(0, next);
          std::vector<ZigzagStep> right = path_to(1, next);
          std::reverse(right.begin(), right.end());
          for (auto& s : right) s.forward = !s.forward;
          left.insert(left.end(), right.begin(), right.end());
          return left;
        }
        next_frontier.push_back(next);
      }
    }
    frontier[side] = std::move(next_frontier);
    ++depth[side];
  }
  return std::nullopt;
}

std::vector<WQuadruple> wx_simplices(const DendroidalSet& x, const Tree& s,
                                     const std::vector<Dendrex>& coloring,
                                     int n, std::size_t bound) {
  if (n < 0) throw std::invalid_argument("negative simplicial level");
  if (coloring.size() != s.edge_count())
    throw std::invalid_argument("coloring does not match the source");
  bound = resolve_bound(x, bound);
  std::size_t leaves = s.leaves().size();
  std::set<WQuadruple> out;
  for (const Tree& t : enumerate_trees(bound)) {
    if (t.leaves().size() != leaves) continue;
    InnerFaceLattice lat(t);
    std::size_t top = lat.size() - 1;
    for (std::size_t m0 = 0; m0 <= top; ++m0) {
      auto chains = chains_between(m0, top, static_cast<std::size_t>(n) + 1, false);
      if (chains.empty()) continue;
      const Tree& j0 = lat.face(m0);
      std::vector<TreeMap> phis;
      for (const TreeMap& h : tall_maps(s, j0)) phis.push_back(retarget(h, t));
      if (phis.empty()) continue;
      Necklace nk(t, mask_edges(lat, m0));
      for (const BeadFamily& f : necklace_dendrices(nk, x)) {
        if (!is_totally_nondegenerate(nk, x, f)) continue;
        std::vector<Dendrex> colors = family_colors(nk, x, f);
        for (const TreeMap& phi : phis) {
          bool match = true;
          for (EdgeId e = 0; e < static_cast<EdgeId>(s.edge_count()) && match; ++e)
            match = colors[phi(e)] == coloring[e];
          if (!match) continue;
          for (const auto& c : chains) {
            std::vector<std::vector<EdgeId>> chain;
            for (std::size_t m : c) chain.push_back(mask_edges(lat, m));
            WQuadruple q{nk, phi, f, std::move(chain)};
            out.insert(canonical_planar(q, x).to);
          }
        }
      }
    }
  }
  return {out.begin(), out.end()};
}

WQuadruple string_quadruple(const NWString& s) {
  const Tree& u = s.target;
  const Tree& jn = s.chain.back();
  std::vector<EdgeId> joints;
  for (EdgeId e : s.chain.front().inner_edges())
    joints.push_back(jn.id(s.chain.front().name(e)));
  std::sort(joints.begin(), joints.end());
  Necklace nk(jn, joints);
  BeadFamily x;
  for (std::size_t b = 0; b < nk.pieces().size(); ++b)
    x.push_back(name_map(nk.pieces()[b], u).assignment);
  std::vector<std::vector<EdgeId>> chain;
  for (const Tree& j : s.chain) {
    std::vector<EdgeId> c;
    for (EdgeId e : j.inner_edges()) c.push_back(jn.id(j.name(e)));
    std::sort(c.begin(), c.end());
    chain.push_back(std::move(c));
  }
  TreeMap phi = retarget(s.head, jn);
  return WQuadruple{std::move(nk), std::move(phi), std::move(x), std::move(chain)};
}

Tree corolla(std::size_t n) {
  VertexRecord r{"0", {}};
  for (std::size_t i = 1; i <= n; ++i) r.inputs.push_back(std::to_string(i));
  return Tree::from_records("0", {r});
}

Signature parse_signature(const std::string& text, const Tree& u) {
  auto semi = text.find(';');
  if (semi == std::string::npos || text.find(';', semi + 1) != std::string::npos)
    throw std::invalid_argument("signature must look like \"a,b;r\"");
  auto trim = [](std::string s) {
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  auto color = [&](const std::string& name) {
    auto id = u.find(name);
    if (!id) throw std::invalid_argument("unknown color: " + name);
    return Dendrex{*id};
  };
  Signature sig;
  std::string leaves = trim(text.substr(0, semi));
  if (!leaves.empty()) {
    std::stringstream ss(leaves);
    std::string item;
    while (std::getline(ss, item, ',')) sig.leaves.push_back(color(trim(item)));
  }
  sig.root = color(trim(text.substr(semi + 1)));
  return sig;
}

namespace {

using CellSets = std::vector<std::set<WQuadruple>>;

// Normal forms over corollas with n leaves, grouped by coloring {root,
// leaves...}; only `only` when given.
std::map<std::vector<Dendrex>, CellSets> collect_cells(
    const DendroidalSet& x, std::size_t n, const std::vector<Dendrex>* only,
    std::size_t bound) {
  Tree s = corolla(n);
  std::map<std::vector<Dendrex>, CellSets> found;
  for (const Tree& t : enumerate_trees(bound)) {
    if (t.leaves().size() != n) continue;
    std::vector<TreeMap> phis = tall_maps(s, t);
    if (phis.empty()) continue;
    InnerFaceLattice lat(t);
    std::size_t top = lat.size() - 1;
    std::size_t inner = lat.inner_edges().size();
    for (std::size_t m0 = 0; m0 <= top; ++m0) {
      Necklace nk(t, mask_edges(lat, m0));
      for (const BeadFamily& f : necklace_dendrices(nk, x)) {
        std::vector<Dendrex> colors = family_colors(nk, x, f);
        if (only && colors[t.root()] != (*only)[0]) continue;
        bool tnd_known = false, tnd = false;
        for (const TreeMap& phi : phis) {
          std::vector<Dendrex> key;
          for (EdgeId e = 0; e < static_cast<EdgeId>(s.edge_count()); ++e)
            key.push_back(colors[phi(e)]);
          if (only && key != *only) continue;
          if (!tnd_known) {
            tnd = is_totally_nondegenerate(nk, x, f);
            tnd_known = true;
          }
          if (!tnd) break;
          CellSets& cells = found[key];
          for (std::size_t len = 1; len <= inner + 1; ++len)
            for (const auto& c : chains_between(m0, top, len, true)) {
              std::vector<std::vector<EdgeId>> chain;
              for (std::size_t m : c) chain.push_back(mask_edges(lat, m));
              WQuadruple q{nk, phi, f, std::move(chain)};
              if (cells.size() < len) cells.resize(len);
              cells[len - 1].insert(canonical_planar(q, x).to);
            }
        }
      }
    }
  }
  return found;
}

MappingSpace assemble(const CellSets& found, const DendroidalSet& x) {
  MappingSpace out;
  std::vector<std::map<WQuadruple, int>> index(found.size());
  for (std::size_t d = 0; d < found.size(); ++d) {
    out.cells.emplace_back(found[d].begin(), found[d].end());
    for (std::size_t i = 0; i < out.cells[d].size(); ++i)
      index[d].emplace(out.cells[d][i], static_cast<int>(i));
  }
  for (std::size_t d = 0; d < out.cells.size(); ++d)
    for (const WQuadruple& q : out.cells[d]) {
      std::vector<Simplex> faces;
      for (std::size_t i = 0; d > 0 && i <= d; ++i) {
        WQuadruple qi = q;
        qi.chain.erase(qi.chain.begin() + static_cast<long>(i));
        WQuadruple r = normalize_quadruple(qi, x);
        std::vector<int> sigma;
        std::vector<std::vector<EdgeId>> strict;
        for (const auto& c : r.chain) {
          if (strict.empty() || strict.back() != c) strict.push_back(c);
          sigma.push_back(static_cast<int>(strict.size()) - 1);
        }
        r.chain = std::move(strict);
        int m = r.level();
        auto it = index[m].find(r);
        if (it == index[m].end())
          throw std::logic_error("face of a normal form is not a cell");
        faces.push_back(Simplex{std::move(sigma), m, it->second});
      }
      std::string label = print_tree(q.carrier());
      for (const auto& c : q.chain) {
        label += " {";
        for (std::size_t k = 0; k < c.size(); ++k)
          label += (k ? "," : "") + q.carrier().name(c[k]);
        label += "}";
      }
      out.space.add_cell(static_cast<int>(d), std::move(faces), label);
    }
  return out;
}

}  // namespace

MappingSpace mapping_space(const DendroidalSet& x, const Signature& sig,
                           std::size_t bound) {
  std::vector<Dendrex> known = x.colors();
  auto check_color = [&](const Dendrex& c) {
    if (!std::binary_search(known.begin(), known.end(), c))
      throw std::invalid_argument("unknown color");
  };
  for (const Dendrex& c : sig.leaves) check_color(c);
  check_color(sig.root);
  std::vector<Dendrex> coloring{sig.root};
  coloring.insert(coloring.end(), sig.leaves.begin(), sig.leaves.end());
  auto found = collect_cells(x, sig.leaves.size(), &coloring, resolve_bound(x, bound));
  auto it = found.find(coloring);
  return assemble(it == found.end() ? CellSets{} : it->second, x);
}

std::map<std::vector<Dendrex>, MappingSpace> mapping_spaces(const DendroidalSet& x,
                                                            std::size_t leaves,
                                                            std::size_t bound) {
  std::map<std::vector<Dendrex>, MappingSpace> out;
  for (const auto& [key, cells] : collect_cells(x, leaves, nullptr, resolve_bound(x, bound)))
    out.emplace(key, assemble(cells, x));
  return out;
}

ClosedKind parse_closed_kind(const std::string& s) {
  if (s == "representable") return ClosedKind::representable;
  if (s == "boundary") return ClosedKind::boundary;
  if (s == "horn") return ClosedKind::horn;
  throw std::invalid_argument("unknown closed form kind: " + s);
}

SimplicialSet closed_form_mapping_space(ClosedKind kind, const Tree& u,
                                        const std::vector<EdgeId>& e,
                                        const std::vector<EdgeId>& leaves,
                                        EdgeId root) {
  std::vector<EdgeId> inner = u.inner_edges();
  if (kind == ClosedKind::horn) {
    std::set<EdgeId> es(e.begin(), e.end());
    if (es.empty() || es.size() != e.size() ||
        !std::includes(inner.begin(), inner.end(), es.begin(), es.end()))
      throw std::invalid_argument("horn edges must be a non-empty set of inner edges");
  }
  Tree c = corolla(leaves.size());
  std::vector<EdgeId> a{root};
  a.insert(a.end(), leaves.begin(), leaves.end());
  if (!is_valid_assignment(c, u, a)) return SimplicialSet{};
  Tree closure = image_closure(TreeMap{c, u, a});
  std::size_t k = closure.inner_edges().size();
  bool leaf_root = closure == u;
  if (!leaf_root || kind == ClosedKind::representable) return cube(k);
  if (kind == ClosedKind::boundary) return pushout_product_domain(k, 0);
  return pushout_product_domain(k - e.size(), e.size());
}

bool TauTriple::operator<(const TauTriple& o) const {
  return std::tie(necklace.carrier(), necklace.joints(), t.assignment, x) <
         std::tie(o.necklace.carrier(), o.necklace.joints(), o.t.assignment, o.x);
}

bool TauTriple::operator==(const TauTriple& o) const {
  return necklace == o.necklace && t == o.t && x == o.x;
}

namespace {

TauTriple canonical_triple(const TauTriple& q, const DendroidalSet& x) {
  std::optional<TauTriple> best;
  for (const Replan& r : replans(q.necklace.carrier())) {
    Necklace np(r.tree, apply_sorted(r.iso, q.necklace.joints()));
    NecklaceMap back{np, q.necklace, inverse_iso(r.iso)};
    TauTriple c{np, compose(r.iso, q.t), pull_family(x, back, q.x)};
    if (!best || c < *best) best = std::move(c);
  }
  return std::move(*best);
}

struct TauPartition {
  std::vector<TauTriple> triples;
  std::vector<std::vector<Dendrex>> signatures;
  std::vector<std::size_t> class_of;
};

std::size_t find_root(std::vector<std::size_t>& p, std::size_t i) {
  while (p[i] != i) i = p[i] = p[p[i]];
  return i;
}

// Triples over corollas with `leaves` leaves; `only` restricts to one
// signature (root color first).
TauPartition tau_partition(const DendroidalSet& x, std::size_t leaves,
                           const std::vector<Dendrex>* only, std::size_t bound) {
  Tree c = corolla(leaves);
  std::map<TauTriple, std::size_t> index;
  TauPartition out;
  for (const Tree& t : enumerate_trees(bound)) {
    if (t.leaves().size() != leaves) continue;
    std::vector<TreeMap> talls = tall_maps(c, t);
    for (const Necklace& nk : necklaces_on(t))
      for (const BeadFamily& f : necklace_dendrices(nk, x)) {
        std::vector<Dendrex> colors = family_colors(nk, x, f);
        for (const TreeMap& tm : talls) {
          std::vector<Dendrex> sig;
          for (EdgeId e : tm.assignment) sig.push_back(colors[e]);
          if (only && sig != *only) continue;
          TauTriple q = canonical_triple(TauTriple{nk, tm, f}, x);
          if (index.emplace(q, out.triples.size()).second) {
            out.triples.push_back(std::move(q));
            out.signatures.push_back(std::move(sig));
          }
        }
      }
  }
  std::vector<std::size_t> parent(out.triples.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto join = [&](const TauTriple& src, std::size_t j) {
    auto it = index.find(canonical_triple(src, x));
    if (it == index.end()) throw std::logic_error("tau move leaves the enumeration");
    parent[find_root(parent, it->second)] = find_root(parent, j);
  };
  for (std::size_t j = 0; j < out.triples.size(); ++j) {
    const TauTriple target = out.triples[j];
    const Tree& tt = target.necklace.carrier();
    TreeMap id = name_map(tt, tt);
    for (EdgeId e : tt.inner_edges()) {
      const auto& js = target.necklace.joints();
      if (std::binary_search(js.begin(), js.end(), e)) continue;
      std::vector<EdgeId> finer = js;
      finer.insert(std::upper_bound(finer.begin(), finer.end(), e), e);
      Necklace nk(tt, finer);
      join(TauTriple{nk, target.t,
                     pull_family(x, NecklaceMap{nk, target.necklace, id}, target.x)},
           j);
    }
    for (EdgeId e : tt.inner_edges()) {
      Tree u = contract(tt, {e});
      TreeMap psi = name_map(u, tt);
      TreeMap t = retarget(target.t, u);
      for (const Necklace& nk : necklaces_on(u))
        if (necklace_map_check(nk, target.necklace, psi))
          join(TauTriple{nk, t, pull_family(x, NecklaceMap{nk, target.necklace, psi},
                                            target.x)},
               j);
    }
    if (tt.edge_count() >= bound) continue;
    std::string fresh = fresh_name(tt);
    for (EdgeId f = 0; f < static_cast<EdgeId>(tt.edge_count()); ++f) {
      TreeMap sigma = insert_unary_vertex(tt, f, fresh);
      const Tree& big = sigma.source;
      std::vector<EdgeId> a;
      for (std::size_t k = 0; k < target.t.assignment.size(); ++k) {
        EdgeId y = target.t.assignment[k];
        bool lift = k > 0 && y == f && tt.is_leaf(f);
        a.push_back(big.id(lift ? fresh : tt.name(y)));
      }
      TreeMap t{c, big, std::move(a)};
      if (!is_valid_assignment(c, big, t.assignment) || !is_tall(t) ||
          !(compose(sigma, t) == target.t))
        throw std::logic_error("no tall lift through a unary insertion");
      for (const Necklace& nk : necklaces_on(big))
        if (necklace_map_check(nk, target.necklace, sigma))
          join(TauTriple{nk, t, pull_family(x, NecklaceMap{nk, target.necklace, sigma},
                                            target.x)},
               j);
    }
  }
  out.class_of.resize(out.triples.size());
  std::map<std::size_t, std::size_t> dense;
  for (std::size_t j = 0; j < out.triples.size(); ++j) {
    std::size_t r = find_root(parent, j);
    out.class_of[j] = dense.emplace(r, dense.size()).first->second;
  }
  return out;
}

// ---- compact engine for subpresheaves of representables ----
//
// A family on a necklace into X inside Omega[U] is its edge coloring g of
// the carrier. A triple is (shape, joints, tall map, g) over a planar shape
// named by depth-first index; its isomorphism class is keyed by an encoding
// of the decorated tree with children in sorted order.

struct ShapeInfo {
  std::vector<std::vector<EdgeId>> children;
  std::vector<char> leaf;
};

struct ShapeBook {
  std::mutex mutex;
  std::map<std::vector<int>, int> ids;
  std::deque<Tree> trees;
  std::deque<ShapeInfo> info;
};

ShapeBook& shape_book() {
  static ShapeBook b;
  return b;
}

std::vector<int> arities(const Tree& t) {
  std::vector<int> a;
  for (EdgeId e = 0; e < static_cast<EdgeId>(t.edge_count()); ++e) {
    int v = t.vertex_above(e);
    a.push_back(v < 0 ? -1 : static_cast<int>(t.vertex(v).inputs.size()));
  }
  return a;
}

// Planar shape id; edge ids of t and of the stored tree agree.
int shape_id(const Tree& t) {
  ShapeBook& b = shape_book();
  std::vector<int> a = arities(t);
  std::lock_guard<std::mutex> lock(b.mutex);
  auto it = b.ids.find(a);
  if (it != b.ids.end()) return it->second;
  int id = static_cast<int>(b.trees.size());
  b.ids.emplace(std::move(a), id);
  b.trees.push_back(t);
  ShapeInfo info{std::vector<std::vector<EdgeId>>(t.edge_count()),
                 std::vector<char>(t.edge_count(), 1)};
  for (EdgeId e = 0; e < static_cast<EdgeId>(t.edge_count()); ++e)
    if (int v = t.vertex_above(e); v >= 0) {
      info.children[e] = t.vertex(v).inputs;
      info.leaf[e] = 0;
    }
  b.info.push_back(std::move(info));
  return id;
}

const ShapeInfo& shape_info(int id) {
  ShapeBook& b = shape_book();
  std::lock_guard<std::mutex> lock(b.mutex);
  return b.info.at(static_cast<std::size_t>(id));
}

const Tree& shape_tree(int id) {
  ShapeBook& b = shape_book();
  std::lock_guard<std::mutex> lock(b.mutex);
  return b.trees.at(static_cast<std::size_t>(id));
}

using Mask = std::uint32_t;

std::vector<EdgeId> mask_ids(Mask m) {
  std::vector<EdgeId> out;
  for (EdgeId e = 0; m; ++e, m >>= 1)
    if (m & 1u) out.push_back(e);
  return out;
}

// A move into a triple on shape `from`: the source shape, its edges mapped
// to edges of `from`, where the tall map's edges go, and the least joint
// sets on the source admitting a necklace map.
struct CompactMove {
  int shape;
  std::vector<EdgeId> down;  // source edge -> edge of `from`
  std::vector<EdgeId> up;    // edge of `from` -> source edge, for the tall map
  EdgeId lifted = -1;        // leaf of `from` whose tall preimage moves up
  EdgeId lift_to = -1;
  std::vector<Mask> joints;
};

std::vector<Mask> least_joints(const Tree& src, const Necklace& target,
                               const TreeMap& m) {
  std::vector<EdgeId> inner = src.inner_edges();
  std::vector<Mask> ok;
  for (Mask a = 0; a < (Mask{1} << inner.size()); ++a) {
    Mask d = 0;
    for (std::size_t i = 0; i < inner.size(); ++i)
      if (a >> i & 1u) d |= Mask{1} << inner[i];
    if (necklace_map_check(Necklace(src, mask_ids(d)), target, m)) ok.push_back(d);
  }
  std::vector<Mask> least;
  for (Mask d : ok) {
    bool minimal = true;
    for (Mask e : ok)
      if (e != d && (e & d) == e) minimal = false;
    if (minimal) least.push_back(d);
  }
  return least;
}

struct MoveBook {
  std::mutex mutex;
  // (shape, joints, edge, kind) -> move; kind 0 contracts, 1 inserts
  std::map<std::tuple<int, Mask, EdgeId, int>, std::optional<CompactMove>> moves;
};

MoveBook& move_book() {
  static MoveBook b;
  return b;
}

const std::optional<CompactMove>& compact_move(int sid, Mask d, EdgeId e, int kind) {
  MoveBook& b = move_book();
  auto key = std::make_tuple(sid, d, e, kind);
  {
    std::lock_guard<std::mutex> lock(b.mutex);
    auto it = b.moves.find(key);
    if (it != b.moves.end()) return it->second;
  }
  const Tree t = shape_tree(sid);
  Necklace target(t, mask_ids(d));
  std::optional<CompactMove> mv;
  if (kind == 0) {
    Tree u = contract(t, {e});
    TreeMap psi = name_map(u, t);
    CompactMove c{shape_id(u), psi.assignment, {}, -1, -1, least_joints(u, target, psi)};
    c.up.assign(t.edge_count(), -1);
    for (EdgeId y = 0; y < static_cast<EdgeId>(u.edge_count()); ++y) c.up[psi(y)] = y;
    mv = std::move(c);
  } else {
    std::string fresh = fresh_name(t);
    TreeMap sigma = insert_unary_vertex(t, e, fresh);
    const Tree& big = sigma.source;
    CompactMove c{shape_id(big), sigma.assignment, {}, -1, -1,
                  least_joints(big, target, sigma)};
    for (EdgeId y = 0; y < static_cast<EdgeId>(t.edge_count()); ++y)
      c.up.push_back(big.id(t.name(y)));
    if (t.is_leaf(e)) {
      c.lifted = e;
      c.lift_to = big.id(fresh);
    }
    mv = std::move(c);
  }
  std::lock_guard<std::mutex> lock(b.mutex);
  return b.moves.emplace(key, std::move(mv)).first->second;
}

struct Compact {
  int shape;
  Mask joints;
  std::vector<EdgeId> t;  // corolla edge -> carrier edge
  std::vector<int> g;     // carrier edge -> base edge
};

struct VecHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::size_t h = v.size();
    for (int x : v) h = h * 1000003u ^ static_cast<std::size_t>(x + 7);
    return h;
  }
};

// Isomorphism classes of decorated subtrees get consecutive ids; a triple's
// key is the id of its root.
class CompactKeys {
 public:
  int key(const Compact& q) {
    const ShapeInfo& info = shape_info(q.shape);
    const auto& kids = info.children;
    std::size_t n = kids.size();
    std::array<int, 32> label{}, id{};
    for (std::size_t k = 1; k < q.t.size(); ++k) label[q.t[k]] = static_cast<int>(k);
    for (std::size_t e = n; e-- > 0;) {
      Node k;
      k.fill(-9);
      k[0] = q.g[e];
      k[1] = static_cast<int>(q.joints >> e & 1u);
      k[2] = label[e];
      k[3] = info.leaf[e] ? -1 : 0;
      std::size_t m = 4;
      for (EdgeId i : kids[e]) k[m++] = id[i];
      std::sort(k.begin() + 4, k.begin() + static_cast<std::ptrdiff_t>(m));
      id[e] = ids_.emplace(k, static_cast<int>(ids_.size())).first->second;
    }
    return id[0];
  }

 private:
  using Node = std::array<int, 16>;
  struct NodeHash {
    std::size_t operator()(const Node& v) const {
      std::size_t h = 0;
      for (int x : v) h = h * 1000003u ^ static_cast<std::size_t>(x + 11);
      return h;
    }
  };

  std::unordered_map<Node, int, NodeHash> ids_;
};

TauTriple materialize(const Compact& q, const Tree& c) {
  const Tree& t = shape_tree(q.shape);
  Necklace nk(t, mask_ids(q.joints));
  BeadFamily f;
  for (const Tree& p : nk.pieces()) {
    Dendrex d;
    for (EdgeId e = 0; e < static_cast<EdgeId>(p.edge_count()); ++e)
      d.push_back(q.g[t.id(p.name(e))]);
    f.push_back(std::move(d));
  }
  return TauTriple{std::move(nk), TreeMap{c, t, q.t}, std::move(f)};
}

struct CarrierNecklace {
  int shape;
  Mask joints;
  Necklace necklace;
  std::vector<std::vector<EdgeId>> pieces;  // carrier ids of each bead's edges
  std::vector<Tree> piece_trees;
  std::vector<std::vector<int>> piece_shapes;
  std::vector<std::vector<EdgeId>> talls;
};

// Necklaces on carriers with the given leaf count, up to `bound` edges.
const std::vector<CarrierNecklace>& carrier_necklaces(std::size_t leaves,
                                                      std::size_t bound) {
  static std::mutex mutex;
  static std::map<std::pair<std::size_t, std::size_t>, std::vector<CarrierNecklace>> book;
  std::lock_guard<std::mutex> lock(mutex);
  auto [it, fresh] = book.try_emplace({leaves, bound});
  if (!fresh) return it->second;
  Tree c = corolla(leaves);
  for (const Tree& tree : enumerate_trees(bound)) {
    if (tree.leaves().size() != leaves) continue;
    std::vector<TreeMap> talls = tall_maps(c, tree);
    if (talls.empty()) continue;
    int sid = shape_id(tree);
    std::vector<std::vector<EdgeId>> ta;
    for (const TreeMap& m : talls) ta.push_back(m.assignment);
    std::vector<EdgeId> inner = tree.inner_edges();
    for (Mask a = 0; a < (Mask{1} << inner.size()); ++a) {
      Mask d = 0;
      for (std::size_t i = 0; i < inner.size(); ++i)
        if (a >> i & 1u) d |= Mask{1} << inner[i];
      Necklace nk(tree, mask_ids(d));
      CarrierNecklace cn{sid, d, nk, {}, {}, {}, ta};
      for (const Tree& p : nk.pieces()) {
        std::vector<EdgeId> ids;
        for (const auto& n : p.names()) ids.push_back(tree.id(n));
        cn.pieces.push_back(std::move(ids));
        cn.piece_trees.push_back(p);
        cn.piece_shapes.push_back(arities(p));
      }
      it->second.push_back(std::move(cn));
    }
  }
  return it->second;
}

std::optional<TauPartition> tau_partition_compact(const DendroidalSet& x,
                                                  std::size_t leaves,
                                                  const std::vector<Dendrex>* only,
                                                  std::size_t bound, bool keep) {
  if (!dynamic_cast<const Representable*>(&x) || bound > 12) return std::nullopt;
  Tree c = corolla(leaves);
  CompactKeys keys;
  std::unordered_map<int, std::size_t> index;
  std::vector<Compact> reps;
  std::map<std::vector<int>, std::vector<Dendrex>> beads;
  TauPartition out;
  for (const CarrierNecklace& cn : carrier_necklaces(leaves, bound)) {
    const Tree& t = shape_tree(cn.shape);
    std::vector<const std::vector<Dendrex>*> choices;
    for (std::size_t b = 0; b < cn.pieces.size(); ++b) {
      auto [it, fresh] = beads.try_emplace(cn.piece_shapes[b]);
      if (fresh) it->second = x.dendrices(cn.piece_trees[b]);
      choices.push_back(&it->second);
    }
    std::vector<std::vector<int>> colorings;
    std::vector<int> g(t.edge_count(), -1);
    auto fill = [&](auto&& self, std::size_t b) -> void {
      if (b == cn.pieces.size()) {
        colorings.push_back(g);
        return;
      }
      const std::vector<EdgeId>& ids = cn.pieces[b];
      for (const Dendrex& d : *choices[b]) {
        std::vector<int> saved = g;
        bool ok = true;
        for (std::size_t e = 0; e < ids.size() && ok; ++e) {
          if (g[ids[e]] >= 0 && g[ids[e]] != d[e]) ok = false;
          g[ids[e]] = d[e];
        }
        if (ok) self(self, b + 1);
        g = std::move(saved);
      }
    };
    fill(fill, 0);
    for (const std::vector<int>& g : colorings) {
      for (const std::vector<EdgeId>& tm : cn.talls) {
        std::vector<Dendrex> sig;
        for (EdgeId e : tm) sig.push_back({g[e]});
        if (only && sig != *only) continue;
        Compact q{cn.shape, cn.joints, tm, g};
        if (index.emplace(keys.key(q), reps.size()).second) {
          reps.push_back(std::move(q));
          out.signatures.push_back(std::move(sig));
        }
      }
    }
  }
  std::vector<std::size_t> parent(reps.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto join = [&](const Compact& q, std::size_t j, bool must) {
    auto it = index.find(keys.key(q));
    if (it == index.end()) {
      if (must) throw std::logic_error("tau move leaves the enumeration");
      return;
    }
    parent[find_root(parent, it->second)] = find_root(parent, j);
  };
  for (std::size_t j = 0; j < reps.size(); ++j) {
    const Compact q = reps[j];
    const Tree& t = shape_tree(q.shape);
    // coarser necklaces on the same carrier
    for (EdgeId e : mask_ids(q.joints)) {
      Compact r = q;
      r.joints &= ~(Mask{1} << e);
      join(r, j, false);
    }
    auto apply = [&](const CompactMove& mv) {
      std::vector<int> g;
      for (EdgeId y : mv.down) g.push_back(q.g[y]);
      std::vector<EdgeId> tt;
      for (std::size_t k = 0; k < q.t.size(); ++k)
        tt.push_back(k > 0 && q.t[k] == mv.lifted ? mv.lift_to : mv.up[q.t[k]]);
      for (Mask d : mv.joints) join(Compact{mv.shape, d, tt, g}, j, true);
    };
    for (EdgeId e : t.inner_edges())
      if (const auto& mv = compact_move(q.shape, q.joints, e, 0)) apply(*mv);
    if (t.edge_count() >= bound) continue;
    for (EdgeId e = 0; e < static_cast<EdgeId>(t.edge_count()); ++e)
      if (const auto& mv = compact_move(q.shape, q.joints, e, 1)) apply(*mv);
  }
  out.class_of.resize(reps.size());
  std::map<std::size_t, std::size_t> dense;
  for (std::size_t j = 0; j < reps.size(); ++j)
    out.class_of[j] = dense.emplace(find_root(parent, j), dense.size()).first->second;
  if (keep)
    for (const Compact& q : reps) out.triples.push_back(materialize(q, c));
  return out;
}

}  // namespace

TauReport tau_operations(const DendroidalSet& x, const Signature& sig,
                         std::size_t bound, TauEngine engine) {
  if (bound == 0) throw std::invalid_argument("tau needs a positive bound");
  if (bound > 8) throw std::invalid_argument("tau bound exceeds 8 edges");
  std::vector<Dendrex> only{sig.root};
  only.insert(only.end(), sig.leaves.begin(), sig.leaves.end());
  std::optional<TauPartition> fast;
  if (engine == TauEngine::automatic)
    fast = tau_partition_compact(x, sig.leaves.size(), &only, bound, true);
  TauPartition p = fast ? std::move(*fast) : tau_partition(x, sig.leaves.size(), &only, bound);
  TauReport r;
  r.triples = std::move(p.triples);
  r.class_of = std::move(p.class_of);
  r.classes = std::set<std::size_t>(r.class_of.begin(), r.class_of.end()).size();
  r.bound = bound;
  const auto& id = typeid(x);
  r.exact = id == typeid(Representable) || id == typeid(NecklaceSet) ||
            segal_check(x, std::min<std::size_t>(bound, 4)).pass;
  return r;
}

std::map<std::vector<Dendrex>, std::size_t> tau_class_counts(
    const DendroidalSet& x, std::size_t max_leaves, std::size_t bound, TauEngine engine) {
  if (bound == 0) throw std::invalid_argument("tau needs a positive bound");
  if (bound > 8) throw std::invalid_argument("tau bound exceeds 8 edges");
  std::map<std::vector<Dendrex>, std::size_t> out;
  for (std::size_t n = 0; n <= max_leaves; ++n) {
    std::optional<TauPartition> fast;
    if (engine == TauEngine::automatic) fast = tau_partition_compact(x, n, nullptr, bound, false);
    TauPartition p = fast ? std::move(*fast) : tau_partition(x, n, nullptr, bound);
    std::map<std::vector<Dendrex>, std::set<std::size_t>> classes;
    for (std::size_t j = 0; j < p.signatures.size(); ++j)
      classes[p.signatures[j]].insert(p.class_of[j]);
    for (auto& [sig, cls] : classes) out[sig] = cls.size();
  }
  return out;
}

}  // namespace dendron
