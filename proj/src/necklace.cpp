#include "dendron/necklace.hpp"

#include <algorithm>
#include <map>

#include "dendron/faces.hpp"

namespace dendron {

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

// Assignment of a named piece into the tree carrying its names.
std::vector<EdgeId> by_names(const Tree& piece, const Tree& t) {
  std::vector<EdgeId> a;
  a.reserve(piece.edge_count());
  for (const auto& n : piece.names()) a.push_back(t.id(n));
  return a;
}

// The assignment a: s -> t re-expressed into `piece`, if it lands there.
std::optional<std::vector<EdgeId>> into_piece(const Tree& s, const Tree& t,
                                              const std::vector<EdgeId>& a,
                                              const Tree& piece) {
  std::vector<EdgeId> out;
  out.reserve(a.size());
  for (EdgeId e : a) {
    auto p = piece.find(t.name(e));
    if (!p) return std::nullopt;
    out.push_back(*p);
  }
  if (!is_valid_assignment(s, piece, out)) return std::nullopt;
  return out;
}

std::vector<EdgeId> checked_joints(const Tree& t, std::vector<EdgeId> d) {
  std::sort(d.begin(), d.end());
  d.erase(std::unique(d.begin(), d.end()), d.end());
  for (EdgeId e : d)
    if (e < 0 || e >= static_cast<EdgeId>(t.edge_count()) || !t.is_inner(e))
      throw TreeError("joint is not an inner edge of the carrier");
  return d;
}

}  // namespace

Necklace::Necklace(Tree carrier, std::vector<EdgeId> joints)
    : carrier_(std::move(carrier)),
      joints_(checked_joints(carrier_, std::move(joints))),
      joint_mask_(carrier_.edge_count(), 0),
      joint_tree_(inner_face(carrier_, joints_)) {
  for (EdgeId e : joints_) joint_mask_[e] = 1;
  vertex_bead_.assign(carrier_.vertex_count(), npos);
  for (const auto& v : joint_tree_.vertices()) {
    std::vector<EdgeId> cut;
    for (EdgeId i : v.inputs) cut.push_back(carrier_.id(joint_tree_.name(i)));
    Tree bead = outer_subtree(carrier_, carrier_.id(joint_tree_.name(v.out)), cut);
    for (const auto& w : bead.vertices())
      vertex_bead_[carrier_.vertex_above(carrier_.id(bead.name(w.out)))] =
          beads_.size();
    beads_.push_back(std::move(bead));
  }
  if (beads_.empty()) stick_.push_back(carrier_);
}

bool Necklace::is_joint(EdgeId e) const { return joint_mask_.at(e) != 0; }

std::vector<std::string> Necklace::joint_names() const {
  std::vector<std::string> out;
  for (EdgeId e : joints_) out.push_back(carrier_.name(e));
  return out;
}

TreeMap Necklace::piece_inclusion(std::size_t b) const {
  const Tree& p = pieces().at(b);
  return TreeMap{p, carrier_, by_names(p, carrier_)};
}

TreeMap Necklace::joint_inclusion() const {
  return TreeMap{joint_tree_, carrier_, by_names(joint_tree_, carrier_)};
}

bool Necklace::contains(const Tree& s, const std::vector<EdgeId>& a) const {
  if (joints_.empty()) return true;
  EdgeId root = a[s.root()];
  std::vector<EdgeId> leaves;
  for (EdgeId l : s.leaves()) leaves.push_back(a[l]);
  auto in = closure_mask(carrier_, root, leaves);
  for (EdgeId j : joints_) {
    if (!in[j] || j == root) continue;
    if (std::find(leaves.begin(), leaves.end(), j) == leaves.end()) return false;
  }
  return true;
}

Necklace make_necklace(const Tree& t, const std::vector<EdgeId>& joints) {
  return Necklace(t, joints);
}

Necklace make_necklace(const Tree& t, const std::vector<std::string>& joints) {
  std::vector<EdgeId> ids;
  for (const auto& n : joints) {
    auto e = t.find(n);
    if (!e) throw TreeError("unknown joint '" + n + "'");
    ids.push_back(*e);
  }
  return Necklace(t, ids);
}

Necklace segal_core_necklace(const Tree& t) {
  return Necklace(t, t.inner_edges());
}

Necklace whole_necklace(const Tree& t) { return Necklace(t, {}); }

std::vector<Necklace> necklaces_on(const Tree& t) {
  auto inner = t.inner_edges();
  std::vector<Necklace> out;
  for (std::size_t m = 0; m < (std::size_t{1} << inner.size()); ++m) {
    std::vector<EdgeId> d;
    for (std::size_t i = 0; i < inner.size(); ++i)
      if (m >> i & 1u) d.push_back(inner[i]);
    out.emplace_back(t, d);
  }
  return out;
}

bool face_in_necklace(const Necklace& n, const Tree& u) {
  TreeMap m = name_map(u, n.carrier());
  if (!is_face(m)) throw TreeError("not a face of the carrier");
  return n.contains(m);
}

Necklace restrict_necklace(const Necklace& n, const Tree& f) {
  TreeMap m = name_map(f, n.carrier());
  if (!classify_map(m).outer_face)
    throw TreeError("not an outer face of the carrier");
  std::vector<EdgeId> d;
  for (EdgeId e : f.inner_edges())
    if (n.is_joint(m(e))) d.push_back(e);
  return Necklace(f, d);
}

bool necklace_map_check(const Necklace& n, const Necklace& target,
                        const TreeMap& phi) {
  const Tree& t = n.carrier();
  const Tree& u = target.carrier();
  EdgeId root = phi(t.root());
  std::vector<char> leaf(u.edge_count(), 0), in_j(u.edge_count(), 0);
  std::vector<EdgeId> leaves;
  for (EdgeId l : t.leaves()) {
    leaves.push_back(phi(l));
    leaf[phi(l)] = 1;
  }
  for (const auto& name : n.joint_tree().names()) in_j[phi(t.id(name))] = 1;
  auto in = closure_mask(u, root, leaves);
  for (EdgeId j : target.joints())
    if (in[j] && j != root && !leaf[j] && !in_j[j]) return false;
  return true;
}

bool necklace_map_direct(const Necklace& n, const Necklace& target,
                         const TreeMap& phi) {
  for (std::size_t b = 0; b < n.bead_count(); ++b) {
    TreeMap c = compose(phi, n.piece_inclusion(b));
    if (!target.contains(c)) return false;
  }
  return true;
}

NecklaceMap make_necklace_map(const Necklace& n, const Necklace& target,
                              const TreeMap& phi) {
  if (!necklace_map_check(n, target, phi))
    throw TreeError("carrier map does not induce a map of necklaces");
  return NecklaceMap{n, target, phi};
}

NecklaceMap identity_necklace_map(const Necklace& n) {
  return NecklaceMap{n, n, identity_map(n.carrier())};
}

NecklaceMap compose(const NecklaceMap& g, const NecklaceMap& f) {
  return NecklaceMap{f.source, g.target, compose(g.carrier_map, f.carrier_map)};
}

std::size_t receiving_piece(const NecklaceMap& m, std::size_t b) {
  TreeMap c = compose(m.carrier_map, m.source.piece_inclusion(b));
  const auto& pieces = m.target.pieces();
  for (std::size_t i = 0; i < pieces.size(); ++i)
    if (into_piece(c.source, c.target, c.assignment, pieces[i])) return i;
  return npos;
}

std::vector<std::size_t> bead_pushforward(const NecklaceMap& m) {
  if (!is_face(m.carrier_map)) throw TreeError("carrier map is not a face");
  std::vector<std::size_t> out;
  const auto& targets = m.target.beads();
  for (std::size_t b = 0; b < m.source.bead_count(); ++b) {
    TreeMap c = compose(m.carrier_map, m.source.piece_inclusion(b));
    std::size_t found = npos, count = 0;
    for (std::size_t i = 0; i < targets.size(); ++i)
      if (into_piece(c.source, c.target, c.assignment, targets[i])) {
        found = i;
        ++count;
      }
    if (count != 1)
      throw TreeError("bead '" + print_tree(m.source.beads()[b]) +
                      "' has no unique receiving bead");
    out.push_back(found);
  }
  return out;
}

NecklaceSet::NecklaceSet(Necklace n)
    : Representable(n.carrier()), necklace_(std::move(n)) {}

std::string NecklaceSet::describe() const {
  std::string s = "necklace:" + print_tree(base_) + ":";
  auto names = necklace_.joint_names();
  for (std::size_t i = 0; i < names.size(); ++i) s += (i ? "," : "") + names[i];
  return s;
}

bool NecklaceSet::contains(const Tree& s, const std::vector<EdgeId>& a) const {
  return necklace_.contains(s, a);
}

// ---- maps out of Omega[n] ----

std::vector<BeadFamily> necklace_dendrices(const Necklace& n,
                                           const DendroidalSet& x) {
  const auto& pieces = n.pieces();
  const Tree& t = n.carrier();
  struct Option {
    Dendrex d;
    std::vector<std::pair<EdgeId, Dendrex>> joint_colors;
  };
  std::vector<std::vector<Option>> options;
  for (const Tree& p : pieces) {
    std::vector<Option> opts;
    for (auto& d : x.dendrices(p)) {
      Option o{d, {}};
      for (EdgeId e = 0; e < static_cast<EdgeId>(p.edge_count()); ++e) {
        EdgeId g = t.id(p.name(e));
        if (n.is_joint(g)) o.joint_colors.emplace_back(g, x.color(d, p, e));
      }
      opts.push_back(std::move(o));
    }
    options.push_back(std::move(opts));
  }
  std::vector<BeadFamily> out;
  BeadFamily cur;
  std::map<EdgeId, Dendrex> fixed;
  auto rec = [&](auto&& self, std::size_t b) -> void {
    if (b == pieces.size()) {
      out.push_back(cur);
      return;
    }
    for (const Option& o : options[b]) {
      bool ok = true;
      std::vector<EdgeId> added;
      for (const auto& [e, c] : o.joint_colors) {
        auto it = fixed.find(e);
        if (it == fixed.end()) {
          fixed.emplace(e, c);
          added.push_back(e);
        } else if (it->second != c) {
          ok = false;
          break;
        }
      }
      if (ok) {
        cur.push_back(o.d);
        self(self, b + 1);
        cur.pop_back();
      }
      for (EdgeId e : added) fixed.erase(e);
    }
  };
  rec(rec, 0);
  return out;
}

bool is_compatible_family(const Necklace& n, const DendroidalSet& x,
                          const BeadFamily& f) {
  const auto& pieces = n.pieces();
  if (f.size() != pieces.size()) return false;
  const Tree& t = n.carrier();
  std::map<EdgeId, Dendrex> fixed;
  for (std::size_t b = 0; b < pieces.size(); ++b) {
    const Tree& p = pieces[b];
    auto all = x.dendrices(p);
    if (!std::binary_search(all.begin(), all.end(), f[b])) return false;
    for (EdgeId e = 0; e < static_cast<EdgeId>(p.edge_count()); ++e) {
      EdgeId g = t.id(p.name(e));
      if (!n.is_joint(g)) continue;
      Dendrex c = x.color(f[b], p, e);
      auto [it, fresh] = fixed.emplace(g, c);
      if (!fresh && it->second != c) return false;
    }
  }
  return true;
}

Dendrex evaluate_family(const Necklace& n, const DendroidalSet& x,
                        const BeadFamily& f, const TreeMap& m) {
  const auto& pieces = n.pieces();
  for (std::size_t b = 0; b < pieces.size(); ++b) {
    auto a = into_piece(m.source, m.target, m.assignment, pieces[b]);
    if (a) return x.restrict(f.at(b), TreeMap{m.source, pieces[b], *a});
  }
  throw TreeError("map does not lie in the necklace");
}

BeadFamily pull_family(const DendroidalSet& x, const NecklaceMap& m,
                       const BeadFamily& f) {
  BeadFamily out;
  for (std::size_t b = 0; b < m.source.pieces().size(); ++b) {
    TreeMap c = compose(m.carrier_map, m.source.piece_inclusion(b));
    out.push_back(evaluate_family(m.target, x, f, c));
  }
  return out;
}

bool is_totally_nondegenerate(const Necklace& n, const DendroidalSet& x,
                              const BeadFamily& f) {
  for (std::size_t b = 0; b < n.pieces().size(); ++b)
    if (is_degenerate(x, n.pieces()[b], f.at(b))) return false;
  return true;
}

TndFactorization tnd_factorize(const Necklace& n, const DendroidalSet& x,
                               const BeadFamily& f) {
  const Tree& t = n.carrier();
  const auto& pieces = n.pieces();
  std::vector<EzForm> ez;
  // input names of the carrier vertices to collapse
  std::vector<std::string> collapse;
  for (std::size_t b = 0; b < pieces.size(); ++b) {
    ez.push_back(ez_normal_form(x, pieces[b], f.at(b)));
    const TreeMap& s = ez.back().degeneracy;
    for (const auto& v : pieces[b].vertices())
      if (v.inputs.size() == 1 && s(v.out) == s(v.inputs[0]))
        collapse.push_back(pieces[b].name(v.inputs[0]));
  }
  Tree cur = t;
  TreeMap sigma = identity_map(t);
  for (const auto& name : collapse) {
    UnaryCollapse c = collapse_unary(cur, cur.vertex_below(cur.id(name)));
    sigma = compose(c.sigma, sigma);
    cur = c.collapsed;
  }
  std::vector<EdgeId> d;
  for (EdgeId j : n.joints())
    if (cur.is_inner(sigma(j))) d.push_back(sigma(j));
  Necklace reduced(cur, d);
  BeadFamily g(reduced.pieces().size());
  std::vector<char> set(g.size(), 0);
  for (std::size_t b = 0; b < pieces.size(); ++b) {
    std::size_t target = 0;
    if (reduced.bead_count() > 0) {
      const Tree& p = pieces[b];
      const TreeMap& s = ez[b].degeneracy;
      int survivor = -1;
      for (std::size_t v = 0; v < p.vertex_count(); ++v) {
        const auto& w = p.vertex(static_cast<int>(v));
        if (!(w.inputs.size() == 1 && s(w.out) == s(w.inputs[0]))) {
          survivor = static_cast<int>(v);
          break;
        }
      }
      if (survivor < 0) continue;
      EdgeId out = sigma(t.id(p.name(p.vertex(survivor).out)));
      target = reduced.bead_of_vertex(cur.vertex_above(out));
    }
    const Tree& piece = reduced.pieces()[target];
    const Tree& got = ez[b].degeneracy.target;
    if (!(got.vertices() == piece.vertices()) ||
        got.edge_count() != piece.edge_count())
      throw std::logic_error("reduced bead has an unexpected shape");
    g[target] = ez[b].y;
    set[target] = 1;
  }
  if (std::find(set.begin(), set.end(), 0) != set.end())
    throw std::logic_error("reduced necklace has an unfilled bead");
  return TndFactorization{make_necklace_map(n, reduced, sigma), std::move(g)};
}

Json necklace_to_json(const Necklace& n) {
  return Json{{"carrier", tree_to_json(n.carrier())},
              {"joints", n.joint_names()}};
}

Necklace necklace_from_json(const Json& j) {
  const Json& c = j.at("carrier");
  Tree t = c.is_string() ? parse_tree(c.get<std::string>()) : tree_from_json(c);
  return make_necklace(t, j.at("joints").get<std::vector<std::string>>());
}

}  // namespace dendron
