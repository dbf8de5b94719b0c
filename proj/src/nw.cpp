#include "dendron/nw.hpp"

#include <algorithm>
#include <set>

#include "dendron/faces.hpp"

namespace dendron {

namespace {

// Re-targets a map along an inclusion of named trees.
TreeMap retarget(const TreeMap& m, const Tree& target) {
  std::vector<EdgeId> a(m.assignment.size());
  for (std::size_t e = 0; e < a.size(); ++e)
    a[e] = target.id(m.target.name(m.assignment[e]));
  return TreeMap{m.source, target, std::move(a)};
}

std::vector<EdgeId> ids_in(const Tree& t, const std::vector<std::string>& ns) {
  std::vector<EdgeId> out;
  out.reserve(ns.size());
  for (const auto& n : ns) out.push_back(t.id(n));
  return out;
}

void chains_below(std::size_t top, int length, std::vector<std::size_t>& cur,
                  std::vector<std::vector<std::size_t>>& out) {
  if (static_cast<int>(cur.size()) == length) {
    out.push_back(cur);
    return;
  }
  std::size_t hi = cur.empty() ? top : cur.back();
  // cur is built from the top down
  for (std::size_t m = hi;; m = (m - 1) & hi) {
    cur.push_back(m);
    chains_below(top, length, cur, out);
    cur.pop_back();
    if (m == 0) break;
  }
}

}  // namespace

TreeMap NWString::composite() const {
  return compose(name_map(chain.back(), target),
                 compose(name_map(chain.front(), chain.back()), head));
}

Tree NWString::closure() const {
  const Tree& jn = chain.back();
  return outer_subtree(target, target.id(jn.name(jn.root())),
                       ids_in(target, jn.leaf_names()));
}

std::optional<std::string> check_string(const NWString& s) {
  if (s.chain.empty()) return "empty chain";
  if (!(s.head.source == s.source) || !(s.head.target == s.chain.front()))
    return "head does not run from the source to J_0";
  if (!is_valid_assignment(s.source, s.chain.front(), s.head.assignment))
    return "head is not a map";
  if (!is_tall(s.head)) return "head is not tall";
  for (std::size_t k = 0; k + 1 < s.chain.size(); ++k) {
    std::optional<TreeMap> m;
    try {
      m = name_map(s.chain[k], s.chain[k + 1]);
    } catch (const TreeError&) {
      return "J_" + std::to_string(k) + " is not a face of the next";
    }
    MapClass c = classify_map(*m);
    if (!c.inner_face || !c.planar)
      return "J_" + std::to_string(k) + " -> J_" + std::to_string(k + 1) +
             " is not a planar inner face";
  }
  try {
    MapClass c = classify_map(name_map(s.chain.back(), s.target));
    if (!c.face || !c.planar) return "J_n -> T is not a planar face";
  } catch (const TreeError&) {
    return "J_n is not a face of T";
  }
  return std::nullopt;
}

std::vector<NWString> nw_simplices(const Tree& t, const Tree& s, int n) {
  if (n < 0) throw std::invalid_argument("negative simplicial level");
  std::vector<NWString> out;
  std::map<std::string, std::vector<TreeMap>> talls;
  for (const Face& face : enumerate_faces(t, FaceKind::all)) {
    const Tree& jn = face.tree;
    InnerFaceLattice lattice(jn);
    std::size_t top = lattice.size() - 1;
    std::vector<std::vector<std::size_t>> chains;
    std::vector<std::size_t> cur;
    chains_below(top, n, cur, chains);
    for (auto& c : chains) {
      std::reverse(c.begin(), c.end());
      std::vector<Tree> chain;
      for (std::size_t m : c) chain.push_back(lattice.face(m));
      chain.push_back(jn);
      const Tree& j0 = chain.front();
      auto key = print_tree(j0);
      auto it = talls.find(key);
      if (it == talls.end()) it = talls.emplace(key, tall_maps(s, j0)).first;
      for (const TreeMap& h : it->second) out.push_back(NWString{s, t, chain, h});
    }
  }
  return out;
}

bool in_necklace(const Necklace& nk, const NWString& s) {
  const Tree& t = nk.carrier();
  Tree f = s.closure();
  const Tree& j0 = s.chain.front();
  for (EdgeId d : nk.joints()) {
    auto fe = f.find(t.name(d));
    if (!fe || !f.is_inner(*fe)) continue;
    if (!j0.find(t.name(d))) return false;
  }
  return true;
}

std::vector<NWString> nw_simplices(const Necklace& nk, const Tree& s, int n) {
  auto all = nw_simplices(nk.carrier(), s, n);
  std::vector<NWString> out;
  for (auto& x : all)
    if (in_necklace(nk, x)) out.push_back(std::move(x));
  return out;
}

NWString nw_face(const NWString& s, int k) {
  int n = s.level();
  if (n < 1 || k < 0 || k > n)
    throw std::out_of_range("face index " + std::to_string(k) +
                            " out of range at level " + std::to_string(n));
  NWString out = s;
  if (k == 0) out.head = retarget(s.head, s.chain[1]);
  out.chain.erase(out.chain.begin() + k);
  return out;
}

NWString nw_degeneracy(const NWString& s, int k) {
  int n = s.level();
  if (k < 0 || k > n)
    throw std::out_of_range("degeneracy index " + std::to_string(k) +
                            " out of range at level " + std::to_string(n));
  NWString out = s;
  out.chain.insert(out.chain.begin() + k, s.chain[k]);
  return out;
}

NWString nw_pullback(const NWString& s, const TreeMap& psi) {
  if (!(psi.target == s.source))
    throw std::invalid_argument("pullback map does not end at the source");
  TreeMap phi0 = compose(s.head, psi);
  Tree j = image_closure(phi0);
  std::vector<Tree> chain{j};
  for (std::size_t k = 1; k < s.chain.size(); ++k) {
    const Tree& big = s.chain[k];
    j = outer_subtree(big, big.id(j.name(j.root())),
                      ids_in(big, j.leaf_names()));
    chain.push_back(j);
  }
  TreeMap head = retarget(phi0, chain.front());
  return NWString{psi.source, s.target, std::move(chain), std::move(head)};
}

NWString nw_pushforward(const NWString& s, const TreeMap& phi) {
  if (!(phi.source == s.target))
    throw std::invalid_argument("pushforward map does not start at the target");
  std::vector<Tree> chain;
  for (const Tree& j : s.chain)
    chain.push_back(image_tree(compose(phi, name_map(j, s.target))));
  TreeMap to_t = compose(name_map(s.chain.front(), s.target), s.head);
  TreeMap head = retarget(compose(phi, to_t), chain.front());
  return NWString{s.source, phi.target, std::move(chain), std::move(head)};
}

Tree j_phi(const Necklace& nk, const TreeMap& phi) {
  if (!(phi.target == nk.carrier()))
    throw std::invalid_argument("map does not land in the carrier");
  Tree f = image_closure(phi);
  Tree img = image_tree(phi);
  std::set<EdgeId> kept;
  for (EdgeId e : img.inner_edges()) kept.insert(f.id(img.name(e)));
  for (EdgeId d : nk.joints()) {
    auto fe = f.find(nk.carrier().name(d));
    if (fe && f.is_inner(*fe)) kept.insert(*fe);
  }
  return inner_face(f, {kept.begin(), kept.end()});
}

NWSet::NWSet(Necklace nk, int level)
    : necklace_(std::move(nk)), level_(level) {
  if (level < 0) throw std::invalid_argument("negative simplicial level");
  const Tree& t = necklace_.carrier();
  for (const Face& f : enumerate_faces(t, FaceKind::all)) {
    face_index_.emplace(print_tree(f.tree), static_cast<int>(faces_.size()));
    faces_.push_back(f.tree);
  }
  fast_ = t.edge_count() <= 64;
  if (!fast_) return;
  auto bit = [](EdgeId e) { return std::uint64_t{1} << e; };
  above_eq_.assign(t.edge_count(), 0);
  for (EdgeId e = static_cast<EdgeId>(t.edge_count()) - 1; e >= 0; --e) {
    above_eq_[e] = bit(e);
    int v = t.vertex_above(e);
    if (v >= 0)
      for (EdgeId i : t.vertex(v).inputs) above_eq_[e] |= above_eq_[i];
  }
  std::uint64_t joints = 0;
  for (EdgeId d : necklace_.joints()) joints |= bit(d);
  for (std::size_t i = 0; i < faces_.size(); ++i) {
    const Tree& f = faces_[i];
    std::vector<EdgeId> tc, tl(t.edge_count(), -1), inner;
    std::uint64_t m = 0, lm = 0;
    for (EdgeId e = 0; e < static_cast<EdgeId>(f.edge_count()); ++e) {
      EdgeId c = t.id(f.name(e));
      tc.push_back(c);
      tl[c] = e;
      m |= bit(c);
      if (f.is_leaf(e)) lm |= bit(c);
      if (f.is_inner(e)) inner.push_back(c);
    }
    // inner edges of the outer closure
    std::uint64_t closure = above_eq_[tc[f.root()]];
    for (EdgeId e = 0; e < static_cast<EdgeId>(t.edge_count()); ++e)
      if (lm & bit(e)) closure &= ~(above_eq_[e] & ~bit(e));
    closure &= ~(lm | bit(tc[f.root()]));
    mask_.push_back(m);
    leaf_mask_.push_back(lm);
    required_.push_back(closure & joints);
    to_carrier_.push_back(std::move(tc));
    to_local_.push_back(std::move(tl));
    inner_.push_back(std::move(inner));
    by_mask_.emplace(std::make_pair(m, lm), static_cast<int>(i));
  }
}

int NWSet::face_of(std::uint64_t mask, std::uint64_t leaves) const {
  auto it = by_mask_.find({mask, leaves});
  return it == by_mask_.end() ? -1 : it->second;
}

std::string NWSet::describe() const {
  return "NW(" + print_tree(necklace_.carrier()) + ")_" +
         std::to_string(level_);
}

Dendrex NWSet::encode(const NWString& s) const {
  Dendrex x(s.head.assignment.begin(), s.head.assignment.end());
  for (const Tree& j : s.chain) x.push_back(face_index_.at(print_tree(j)));
  return x;
}

NWString NWSet::decode(const Tree& s, const Dendrex& x) const {
  std::size_t ne = s.edge_count();
  std::vector<Tree> chain;
  for (std::size_t k = ne; k < x.size(); ++k) chain.push_back(faces_.at(x[k]));
  TreeMap head{s, chain.front(), std::vector<EdgeId>(x.begin(), x.begin() + ne)};
  return NWString{s, necklace_.carrier(), std::move(chain), std::move(head)};
}

std::vector<Dendrex> NWSet::dendrices(const Tree& s) const {
  std::string key = s.shape_key();
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  std::vector<Dendrex> out;
  if (!fast_) {
    for (const NWString& str : nw_simplices(necklace_, s, level_))
      out.push_back(encode(str));
  } else {
    std::map<int, std::vector<TreeMap>> talls;
    std::vector<int> idx(static_cast<std::size_t>(level_) + 1);
    for (std::size_t top = 0; top < faces_.size(); ++top) {
      const auto& inner = inner_[top];
      std::uint64_t lm = leaf_mask_[top];
      idx[level_] = static_cast<int>(top);
      // J_k from the top down, each dropping inner edges of the one above
      auto rec = [&](auto&& self, int k, std::uint64_t above) -> void {
        if (k < 0) {
          std::uint64_t m0 = mask_[idx[0]];
          if (required_[top] & ~m0) return;
          auto it = talls.find(idx[0]);
          if (it == talls.end()) it = talls.emplace(idx[0], tall_maps(s, faces_[idx[0]])).first;
          for (const TreeMap& h : it->second) {
            Dendrex x(h.assignment.begin(), h.assignment.end());
            x.insert(x.end(), idx.begin(), idx.end());
            out.push_back(std::move(x));
          }
          return;
        }
        std::uint64_t droppable = 0;
        for (EdgeId e : inner) droppable |= above & (std::uint64_t{1} << e);
        for (std::uint64_t d = droppable;; d = (d - 1) & droppable) {
          idx[k] = face_of(above & ~d, lm);
          self(self, k - 1, above & ~d);
          if (d == 0) break;
        }
      };
      rec(rec, level_ - 1, mask_[top]);
    }
  }
  std::sort(out.begin(), out.end());
  std::lock_guard<std::mutex> lock(mutex_);
  cache_.emplace(key, out);
  return out;
}

Dendrex NWSet::restrict(const Dendrex& x, const TreeMap& f) const {
  if (!fast_) return encode(nw_pullback(decode(f.target, x), f));
  std::size_t ne = f.target.edge_count();
  std::size_t ns = f.source.edge_count();
  const auto& tc = to_carrier_.at(x.at(ne));
  std::vector<EdgeId> pc(ns);
  for (std::size_t e = 0; e < ns; ++e) pc[e] = tc[x[f.assignment[e]]];
  std::uint64_t lm = 0, range = above_eq_[pc[f.source.root()]];
  for (EdgeId l : f.source.leaves()) {
    lm |= std::uint64_t{1} << pc[l];
    range &= ~(above_eq_[pc[l]] & ~(std::uint64_t{1} << pc[l]));
  }
  Dendrex out(ns);
  for (std::size_t k = ne; k < x.size(); ++k) {
    int i = face_of(mask_[x[k]] & range, lm);
    if (i < 0) return encode(nw_pullback(decode(f.target, x), f));
    out.push_back(i);
  }
  const auto& tl = to_local_[out[ns]];
  for (std::size_t e = 0; e < ns; ++e) out[e] = tl[pc[e]];
  return out;
}

std::size_t NWSet::max_nondegenerate_edges() const {
  return necklace_.carrier().edge_count();
}

}  // namespace dendron
