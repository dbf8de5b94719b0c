#include "dendron/dendroidal_set.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "dendron/faces.hpp"

namespace dendron {

std::vector<Dendrex> DendroidalSet::colors() const {
  return dendrices(Tree::stick("0"));
}

Dendrex DendroidalSet::color(const Dendrex& x, const Tree& s, EdgeId e) const {
  TreeMap pick{Tree::stick(s.name(e)), s, {e}};
  return restrict(x, pick);
}

std::vector<Dendrex> DendroidalSet::edge_colors(const Dendrex& x,
                                                const Tree& s) const {
  std::vector<Dendrex> out;
  for (EdgeId e = 0; e < static_cast<EdgeId>(s.edge_count()); ++e)
    out.push_back(color(x, s, e));
  return out;
}

// ---- representables ----

Representable::Representable(Tree u) : base_(std::move(u)) {}

std::string Representable::describe() const {
  return "rep:" + print_tree(base_);
}

bool Representable::contains(const Tree&, const std::vector<EdgeId>&) const {
  return true;
}

std::vector<Dendrex> Representable::dendrices(const Tree& s) const {
  std::string key = s.shape_key();
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  std::vector<Dendrex> out;
  for (auto& a : map_assignments(s, base_))
    if (contains(s, a)) out.push_back(std::move(a));
  std::lock_guard<std::mutex> lock(mutex_);
  cache_.emplace(key, out);
  return out;
}

Dendrex Representable::restrict(const Dendrex& x, const TreeMap& f) const {
  Dendrex out;
  out.reserve(f.assignment.size());
  for (EdgeId e : f.assignment) out.push_back(x.at(e));
  return out;
}

namespace {

bool tall_assignment(const Tree& s, const Tree& u,
                     const std::vector<EdgeId>& a) {
  if (a[s.root()] != u.root()) return false;
  auto ls = s.leaves();
  auto lu = u.leaves();
  if (ls.size() != lu.size()) return false;
  std::vector<EdgeId> img;
  for (EdgeId l : ls) img.push_back(a[l]);
  std::sort(img.begin(), img.end());
  return img == lu;
}

std::vector<char> image_mask(const Tree& u, const std::vector<EdgeId>& a) {
  std::vector<char> in(u.edge_count(), 0);
  for (EdgeId e : a) in[e] = 1;
  return in;
}

}  // namespace

std::string Boundary::describe() const {
  return "boundary:" + print_tree(base_);
}

bool Boundary::contains(const Tree& s, const std::vector<EdgeId>& a) const {
  if (!tall_assignment(s, base_, a)) return true;
  auto in = image_mask(base_, a);
  return std::find(in.begin(), in.end(), 0) != in.end();
}

Horn::Horn(Tree u, std::vector<EdgeId> e)
    : Representable(std::move(u)), edges_(std::move(e)) {
  if (edges_.empty()) throw TreeError("horn needs a non-empty edge set");
  std::sort(edges_.begin(), edges_.end());
  for (EdgeId x : edges_)
    if (!base_.is_inner(x))
      throw TreeError("horn edge '" + base_.name(x) + "' is not inner");
}

std::string Horn::describe() const {
  std::string s = "horn:" + print_tree(base_) + ":";
  for (std::size_t i = 0; i < edges_.size(); ++i)
    s += (i ? "," : "") + base_.name(edges_[i]);
  return s;
}

bool Horn::contains(const Tree& s, const std::vector<EdgeId>& a) const {
  if (!tall_assignment(s, base_, a)) return true;
  auto in = image_mask(base_, a);
  for (EdgeId e : base_.inner_edges())
    if (!in[e] && !std::binary_search(edges_.begin(), edges_.end(), e))
      return true;
  return false;
}

std::string SegalCore::describe() const {
  return "sc:" + print_tree(base_);
}

bool SegalCore::contains(const Tree& s, const std::vector<EdgeId>& a) const {
  return closure_inner_edges(TreeMap{s, base_, a}).empty();
}

// ---- colimits ----

ColimitPresentation::ColimitPresentation(std::vector<Tree> generators,
                                         std::vector<Relation> relations)
    : generators_(std::move(generators)), relations_(std::move(relations)) {
  for (const auto& r : relations_) {
    if (r.from >= generators_.size() || r.to >= generators_.size())
      throw TreeError("relation refers to a missing generator");
    if (!(r.map.source.vertices() == generators_[r.from].vertices()) ||
        !(r.map.target.vertices() == generators_[r.to].vertices()) ||
        r.map.source.edge_count() != generators_[r.from].edge_count() ||
        r.map.target.edge_count() != generators_[r.to].edge_count())
      throw TreeError("relation map does not match its generators");
  }
}

std::string ColimitPresentation::describe() const {
  return "colimit of " + std::to_string(generators_.size()) +
         " representables";
}

std::size_t ColimitPresentation::max_nondegenerate_edges() const {
  std::size_t m = 0;
  for (const auto& g : generators_) m = std::max(m, g.edge_count());
  return m;
}

const ColimitPresentation::Level& ColimitPresentation::level(
    const Tree& s) const {
  std::string key = s.shape_key();
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = cache_.find(key);
  if (it != cache_.end()) return *it->second;

  std::vector<Dendrex> all;
  std::vector<std::size_t> offset;
  std::vector<std::vector<std::vector<EdgeId>>> maps;
  for (std::size_t g = 0; g < generators_.size(); ++g) {
    offset.push_back(all.size());
    maps.push_back(map_assignments(s, generators_[g]));
    for (const auto& a : maps.back()) {
      Dendrex d{static_cast<int>(g)};
      d.insert(d.end(), a.begin(), a.end());
      all.push_back(std::move(d));
    }
  }
  std::vector<std::size_t> parent(all.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (const auto& r : relations_) {
    const auto& src = maps[r.from];
    const auto& dst = maps[r.to];
    for (std::size_t k = 0; k < src.size(); ++k) {
      std::vector<EdgeId> img;
      for (EdgeId e : src[k]) img.push_back(r.map.assignment[e]);
      auto pos = std::lower_bound(dst.begin(), dst.end(), img);
      std::size_t j = offset[r.to] + static_cast<std::size_t>(pos - dst.begin());
      std::size_t a = find(offset[r.from] + k), b = find(j);
      // the smaller token becomes the representative
      if (a == b) continue;
      if (all[a] < all[b])
        parent[b] = a;
      else
        parent[a] = b;
    }
  }
  auto lvl = std::make_unique<Level>();
  for (std::size_t i = 0; i < all.size(); ++i) {
    const Dendrex& rep = all[find(i)];
    lvl->rep.emplace(all[i], rep);
    if (find(i) == i) lvl->classes.push_back(rep);
  }
  std::sort(lvl->classes.begin(), lvl->classes.end());
  return *cache_.emplace(key, std::move(lvl)).first->second;
}

std::vector<Dendrex> ColimitPresentation::dendrices(const Tree& s) const {
  return level(s).classes;
}

Dendrex ColimitPresentation::restrict(const Dendrex& x,
                                      const TreeMap& f) const {
  Dendrex y{x.at(0)};
  for (EdgeId e : f.assignment) y.push_back(x.at(1 + e));
  return level(f.source).rep.at(y);
}

// ---- colorings and the Segal condition ----

std::vector<Dendrex> fiber(const DendroidalSet& x, const Coloring& c) {
  std::vector<Dendrex> out;
  for (const Dendrex& d : x.dendrices(c.tree))
    if (x.edge_colors(d, c.tree) == c.colors) out.push_back(d);
  return out;
}

std::vector<SegalWitness> segal_check_at(const DendroidalSet& x,
                                         const Tree& t) {
  std::vector<SegalWitness> out;
  if (t.is_stick()) return out;
  std::size_t nv = t.vertex_count();
  std::vector<TreeMap> incl;
  std::vector<std::vector<Dendrex>> local;
  std::vector<std::vector<std::vector<Dendrex>>> local_colors;
  for (std::size_t v = 0; v < nv; ++v) {
    const Vertex& vx = t.vertex(static_cast<int>(v));
    Tree c = outer_subtree(t, vx.out, vx.inputs);
    incl.push_back(name_map(c, t));
    local.push_back(x.dendrices(c));
    std::vector<std::vector<Dendrex>> cols;
    for (const Dendrex& y : local.back()) cols.push_back(x.edge_colors(y, c));
    local_colors.push_back(std::move(cols));
  }

  // image of X(T) in the vertex product, grouped by coloring
  using Family = std::vector<std::size_t>;
  std::map<std::vector<Dendrex>, std::set<Family>> image;
  std::map<std::vector<Dendrex>, std::size_t> fiber_size;
  std::map<std::vector<Dendrex>, bool> injective;
  for (const Dendrex& d : x.dendrices(t)) {
    auto col = x.edge_colors(d, t);
    Family fam;
    for (std::size_t v = 0; v < nv; ++v) {
      Dendrex y = x.restrict(d, incl[v]);
      auto it = std::lower_bound(local[v].begin(), local[v].end(), y);
      fam.push_back(static_cast<std::size_t>(it - local[v].begin()));
    }
    ++fiber_size[col];
    if (!image[col].insert(fam).second) injective[col] = false;
  }

  // all compatible families, grouped by coloring
  std::map<std::vector<Dendrex>, std::size_t> families;
  std::vector<Dendrex> col(t.edge_count());
  std::vector<char> fixed(t.edge_count(), 0);
  auto rec = [&](auto&& self, std::size_t v) -> void {
    if (v == nv) {
      ++families[col];
      return;
    }
    const Vertex& vx = t.vertex(static_cast<int>(v));
    // local corolla edge ids: 0 is the output, 1.. the inputs
    for (std::size_t k = 0; k < local[v].size(); ++k) {
      const auto& lc = local_colors[v][k];
      if (fixed[vx.out] && !(col[vx.out] == lc[0])) continue;
      bool set_out = !fixed[vx.out];
      if (set_out) {
        col[vx.out] = lc[0];
        fixed[vx.out] = 1;
      }
      for (std::size_t i = 0; i < vx.inputs.size(); ++i) {
        col[vx.inputs[i]] = lc[1 + i];
        fixed[vx.inputs[i]] = 1;
      }
      self(self, v + 1);
      for (EdgeId i : vx.inputs) fixed[i] = 0;
      if (set_out) fixed[vx.out] = 0;
    }
  };
  rec(rec, 0);

  std::set<std::vector<Dendrex>> keys;
  for (const auto& [k, n] : families) keys.insert(k);
  for (const auto& [k, n] : fiber_size) keys.insert(k);
  for (const auto& k : keys) {
    std::size_t f = fiber_size.count(k) ? fiber_size[k] : 0;
    std::size_t p = families.count(k) ? families[k] : 0;
    bool inj = !injective.count(k);
    if (f != p || !inj)
      out.push_back(SegalWitness{t, k, f, p, inj});
  }
  return out;
}

SegalReport segal_check(const DendroidalSet& x, std::size_t bound,
                        bool all_failures) {
  SegalReport rep;
  for (const Tree& t : enumerate_trees(bound)) {
    ++rep.trees_checked;
    auto w = segal_check_at(x, t);
    if (w.empty()) continue;
    rep.pass = false;
    if (!all_failures) {
      rep.failures.push_back(w.front());
      return rep;
    }
    rep.failures.insert(rep.failures.end(), w.begin(), w.end());
  }
  return rep;
}

// ---- degeneracies ----

EzForm ez_normal_form(const DendroidalSet& x, const Tree& s,
                      const Dendrex& d) {
  TreeMap sigma = identity_map(s);
  Tree cur = s;
  Dendrex y = d;
  bool again = true;
  while (again) {
    again = false;
    for (int v : unary_vertices(cur)) {
      UnaryCollapse c = collapse_unary(cur, v);
      Dendrex low = x.restrict(y, c.delta);
      if (x.restrict(low, c.sigma) == y) {
        sigma = compose(c.sigma, sigma);
        cur = c.collapsed;
        y = std::move(low);
        again = true;
        break;
      }
    }
  }
  return EzForm{std::move(sigma), std::move(y)};
}

bool is_degenerate(const DendroidalSet& x, const Tree& s, const Dendrex& d) {
  for (int v : unary_vertices(s)) {
    UnaryCollapse c = collapse_unary(s, v);
    if (x.restrict(x.restrict(d, c.delta), c.sigma) == d) return true;
  }
  return false;
}

}  // namespace dendron
