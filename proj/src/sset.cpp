#include "dendron/sset.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace dendron {

std::vector<int> identity_sigma(int n) {
  std::vector<int> s(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) s[i] = i;
  return s;
}

std::vector<int> degeneracy_word(const std::vector<int>& sigma) {
  std::vector<int> w;
  for (std::size_t j = 0; j + 1 < sigma.size(); ++j)
    if (sigma[j] == sigma[j + 1]) w.push_back(static_cast<int>(j));
  return w;
}

std::vector<int> sigma_from_word(int n, const std::vector<int>& word) {
  std::vector<int> s(static_cast<std::size_t>(n) + 1, 0);
  for (int j = 1; j <= n; ++j)
    s[j] = s[j - 1] +
           (std::find(word.begin(), word.end(), j - 1) == word.end() ? 1 : 0);
  return s;
}

int SimplicialSet::add_cell(int dim, std::vector<Simplex> faces,
                            std::string label) {
  if (dim < 0) throw std::invalid_argument("negative dimension");
  if (static_cast<int>(faces.size()) != (dim == 0 ? 0 : dim + 1))
    throw std::invalid_argument("wrong number of faces");
  for (const Simplex& f : faces) {
    if (f.simplex_dim() != dim - 1 || f.dim >= dim ||
        static_cast<std::size_t>(f.cell) >= cell_count(f.dim))
      throw std::invalid_argument("face refers to a missing cell");
  }
  if (static_cast<int>(cells_.size()) <= dim) cells_.resize(dim + 1);
  cells_[dim].push_back(Cell{std::move(faces), std::move(label)});
  return static_cast<int>(cells_[dim].size()) - 1;
}

std::size_t SimplicialSet::cell_count(int dim) const {
  if (dim < 0 || dim >= static_cast<int>(cells_.size())) return 0;
  return cells_[dim].size();
}

std::vector<std::size_t> SimplicialSet::cell_vector() const {
  std::vector<std::size_t> v;
  for (const auto& c : cells_) v.push_back(c.size());
  while (!v.empty() && v.back() == 0) v.pop_back();
  return v;
}

const std::vector<Simplex>& SimplicialSet::faces(int dim, int cell) const {
  return cells_.at(dim).at(cell).faces;
}

const std::string& SimplicialSet::label(int dim, int cell) const {
  return cells_.at(dim).at(cell).label;
}

Simplex SimplicialSet::cell(int dim, int index) const {
  if (static_cast<std::size_t>(index) >= cell_count(dim))
    throw std::out_of_range("no such cell");
  return Simplex{identity_sigma(dim), dim, index};
}

Simplex SimplicialSet::face(const Simplex& x, int i) const {
  int n = x.simplex_dim();
  if (n <= 0 || i < 0 || i > n) throw std::out_of_range("face index");
  std::vector<int> tau;
  for (int j = 0; j <= n; ++j)
    if (j != i) tau.push_back(x.sigma[j]);
  int missing = -1;
  for (int k = 0; k <= x.dim && missing < 0; ++k)
    if (std::find(tau.begin(), tau.end(), k) == tau.end()) missing = k;
  if (missing < 0) return Simplex{std::move(tau), x.dim, x.cell};
  for (int& v : tau)
    if (v > missing) --v;
  const Simplex& f = faces(x.dim, x.cell)[missing];
  std::vector<int> out;
  for (int v : tau) out.push_back(f.sigma[v]);
  return Simplex{std::move(out), f.dim, f.cell};
}

Simplex SimplicialSet::degeneracy(const Simplex& x, int i) const {
  int n = x.simplex_dim();
  if (i < 0 || i > n) throw std::out_of_range("degeneracy index");
  std::vector<int> s(x.sigma.begin(), x.sigma.begin() + i + 1);
  s.insert(s.end(), x.sigma.begin() + i, x.sigma.end());
  return Simplex{std::move(s), x.dim, x.cell};
}

std::optional<std::string> SimplicialSet::check_identities() const {
  for (int d = 2; d <= dimension(); ++d)
    for (int c = 0; c < static_cast<int>(cell_count(d)); ++c) {
      Simplex x = cell(d, c);
      for (int j = 1; j <= d; ++j)
        for (int i = 0; i < j; ++i)
          if (!(face(face(x, j), i) == face(face(x, i), j - 1))) {
            std::ostringstream os;
            os << "d" << i << "d" << j << " != d" << j - 1 << "d" << i
               << " on cell " << d << ":" << c;
            return os.str();
          }
    }
  return std::nullopt;
}

int SimplicialSet::global_id(int dim, int cell) const {
  int id = 0;
  for (int d = 0; d < dim; ++d) id += static_cast<int>(cell_count(d));
  return id + cell;
}

// ---- posets and nerves ----

Poset boolean_lattice(std::size_t k) {
  Poset p;
  std::size_t n = std::size_t{1} << k;
  for (std::size_t a = 0; a < n; ++a) {
    std::string s = "{";
    bool first = true;
    for (std::size_t i = 0; i < k; ++i)
      if (a >> i & 1u) {
        s += (first ? "" : ",") + std::to_string(i);
        first = false;
      }
    p.labels.push_back(s + "}");
  }
  p.leq.assign(n, std::vector<char>(n, 0));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) p.leq[a][b] = (a & ~b) == 0;
  return p;
}

Poset chain_poset(std::size_t n) {
  Poset p;
  for (std::size_t i = 0; i < n; ++i) p.labels.push_back(std::to_string(i));
  p.leq.assign(n, std::vector<char>(n, 0));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) p.leq[a][b] = 1;
  return p;
}

namespace {

using Chain = std::vector<int>;

SimplicialSet nerve_filtered(const Poset& p,
                             const std::function<bool(const Chain&)>& keep) {
  std::vector<std::vector<Chain>> by_dim;
  Chain cur;
  std::function<void()> rec = [&] {
    if (!cur.empty()) {
      if (!keep(cur)) return;
      if (by_dim.size() < cur.size()) by_dim.resize(cur.size());
      by_dim[cur.size() - 1].push_back(cur);
    }
    for (int b = 0; b < static_cast<int>(p.size()); ++b) {
      if (!cur.empty() && (b == cur.back() || !p.leq[cur.back()][b])) continue;
      cur.push_back(b);
      rec();
      cur.pop_back();
    }
  };
  rec();
  SimplicialSet s;
  std::map<Chain, int> index;
  for (auto& level : by_dim) std::sort(level.begin(), level.end());
  for (std::size_t d = 0; d < by_dim.size(); ++d)
    for (const Chain& c : by_dim[d]) {
      std::vector<Simplex> faces;
      if (d > 0)
        for (std::size_t k = 0; k <= d; ++k) {
          Chain f = c;
          f.erase(f.begin() + static_cast<long>(k));
          faces.push_back(Simplex{identity_sigma(static_cast<int>(d) - 1),
                                  static_cast<int>(d) - 1, index.at(f)});
        }
      std::string label;
      for (std::size_t k = 0; k < c.size(); ++k)
        label += (k ? "<" : "") + p.labels[c[k]];
      index[c] = s.add_cell(static_cast<int>(d), std::move(faces), label);
    }
  return s;
}

}  // namespace

SimplicialSet nerve_of_poset(const Poset& p) {
  return nerve_filtered(p, [](const Chain&) { return true; });
}

SimplicialSet cube(std::size_t k) { return nerve_of_poset(boolean_lattice(k)); }

SimplicialSet pushout_product_domain(std::size_t boundary_axes,
                                     std::size_t endpoint_axes) {
  std::size_t k = boundary_axes + endpoint_axes;
  return nerve_filtered(boolean_lattice(k), [&](const Chain& c) {
    for (std::size_t a = 0; a < boundary_axes; ++a) {
      bool constant = true;
      for (int x : c)
        if ((x >> a & 1) != (c.front() >> a & 1)) constant = false;
      if (constant) return true;
    }
    for (std::size_t a = boundary_axes; a < k; ++a) {
      bool all = true;
      for (int x : c)
        if (!(x >> a & 1)) all = false;
      if (all) return true;
    }
    return false;
  });
}

// ---- isomorphism ----

std::optional<IsoWitness> iso_check(const SimplicialSet& a,
                                    const SimplicialSet& b) {
  if (a.cell_vector() != b.cell_vector()) return std::nullopt;
  int top = a.dimension();
  IsoWitness w;
  w.map.resize(top + 1);
  std::vector<std::vector<char>> used(top + 1);
  for (int d = 0; d <= top; ++d) {
    w.map[d].assign(a.cell_count(d), -1);
    used[d].assign(b.cell_count(d), 0);
  }
  // vertex profiles and edge multiplicities
  auto profile = [](const SimplicialSet& s) {
    std::vector<std::pair<int, int>> p(s.cell_count(0), {0, 0});
    std::map<std::pair<int, int>, int> edges;
    for (int e = 0; e < static_cast<int>(s.cell_count(1)); ++e) {
      const auto& f = s.faces(1, e);
      if (f[0].dim == 0 && f[1].dim == 0) {
        ++p[f[1].cell].first;
        ++p[f[0].cell].second;
        ++edges[{f[1].cell, f[0].cell}];
      }
    }
    return std::make_pair(p, edges);
  };
  auto [pa, ea] = profile(a);
  auto [pb, eb] = profile(b);
  auto edge_count = [](const std::map<std::pair<int, int>, int>& m, int u, int v) {
    auto it = m.find({u, v});
    return it == m.end() ? 0 : it->second;
  };
  auto mapped = [&](const Simplex& f) {
    return Simplex{f.sigma, f.dim, w.map[f.dim][f.cell]};
  };
  std::vector<std::pair<int, int>> order;
  for (int d = 0; d <= top; ++d)
    for (int c = 0; c < static_cast<int>(a.cell_count(d)); ++c)
      order.emplace_back(d, c);
  std::function<bool(std::size_t)> rec = [&](std::size_t k) -> bool {
    if (k == order.size()) return true;
    auto [d, c] = order[k];
    for (int t = 0; t < static_cast<int>(b.cell_count(d)); ++t) {
      if (used[d][t]) continue;
      if (d == 0) {
        if (pa[c] != pb[t]) continue;
        bool ok = edge_count(ea, c, c) == edge_count(eb, t, t);
        for (int u = 0; u < c && ok; ++u) {
          int bu = w.map[0][u];
          ok = edge_count(ea, u, c) == edge_count(eb, bu, t) &&
               edge_count(ea, c, u) == edge_count(eb, t, bu);
        }
        if (!ok) continue;
      } else {
        const auto& fa = a.faces(d, c);
        const auto& fb = b.faces(d, t);
        bool ok = true;
        for (std::size_t i = 0; i < fa.size() && ok; ++i)
          ok = mapped(fa[i]) == fb[i];
        if (!ok) continue;
      }
      w.map[d][c] = t;
      used[d][t] = 1;
      if (rec(k + 1)) return true;
      used[d][t] = 0;
      w.map[d][c] = -1;
    }
    return false;
  };
  if (!rec(0)) return std::nullopt;
  return w;
}

// ---- export ----

Json sset_to_json(const SimplicialSet& s) {
  Json cells = Json::object(), faces = Json::object(), labels = Json::object();
  for (int d = 0; d <= s.dimension(); ++d) {
    Json ids = Json::array();
    for (int c = 0; c < static_cast<int>(s.cell_count(d)); ++c) {
      int id = s.global_id(d, c);
      ids.push_back(id);
      labels[std::to_string(id)] = s.label(d, c);
      Json fs = Json::array();
      for (const Simplex& f : s.faces(d, c))
        fs.push_back(Json{{"deg", degeneracy_word(f.sigma)},
                          {"cell", s.global_id(f.dim, f.cell)}});
      if (d > 0) faces[std::to_string(id)] = fs;
    }
    cells[std::to_string(d)] = ids;
  }
  return Json{{"cells", cells},
              {"faces", faces},
              {"labels", labels},
              {"counts", s.cell_vector()}};
}

std::string sset_to_dot(const SimplicialSet& s) {
  std::ostringstream os;
  os << "digraph sset {\n";
  for (int v = 0; v < static_cast<int>(s.cell_count(0)); ++v)
    os << "  v" << v << " [label=\"" << s.label(0, v) << "\"];\n";
  for (int e = 0; e < static_cast<int>(s.cell_count(1)); ++e) {
    const auto& f = s.faces(1, e);
    os << "  v" << f[1].cell << " -> v" << f[0].cell << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace dendron
