#include "dendron/tree.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

namespace dendron {

ParseError::ParseError(std::size_t position, const std::string& message)
    : TreeError("at position " + std::to_string(position) + ": " + message),
      position_(position) {}

Tree Tree::from_records(const std::string& root,
                        const std::vector<VertexRecord>& vertices) {
  std::unordered_map<std::string, int> by_out;
  for (int i = 0; i < static_cast<int>(vertices.size()); ++i) {
    if (!by_out.emplace(vertices[i].out, i).second)
      throw TreeError("edge '" + vertices[i].out +
                      "' is the output of two vertices");
  }
  Tree t;
  std::unordered_map<std::string, EdgeId> seen;
  std::vector<char> used(vertices.size(), 0);

  // Iterative preorder walk; each frame is (record index, next child).
  auto visit = [&](const std::string& name) -> EdgeId {
    if (!seen.emplace(name, static_cast<EdgeId>(t.names_.size())).second)
      throw TreeError("duplicate edge name '" + name + "'");
    t.names_.push_back(name);
    return static_cast<EdgeId>(t.names_.size() - 1);
  };
  struct Frame {
    int record;
    int vertex;
    std::size_t next;
  };
  std::vector<Frame> stack;
  auto open = [&](const std::string& name) {
    EdgeId e = visit(name);
    auto it = by_out.find(name);
    if (it == by_out.end()) return;
    used[it->second] = 1;
    t.vertices_.push_back(Vertex{e, {}});
    stack.push_back(Frame{it->second,
                          static_cast<int>(t.vertices_.size() - 1), 0});
  };
  open(root);
  while (!stack.empty()) {
    Frame& f = stack.back();
    const auto& in = vertices[f.record].inputs;
    if (f.next == in.size()) {
      stack.pop_back();
      continue;
    }
    const std::string& child = in[f.next++];
    t.vertices_[f.vertex].inputs.push_back(
        static_cast<EdgeId>(t.names_.size()));
    open(child);
  }
  for (std::size_t i = 0; i < used.size(); ++i)
    if (!used[i])
      throw TreeError("vertex with output '" + vertices[i].out +
                      "' is not connected to the root");
  t.index();
  return t;
}

Tree Tree::stick(const std::string& name) {
  Tree t;
  t.names_.push_back(name);
  t.index();
  return t;
}

void Tree::index() {
  above_.assign(names_.size(), -1);
  below_.assign(names_.size(), -1);
  for (int v = 0; v < static_cast<int>(vertices_.size()); ++v) {
    above_[vertices_[v].out] = v;
    for (EdgeId e : vertices_[v].inputs) below_[e] = v;
  }
}

void Tree::check_unique_names() const {
  std::set<std::string> s(names_.begin(), names_.end());
  if (s.size() != names_.size()) throw TreeError("duplicate edge name");
}

std::optional<EdgeId> Tree::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<EdgeId>(i);
  return std::nullopt;
}

EdgeId Tree::id(std::string_view name) const {
  auto e = find(name);
  if (!e) throw TreeError("unknown edge '" + std::string(name) + "'");
  return *e;
}

std::vector<EdgeId> Tree::leaves() const {
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < static_cast<EdgeId>(names_.size()); ++e)
    if (above_[e] < 0) out.push_back(e);
  return out;
}

std::vector<EdgeId> Tree::inner_edges() const {
  std::vector<EdgeId> out;
  for (EdgeId e = 1; e < static_cast<EdgeId>(names_.size()); ++e)
    if (above_[e] >= 0) out.push_back(e);
  return out;
}

std::vector<std::string> Tree::leaf_names() const {
  std::vector<std::string> out;
  for (EdgeId e : leaves()) out.push_back(names_[e]);
  return out;
}

bool Tree::is_above(EdgeId above, EdgeId below) const {
  EdgeId e = above;
  while (true) {
    if (e == below) return true;
    int v = below_[e];
    if (v < 0) return false;
    e = vertices_[v].out;
  }
}

std::string Tree::shape_key() const {
  std::string key;
  for (EdgeId e = 0; e < static_cast<EdgeId>(names_.size()); ++e) {
    int v = above_[e];
    if (v < 0)
      key += '|';
    else
      key += std::to_string(vertices_[v].inputs.size()) + ".";
  }
  return key;
}

// ---- DSL ----

namespace {

bool ident_char(char c) {
  auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || c == '\'' || c == '.' || c == '-' ||
         u >= 0x80;
}

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Tree run() {
    skip();
    if (pos_ == s_.size()) throw ParseError(pos_, "empty input");
    std::string root = tree();
    skip();
    if (pos_ != s_.size())
      throw ParseError(pos_, std::string("unexpected '") + s_[pos_] + "'");
    return Tree::from_records(root, records_);
  }

 private:
  void skip() {
    while (pos_ < s_.size() &&
           std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  std::string ident() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
    if (start == pos_) {
      if (pos_ == s_.size())
        throw ParseError(pos_, "expected edge name, found end of input");
      throw ParseError(pos_, std::string("expected edge name, found '") +
                                 s_[pos_] + "'");
    }
    std::string name(s_.substr(start, pos_ - start));
    if (!names_.insert(name).second)
      throw ParseError(start, "duplicate edge name '" + name + "'");
    return name;
  }

  std::string tree() {
    std::string name = ident();
    skip();
    if (pos_ < s_.size() && s_[pos_] == '(') {
      ++pos_;
      std::size_t slot = records_.size();
      records_.push_back(VertexRecord{name, {}});
      skip();
      if (pos_ < s_.size() && s_[pos_] == ')') {
        ++pos_;
        return name;
      }
      while (true) {
        std::string child = tree();
        records_[slot].inputs.push_back(child);
        skip();
        if (pos_ == s_.size())
          throw ParseError(pos_, "expected ',' or ')', found end of input");
        if (s_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (s_[pos_] == ')') {
          ++pos_;
          break;
        }
        throw ParseError(pos_, std::string("expected ',' or ')', found '") +
                                   s_[pos_] + "'");
      }
    }
    return name;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::set<std::string> names_;
  std::vector<VertexRecord> records_;
};

void print_edge(const Tree& t, EdgeId e, std::string& out) {
  out += t.name(e);
  int v = t.vertex_above(e);
  if (v < 0) return;
  out += '(';
  const auto& in = t.vertex(v).inputs;
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (i) out += ',';
    print_edge(t, in[i], out);
  }
  out += ')';
}

}  // namespace

Tree parse_tree(std::string_view text) { return Parser(text).run(); }

std::string print_tree(const Tree& t) {
  std::string out;
  print_edge(t, t.root(), out);
  return out;
}

// ---- broad relations ----

std::optional<std::vector<EdgeId>> outer_subtree_leaves(
    const Tree& t, EdgeId root, const std::vector<EdgeId>& cut) {
  std::vector<char> in_cut(t.edge_count(), 0);
  for (EdgeId e : cut) {
    if (in_cut[e]) return std::nullopt;
    in_cut[e] = 1;
  }
  std::vector<EdgeId> got;
  std::vector<EdgeId> stack{root};
  while (!stack.empty()) {
    EdgeId e = stack.back();
    stack.pop_back();
    if (in_cut[e]) {
      got.push_back(e);
      continue;
    }
    int v = t.vertex_above(e);
    if (v < 0) return std::nullopt;
    const auto& in = t.vertex(v).inputs;
    for (auto it = in.rbegin(); it != in.rend(); ++it) stack.push_back(*it);
  }
  if (got.size() != cut.size()) return std::nullopt;
  return got;
}

bool broad_leq(const std::vector<EdgeId>& lhs, EdgeId rhs, const Tree& t,
               bool planar) {
  auto got = outer_subtree_leaves(t, rhs, lhs);
  if (!got) return false;
  if (planar) return *got == lhs;
  return true;
}

bool broad_leq(const std::vector<std::string>& lhs, const std::string& rhs,
               const Tree& t, bool planar) {
  std::vector<EdgeId> ids;
  for (const auto& n : lhs) ids.push_back(t.id(n));
  return broad_leq(ids, t.id(rhs), t, planar);
}

CanonicalTree canonical_form(const Tree& t) {
  std::vector<std::string> renaming;
  for (std::size_t i = 0; i < t.edge_count(); ++i)
    renaming.push_back(std::to_string(i));
  std::unordered_map<std::string, std::string> m;
  for (std::size_t i = 0; i < t.edge_count(); ++i)
    m[t.name(static_cast<EdgeId>(i))] = renaming[i];
  Tree c = t.renamed([&](const std::string& n) { return m.at(n); });
  return CanonicalTree{std::move(c), std::move(renaming)};
}

// ---- shape enumeration ----

namespace {

// A shape is the preorder list of arities, -1 marking a leaf.
using Shape = std::vector<int>;

const std::vector<Shape>& shapes_of_size(std::size_t n);

std::map<std::size_t, std::vector<Shape>>& shape_cache() {
  static std::map<std::size_t, std::vector<Shape>> c;
  return c;
}

// Forests of total size m, each forest stored as its list of trees.
std::vector<std::vector<Shape>> forests(std::size_t m) {
  if (m == 0) return {{}};
  std::vector<std::vector<Shape>> out;
  for (std::size_t s = 1; s <= m; ++s)
    for (const Shape& first : shapes_of_size(s))
      for (auto& rest : forests(m - s)) {
        std::vector<Shape> f{first};
        f.insert(f.end(), rest.begin(), rest.end());
        out.push_back(std::move(f));
      }
  return out;
}

const std::vector<Shape>& shapes_of_size(std::size_t n) {
  auto& cache = shape_cache();
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<Shape> out;
  if (n == 1) out.push_back({-1});
  for (auto& f : forests(n - 1)) {
    Shape s{static_cast<int>(f.size())};
    for (auto& c : f) s.insert(s.end(), c.begin(), c.end());
    out.push_back(std::move(s));
  }
  return cache.emplace(n, std::move(out)).first->second;
}

Tree shape_to_tree(const Shape& s) {
  std::vector<VertexRecord> recs;
  std::size_t pos = 0;
  // Recursive over the preorder arity list.
  auto rec = [&](auto&& self) -> std::string {
    std::string name = std::to_string(pos);
    int arity = s[pos++];
    if (arity < 0) return name;
    std::size_t slot = recs.size();
    recs.push_back(VertexRecord{name, {}});
    for (int i = 0; i < arity; ++i) {
      std::string c = self(self);
      recs[slot].inputs.push_back(c);
    }
    return name;
  };
  std::string root = rec(rec);
  return Tree::from_records(root, recs);
}

}  // namespace

std::vector<Tree> enumerate_trees_exact(std::size_t edges) {
  std::vector<Tree> out;
  if (edges == 0) return out;
  for (const Shape& s : shapes_of_size(edges)) out.push_back(shape_to_tree(s));
  return out;
}

std::vector<Tree> enumerate_trees(std::size_t max_edges) {
  std::vector<Tree> out;
  for (std::size_t n = 1; n <= max_edges; ++n) {
    auto part = enumerate_trees_exact(n);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

// ---- faces ----

std::vector<VertexRecord> records(const Tree& t) {
  std::vector<VertexRecord> out;
  for (const auto& v : t.vertices()) {
    VertexRecord r{t.name(v.out), {}};
    for (EdgeId e : v.inputs) r.inputs.push_back(t.name(e));
    out.push_back(std::move(r));
  }
  return out;
}

Tree outer_subtree(const Tree& t, EdgeId root, const std::vector<EdgeId>& cut) {
  std::vector<char> in_cut(t.edge_count(), 0);
  for (EdgeId e : cut) in_cut[e] = 1;
  std::vector<VertexRecord> recs;
  std::vector<EdgeId> stack{root};
  while (!stack.empty()) {
    EdgeId e = stack.back();
    stack.pop_back();
    if (in_cut[e]) continue;
    int v = t.vertex_above(e);
    if (v < 0) throw TreeError("cut does not bound an outer subtree");
    VertexRecord r{t.name(e), {}};
    for (EdgeId i : t.vertex(v).inputs) {
      r.inputs.push_back(t.name(i));
      stack.push_back(i);
    }
    recs.push_back(std::move(r));
  }
  return Tree::from_records(t.name(root), recs);
}

Tree contract(const Tree& t, const std::vector<EdgeId>& inner) {
  std::vector<char> gone(t.edge_count(), 0);
  for (EdgeId e : inner) {
    if (!t.is_inner(e))
      throw TreeError("edge '" + t.name(e) + "' is not an inner edge");
    gone[e] = 1;
  }
  auto expand = [&](auto&& self, EdgeId e, std::vector<std::string>& out)
      -> void {
    for (EdgeId i : t.vertex(t.vertex_above(e)).inputs) {
      if (gone[i])
        self(self, i, out);
      else
        out.push_back(t.name(i));
    }
  };
  std::vector<VertexRecord> recs;
  for (const auto& v : t.vertices()) {
    if (gone[v.out]) continue;
    VertexRecord r{t.name(v.out), {}};
    expand(expand, v.out, r.inputs);
    recs.push_back(std::move(r));
  }
  return Tree::from_records(t.name(t.root()), recs);
}

Tree inner_face(const Tree& t, const std::vector<EdgeId>& kept) {
  std::vector<char> keep(t.edge_count(), 0);
  for (EdgeId e : kept) keep[e] = 1;
  std::vector<EdgeId> drop;
  for (EdgeId e : t.inner_edges())
    if (!keep[e]) drop.push_back(e);
  return contract(t, drop);
}

std::vector<Tree> outer_faces(const Tree& t) {
  // options(e): all cuts of the outer subtrees rooted at e.
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
  std::vector<Tree> out;
  for (EdgeId r = 0; r < static_cast<EdgeId>(t.edge_count()); ++r)
    for (const auto& cut : options[r]) out.push_back(outer_subtree(t, r, cut));
  return out;
}

std::vector<Tree> replanarizations(const Tree& t, std::size_t limit) {
  auto base = records(t);
  std::vector<std::vector<int>> perm(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    perm[i].resize(base[i].inputs.size());
    std::iota(perm[i].begin(), perm[i].end(), 0);
  }
  std::vector<Tree> out;
  while (true) {
    std::vector<VertexRecord> recs = base;
    for (std::size_t i = 0; i < base.size(); ++i)
      for (std::size_t j = 0; j < perm[i].size(); ++j)
        recs[i].inputs[j] = base[i].inputs[perm[i][j]];
    out.push_back(Tree::from_records(t.name(t.root()), recs));
    if (limit && out.size() >= limit) break;
    std::size_t i = 0;
    for (; i < perm.size(); ++i) {
      if (std::next_permutation(perm[i].begin(), perm[i].end())) break;
    }
    if (i == perm.size()) break;
  }
  return out;
}

Tree graft(const Tree& lower, const Tree& upper, const std::string& at) {
  auto leaf = lower.find(at);
  if (!leaf || !lower.is_leaf(*leaf))
    throw TreeError("'" + at + "' is not a leaf of the lower tree");
  if (upper.name(upper.root()) != at)
    throw TreeError("'" + at + "' is not the root of the upper tree");
  for (const auto& n : upper.names())
    if (n != at && lower.find(n))
      throw TreeError("edge name '" + n + "' occurs in both trees");
  auto recs = records(lower);
  auto up = records(upper);
  recs.insert(recs.end(), up.begin(), up.end());
  return Tree::from_records(lower.name(lower.root()), recs);
}

std::size_t default_max_edges() {
  if (const char* env = std::getenv("DENDRON_MAX_EDGES")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 8;
}

}  // namespace dendron
