#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dendron {

/// Index of an edge inside a Tree. Edges are numbered in planar depth-first
/// preorder, so the root is always edge 0.
using EdgeId = int;

/// A vertex: the generating broad relation `inputs <= out`.
/// The order of `inputs` is the planar order.
struct Vertex {
  EdgeId out = 0;
  std::vector<EdgeId> inputs;

  friend bool operator==(const Vertex&, const Vertex&) = default;
  friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

/// Vertex description by edge names, used to build trees.
struct VertexRecord {
  std::string out;
  std::vector<std::string> inputs;
};

class TreeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public TreeError {
 public:
  ParseError(std::size_t position, const std::string& message);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// A planar rooted tree with named edges.
///
/// Values are immutable after construction. Two trees compare equal iff they
/// have the same planar shape and the same edge names in the same places.
class Tree {
 public:
  /// Builds a tree from a root name and vertex records. Throws TreeError when
  /// the records do not describe a rooted tree (duplicate names, an edge
  /// topped by two vertices, disconnected records, ...).
  static Tree from_records(const std::string& root,
                           const std::vector<VertexRecord>& vertices);

  /// The stick tree with a single edge and no vertices.
  static Tree stick(const std::string& name);

  std::size_t edge_count() const { return names_.size(); }
  std::size_t vertex_count() const { return vertices_.size(); }

  const std::string& name(EdgeId e) const { return names_.at(e); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<EdgeId> find(std::string_view name) const;
  /// Like find() but throws TreeError for unknown names.
  EdgeId id(std::string_view name) const;

  EdgeId root() const { return 0; }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const Vertex& vertex(int v) const { return vertices_.at(v); }

  /// Vertex whose out-edge is e, or -1 when e is a leaf.
  int vertex_above(EdgeId e) const { return above_.at(e); }
  /// Vertex having e among its inputs, or -1 for the root.
  int vertex_below(EdgeId e) const { return below_.at(e); }

  bool is_stick() const { return vertices_.empty(); }
  bool is_corolla() const { return vertices_.size() == 1; }
  bool is_leaf(EdgeId e) const { return above_.at(e) < 0; }
  bool is_inner(EdgeId e) const { return e != root() && !is_leaf(e); }

  /// Leaves in planar order.
  std::vector<EdgeId> leaves() const;
  /// Inner edges in edge-id order.
  std::vector<EdgeId> inner_edges() const;
  std::vector<std::string> leaf_names() const;

  /// True when `above` lies weakly above `below` (above <=_d below).
  bool is_above(EdgeId above, EdgeId below) const;

  /// Same tree with edges renamed by `rename(old_name)`.
  template <class F>
  Tree renamed(F&& rename) const {
    Tree t = *this;
    for (auto& n : t.names_) n = rename(n);
    t.check_unique_names();
    return t;
  }

  /// Structure-only key: equal for trees of the same planar shape.
  std::string shape_key() const;

  friend bool operator==(const Tree& a, const Tree& b) {
    return a.names_ == b.names_ && a.vertices_ == b.vertices_;
  }
  friend bool operator<(const Tree& a, const Tree& b) {
    if (a.vertices_ != b.vertices_) return a.vertices_ < b.vertices_;
    return a.names_ < b.names_;
  }

 private:
  Tree() = default;
  void index();
  void check_unique_names() const;

  std::vector<std::string> names_;
  std::vector<Vertex> vertices_;
  std::vector<int> above_;
  std::vector<int> below_;
};

/// Parses the tree DSL: tree := ident | ident "(" [tree {"," tree}] ")".
Tree parse_tree(std::string_view text);

/// Prints a tree in the DSL, children in stored planar order.
std::string print_tree(const Tree& t);

/// Broad relation test: is there an outer subtree rooted at `rhs` whose leaf
/// tuple is `lhs`? With planar=true the order must match, otherwise `lhs` is
/// compared as a multiset.
bool broad_leq(const std::vector<EdgeId>& lhs, EdgeId rhs, const Tree& t,
               bool planar);
bool broad_leq(const std::vector<std::string>& lhs, const std::string& rhs,
               const Tree& t, bool planar);

/// Leaf tuple (planar order) of the outer subtree rooted at `root` whose leaf
/// set is `cut`, or nullopt when no such outer subtree exists.
std::optional<std::vector<EdgeId>> outer_subtree_leaves(
    const Tree& t, EdgeId root, const std::vector<EdgeId>& cut);

/// Result of canonical_form: the renamed tree and the renaming old -> new.
struct CanonicalTree {
  Tree tree;
  std::vector<std::string> renaming;  // indexed by old EdgeId
};

/// Replaces edge names by their planar depth-first index ("0", "1", ...).
CanonicalTree canonical_form(const Tree& t);

/// All planar tree shapes with between 1 and max_edges edges, edges named by
/// their depth-first index. Deterministic order (by size, then shape).
std::vector<Tree> enumerate_trees(std::size_t max_edges);
/// Shapes with exactly `edges` edges.
std::vector<Tree> enumerate_trees_exact(std::size_t edges);

/// The outer subtree rooted at `root` with leaf set `cut`, names inherited.
Tree outer_subtree(const Tree& t, EdgeId root, const std::vector<EdgeId>& cut);

/// Contracts the given inner edges. Throws when an edge is not inner.
Tree contract(const Tree& t, const std::vector<EdgeId>& inner);

/// Planar inner face keeping exactly the inner edges `kept`.
Tree inner_face(const Tree& t, const std::vector<EdgeId>& kept);

/// All planar outer faces of t (including the stick faces), deterministic.
std::vector<Tree> outer_faces(const Tree& t);

/// All re-planarizations of t: every choice of child order at every vertex.
/// The first entry is t itself.
std::vector<Tree> replanarizations(const Tree& t, std::size_t limit = 0);

/// Grafts `upper` onto the leaf `at` of `lower`; `at` must be the root of
/// `upper` and no other names may be shared.
Tree graft(const Tree& lower, const Tree& upper, const std::string& at);

/// Vertex records of t, in vertex order.
std::vector<VertexRecord> records(const Tree& t);

/// Default enumeration bound, honoring DENDRON_MAX_EDGES.
std::size_t default_max_edges();

}  // namespace dendron
