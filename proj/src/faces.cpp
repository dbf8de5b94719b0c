#include "dendron/faces.hpp"

#include <algorithm>

namespace dendron {

FaceKind parse_face_kind(const std::string& s) {
  if (s == "all") return FaceKind::all;
  if (s == "inner") return FaceKind::inner;
  if (s == "outer") return FaceKind::outer;
  if (s == "segal_core" || s == "sc") return FaceKind::segal_core;
  throw TreeError("unknown face kind '" + s + "'");
}

std::string to_string(FaceKind k) {
  switch (k) {
    case FaceKind::all: return "all";
    case FaceKind::inner: return "inner";
    case FaceKind::outer: return "outer";
    case FaceKind::segal_core: return "segal_core";
  }
  return "all";
}

std::vector<Face> enumerate_faces(const Tree& t, FaceKind kind) {
  std::vector<Tree> trees;
  switch (kind) {
    case FaceKind::inner: {
      InnerFaceLattice lat(t);
      for (std::size_t i = 0; i < lat.size(); ++i) trees.push_back(lat.face(i));
      break;
    }
    case FaceKind::outer:
      trees = outer_faces(t);
      break;
    case FaceKind::segal_core:
      for (const Tree& f : outer_faces(t))
        if (f.inner_edges().empty() && f.vertex_count() <= 1) trees.push_back(f);
      break;
    case FaceKind::all:
      for (const Tree& v : outer_faces(t)) {
        InnerFaceLattice lat(v);
        for (std::size_t i = 0; i < lat.size(); ++i)
          trees.push_back(lat.face(i));
      }
      break;
  }
  std::vector<Face> out;
  for (Tree& f : trees) {
    TreeMap inc = name_map(f, t);
    out.push_back(Face{std::move(f), std::move(inc)});
  }
  return out;
}

bool face_leq(const Tree& a, const Tree& b) {
  std::vector<EdgeId> assign;
  for (const auto& n : a.names()) {
    auto e = b.find(n);
    if (!e) return false;
    assign.push_back(*e);
  }
  return is_valid_assignment(a, b, assign);
}

std::vector<char> closure_mask(const Tree& t, EdgeId root,
                               const std::vector<EdgeId>& leaves) {
  std::vector<char> stop(t.edge_count(), 0), in(t.edge_count(), 0);
  for (EdgeId l : leaves) stop[l] = 1;
  std::vector<EdgeId> stack{root};
  while (!stack.empty()) {
    EdgeId e = stack.back();
    stack.pop_back();
    in[e] = 1;
    if (stop[e]) continue;
    int v = t.vertex_above(e);
    if (v < 0) continue;
    for (EdgeId i : t.vertex(v).inputs) stack.push_back(i);
  }
  return in;
}

std::vector<EdgeId> closure_inner_edges(const TreeMap& m) {
  std::vector<EdgeId> leaves;
  for (EdgeId l : m.source.leaves()) leaves.push_back(m(l));
  EdgeId root = m(m.source.root());
  auto in = closure_mask(m.target, root, leaves);
  std::vector<char> is_leaf(m.target.edge_count(), 0);
  for (EdgeId l : leaves) is_leaf[l] = 1;
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < static_cast<EdgeId>(m.target.edge_count()); ++e)
    if (in[e] && e != root && !is_leaf[e]) out.push_back(e);
  return out;
}

InnerFaceLattice::InnerFaceLattice(const Tree& t) : inner_(t.inner_edges()) {
  for (std::size_t a = 0; a < (std::size_t{1} << inner_.size()); ++a) {
    std::vector<EdgeId> kept;
    for (std::size_t i = 0; i < inner_.size(); ++i)
      if (a >> i & 1u) kept.push_back(inner_[i]);
    faces_.push_back(inner_face(t, kept));
  }
}

std::size_t InnerFaceLattice::index_of(const std::vector<EdgeId>& kept) const {
  std::size_t a = 0;
  for (EdgeId e : kept) {
    auto it = std::find(inner_.begin(), inner_.end(), e);
    if (it == inner_.end()) throw TreeError("not an inner edge");
    a |= std::size_t{1} << (it - inner_.begin());
  }
  return a;
}

}  // namespace dendron
