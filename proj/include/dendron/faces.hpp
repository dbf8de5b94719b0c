#pragma once

#include <string>
#include <vector>

#include "dendron/tree.hpp"
#include "dendron/tree_map.hpp"

namespace dendron {

enum class FaceKind { all, inner, outer, segal_core };

FaceKind parse_face_kind(const std::string& s);
std::string to_string(FaceKind k);

/// A planar face of a tree: a tree carrying the base tree's edge names,
/// together with its planar face map into the base.
struct Face {
  Tree tree;
  TreeMap inclusion;
};

std::vector<Face> enumerate_faces(const Tree& t, FaceKind kind);

/// Is `a` a face of `b`? Both carry edge names of a common tree.
bool face_leq(const Tree& a, const Tree& b);

/// Edges of the outer closure of the face, as a mask over t's edges.
std::vector<char> closure_mask(const Tree& t, EdgeId root,
                               const std::vector<EdgeId>& leaves);

/// Inner edges of the outer closure of a map's image.
std::vector<EdgeId> closure_inner_edges(const TreeMap& m);

/// Inner-face lattice of t: faces indexed by subsets of inner edges (bit i
/// of the index is the i-th inner edge of t).
class InnerFaceLattice {
 public:
  explicit InnerFaceLattice(const Tree& t);
  std::size_t size() const { return faces_.size(); }
  const Tree& face(std::size_t index) const { return faces_.at(index); }
  std::size_t join(std::size_t a, std::size_t b) const { return a | b; }
  std::size_t meet(std::size_t a, std::size_t b) const { return a & b; }
  bool leq(std::size_t a, std::size_t b) const { return (a & ~b) == 0; }
  const std::vector<EdgeId>& inner_edges() const { return inner_; }
  std::size_t index_of(const std::vector<EdgeId>& kept) const;

 private:
  std::vector<EdgeId> inner_;
  std::vector<Tree> faces_;
};

}  // namespace dendron
