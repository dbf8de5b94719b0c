#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dendron/tree.hpp"

namespace dendron {

/// A map of trees, given by its edge function. Assignment is indexed by the
/// source EdgeId and holds target EdgeIds.
struct TreeMap {
  Tree source;
  Tree target;
  std::vector<EdgeId> assignment;

  EdgeId operator()(EdgeId e) const { return assignment.at(e); }
  /// Image of a source edge name, as a target edge name.
  const std::string& image(const std::string& name) const {
    return target.name(assignment.at(source.id(name)));
  }
  std::map<std::string, std::string> by_name() const;

  friend bool operator==(const TreeMap& a, const TreeMap& b) {
    return a.assignment == b.assignment && a.source == b.source &&
           a.target == b.target;
  }
};

class RelationViolation : public TreeError {
 public:
  RelationViolation(std::string relation, const std::string& message)
      : TreeError(message), relation_(std::move(relation)) {}
  /// The failing generating relation, e.g. "ab <= c".
  const std::string& relation() const { return relation_; }

 private:
  std::string relation_;
};

struct MapClass {
  bool tall = false;
  bool face = false;
  bool inner_face = false;
  bool outer_face = false;
  bool degeneracy = false;
  bool planar = false;
  bool convex = false;
  bool iso = false;

  /// True when every flag set in `required` is also set here.
  bool satisfies(const MapClass& required) const;
  friend bool operator==(const MapClass&, const MapClass&) = default;
};

struct Factorization {
  TreeMap iso;  // S -> S_p
  TreeMap pd;   // S_p -> phi S
  TreeMap pi;   // phi S -> closure
  TreeMap po;   // closure -> T

  const Tree& planarized() const { return iso.target; }
  const Tree& image() const { return pd.target; }
  const Tree& closure() const { return pi.target; }
};

/// Checks all generating relations; throws RelationViolation on failure.
TreeMap validate_map(const Tree& source, const Tree& target,
                     const std::map<std::string, std::string>& assignment);
TreeMap validate_map(const Tree& source, const Tree& target,
                     std::vector<EdgeId> assignment);
bool is_valid_assignment(const Tree& source, const Tree& target,
                         const std::vector<EdgeId>& assignment);

TreeMap identity_map(const Tree& t);
/// Identity up to edge names: equal planar shapes and the planar identity.
bool is_identity(const TreeMap& m);
/// The map between trees sharing edge names, sending each edge to the edge of
/// the same name. Throws when the result is not a map.
TreeMap name_map(const Tree& source, const Tree& target);

MapClass classify_map(const TreeMap& m);
bool is_tall(const TreeMap& m);
bool is_face(const TreeMap& m);
bool is_degeneracy(const TreeMap& m);
bool is_convex(const TreeMap& m);
bool is_planar(const TreeMap& m);

/// g after f.
TreeMap compose(const TreeMap& g, const TreeMap& f);

Factorization factorize(const TreeMap& m);
/// Outer closure of the image: the outer face of the target rooted at the
/// image of the root with the images of the leaves as leaves.
Tree image_closure(const TreeMap& m);
/// Image tree phi S, with target names.
Tree image_tree(const TreeMap& m);

/// Leaf-root corolla of t and the planar tall map into t. lr(stick) = stick.
TreeMap leaf_root(const Tree& t);

/// All maps by exhaustive search over edge functions.
std::vector<TreeMap> enumerate_maps(const Tree& source, const Tree& target,
                                    const MapClass& required = {});

/// All maps, enumerated vertex by vertex. Same set as enumerate_maps.
std::vector<std::vector<EdgeId>> map_assignments(const Tree& source,
                                                 const Tree& target,
                                                 bool tall_only = false);
std::vector<TreeMap> maps_between(const Tree& source, const Tree& target);
std::vector<TreeMap> tall_maps(const Tree& source, const Tree& target);
/// All isomorphisms source -> target.
std::vector<TreeMap> isomorphisms(const Tree& source, const Tree& target);

/// Collapse of the unary vertex v: the input edge of v is merged into its
/// output edge, which keeps its name.
struct UnaryCollapse {
  Tree collapsed;
  TreeMap sigma;  // degeneracy t -> collapsed
  TreeMap delta;  // face collapsed -> t, a section of sigma
};
UnaryCollapse collapse_unary(const Tree& t, int v);
std::vector<int> unary_vertices(const Tree& t);

/// Human readable, e.g. "r->r a->b b->a".
std::string describe(const TreeMap& m);

}  // namespace dendron
