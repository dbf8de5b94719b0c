#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "dendron/tree.hpp"
#include "dendron/tree_map.hpp"

namespace dendron {

/// Opaque dendrex token. Tokens are only meaningful together with the shape
/// of the tree they live over; the same token never denotes two dendrices of
/// one shape.
using Dendrex = std::vector<int>;

/// A finite presheaf on trees. Dendrex sets depend only on the planar shape
/// of the tree asked for, never on its edge names.
class DendroidalSet {
 public:
  virtual ~DendroidalSet() = default;

  virtual std::string describe() const = 0;
  /// X(S), sorted.
  virtual std::vector<Dendrex> dendrices(const Tree& s) const = 0;
  /// x . f for x in X(f.target).
  virtual Dendrex restrict(const Dendrex& x, const TreeMap& f) const = 0;
  /// No non-degenerate dendrex lives over a tree with more edges.
  virtual std::size_t max_nondegenerate_edges() const = 0;

  /// X(eta).
  std::vector<Dendrex> colors() const;
  /// Color of edge e of a dendrex over s.
  Dendrex color(const Dendrex& x, const Tree& s, EdgeId e) const;
  std::vector<Dendrex> edge_colors(const Dendrex& x, const Tree& s) const;
};

/// The representable Omega[U] and its subpresheaves cut out by a predicate on
/// the image of a map S -> U.
class Representable : public DendroidalSet {
 public:
  explicit Representable(Tree u);

  std::string describe() const override;
  std::vector<Dendrex> dendrices(const Tree& s) const override;
  Dendrex restrict(const Dendrex& x, const TreeMap& f) const override;
  std::size_t max_nondegenerate_edges() const override {
    return base_.edge_count();
  }

  const Tree& base() const { return base_; }
  /// Membership of the map s -> U given by the assignment.
  virtual bool contains(const Tree& s, const std::vector<EdgeId>& a) const;

 protected:
  Tree base_;

 private:
  mutable std::mutex mutex_;
  mutable std::map<std::string, std::vector<Dendrex>> cache_;
};

/// Union of the proper faces of U.
class Boundary : public Representable {
 public:
  explicit Boundary(Tree u) : Representable(std::move(u)) {}
  std::string describe() const override;
  bool contains(const Tree& s, const std::vector<EdgeId>& a) const override;
};

/// Inner horn: union of the faces of U not containing U - E.
class Horn : public Representable {
 public:
  Horn(Tree u, std::vector<EdgeId> e);
  std::string describe() const override;
  bool contains(const Tree& s, const std::vector<EdgeId>& a) const override;
  const std::vector<EdgeId>& edges() const { return edges_; }

 private:
  std::vector<EdgeId> edges_;
};

/// Segal core: union of the edges and vertices of U.
class SegalCore : public Representable {
 public:
  explicit SegalCore(Tree u) : Representable(std::move(u)) {}
  std::string describe() const override;
  bool contains(const Tree& s, const std::vector<EdgeId>& a) const override;
};

/// A finite colimit of representables: generators and maps between them.
class ColimitPresentation : public DendroidalSet {
 public:
  struct Relation {
    std::size_t from;
    std::size_t to;
    TreeMap map;  // generators[from] -> generators[to]
  };
  ColimitPresentation(std::vector<Tree> generators,
                      std::vector<Relation> relations);

  std::string describe() const override;
  std::vector<Dendrex> dendrices(const Tree& s) const override;
  Dendrex restrict(const Dendrex& x, const TreeMap& f) const override;
  std::size_t max_nondegenerate_edges() const override;

  const std::vector<Tree>& generators() const { return generators_; }
  const std::vector<Relation>& relations() const { return relations_; }

 private:
  struct Level {
    std::map<Dendrex, Dendrex> rep;
    std::vector<Dendrex> classes;
  };
  const Level& level(const Tree& s) const;

  std::vector<Tree> generators_;
  std::vector<Relation> relations_;
  mutable std::mutex mutex_;
  mutable std::map<std::string, std::unique_ptr<Level>> cache_;
};

/// Colored tree: a tree with one color (a dendrex over the stick) per edge.
struct Coloring {
  Tree tree;
  std::vector<Dendrex> colors;  // indexed by EdgeId
};

/// X_c(T): the dendrices over c.tree whose edge colors are c.colors.
std::vector<Dendrex> fiber(const DendroidalSet& x, const Coloring& c);

struct SegalWitness {
  Tree tree;
  std::vector<Dendrex> coloring;
  std::size_t fiber = 0;
  std::size_t families = 0;
  bool injective = true;
};

struct SegalReport {
  bool pass = true;
  std::size_t trees_checked = 0;
  std::vector<SegalWitness> failures;  // first one only unless asked for all
};

/// Strict Segal condition on all tree shapes with at most `bound` edges.
SegalReport segal_check(const DendroidalSet& x, std::size_t bound,
                        bool all_failures = false);
/// Segal condition at a single tree.
std::vector<SegalWitness> segal_check_at(const DendroidalSet& x,
                                         const Tree& t);

struct EzForm {
  TreeMap degeneracy;  // s -> tree
  Dendrex y;           // non-degenerate, over degeneracy.target
};

/// x = y . sigma with y non-degenerate.
EzForm ez_normal_form(const DendroidalSet& x, const Tree& s, const Dendrex& d);
bool is_degenerate(const DendroidalSet& x, const Tree& s, const Dendrex& d);

}  // namespace dendron
