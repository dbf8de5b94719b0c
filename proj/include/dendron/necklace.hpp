#pragma once

#include <string>
#include <vector>

#include "dendron/dendroidal_set.hpp"
#include "dendron/json_io.hpp"
#include "dendron/tree.hpp"
#include "dendron/tree_map.hpp"

namespace dendron {

/// A necklace J -> T, stored as its carrier T and the joints: the inner
/// edges of T that stay inner in J.
class Necklace {
 public:
  Necklace(Tree carrier, std::vector<EdgeId> joints);

  const Tree& carrier() const { return carrier_; }
  const std::vector<EdgeId>& joints() const { return joints_; }
  bool is_joint(EdgeId e) const;
  std::vector<std::string> joint_names() const;
  /// J, carrying the names of the carrier.
  const Tree& joint_tree() const { return joint_tree_; }
  /// Beads in the planar order of J's vertices. The stick has none.
  const std::vector<Tree>& beads() const { return beads_; }
  std::size_t bead_count() const { return beads_.size(); }
  /// Beads, or the stick itself for the stick necklace. Bead families are
  /// indexed by these.
  const std::vector<Tree>& pieces() const {
    return beads_.empty() ? stick_ : beads_;
  }
  TreeMap piece_inclusion(std::size_t b) const;
  TreeMap joint_inclusion() const;
  /// Bead holding vertex v of the carrier.
  std::size_t bead_of_vertex(int v) const { return vertex_bead_.at(v); }

  /// Does the map s -> T given by `a` lie in Omega[n]?
  bool contains(const Tree& s, const std::vector<EdgeId>& a) const;
  bool contains(const TreeMap& m) const {
    return contains(m.source, m.assignment);
  }

  bool operator==(const Necklace& o) const {
    return carrier_ == o.carrier_ && joints_ == o.joints_;
  }

 private:
  Tree carrier_;
  std::vector<EdgeId> joints_;
  std::vector<char> joint_mask_;
  Tree joint_tree_;
  std::vector<Tree> beads_;
  std::vector<Tree> stick_;
  std::vector<std::size_t> vertex_bead_;
};

Necklace make_necklace(const Tree& t, const std::vector<EdgeId>& joints);
Necklace make_necklace(const Tree& t, const std::vector<std::string>& joints);
/// J = T, so Omega[n] = Sc[T].
Necklace segal_core_necklace(const Tree& t);
/// J = lr(T), so Omega[n] = Omega[T].
Necklace whole_necklace(const Tree& t);
/// Every necklace on t, ordered by joint subset.
std::vector<Necklace> necklaces_on(const Tree& t);

/// Is the face u (named by carrier edges) in Omega[n]?
bool face_in_necklace(const Necklace& n, const Tree& u);

/// Restriction to an outer face f (named by carrier edges).
Necklace restrict_necklace(const Necklace& n, const Tree& f);

/// Joint-containment criterion for phi to induce Omega[n] -> Omega[n'].
bool necklace_map_check(const Necklace& n, const Necklace& target,
                        const TreeMap& phi);
/// Same question, answered bead by bead.
bool necklace_map_direct(const Necklace& n, const Necklace& target,
                         const TreeMap& phi);

struct NecklaceMap {
  Necklace source;
  Necklace target;
  TreeMap carrier_map;
};

NecklaceMap make_necklace_map(const Necklace& n, const Necklace& target,
                              const TreeMap& phi);
NecklaceMap identity_necklace_map(const Necklace& n);
NecklaceMap compose(const NecklaceMap& g, const NecklaceMap& f);

/// Index of a target piece receiving source piece b, or npos.
std::size_t receiving_piece(const NecklaceMap& m, std::size_t b);
/// Bead map of a necklace map with face carrier. Throws if some bead has
/// no receiving bead or more than one.
std::vector<std::size_t> bead_pushforward(const NecklaceMap& m);

/// Omega[n] as a subpresheaf of Omega[T].
class NecklaceSet : public Representable {
 public:
  explicit NecklaceSet(Necklace n);
  std::string describe() const override;
  bool contains(const Tree& s, const std::vector<EdgeId>& a) const override;
  const Necklace& necklace() const { return necklace_; }

 private:
  Necklace necklace_;
};

/// A map Omega[n] -> X: one dendrex per piece.
using BeadFamily = std::vector<Dendrex>;

/// All maps Omega[n] -> X, as bead families agreeing on joints.
std::vector<BeadFamily> necklace_dendrices(const Necklace& n,
                                           const DendroidalSet& x);
bool is_compatible_family(const Necklace& n, const DendroidalSet& x,
                          const BeadFamily& f);
/// f . m for a family over m.target.
BeadFamily pull_family(const DendroidalSet& x, const NecklaceMap& m,
                       const BeadFamily& f);
/// The dendrex over an arbitrary s -> T in Omega[n].
Dendrex evaluate_family(const Necklace& n, const DendroidalSet& x,
                        const BeadFamily& f, const TreeMap& m);

bool is_totally_nondegenerate(const Necklace& n, const DendroidalSet& x,
                              const BeadFamily& f);

struct TndFactorization {
  NecklaceMap degeneracy;  // n -> reduced necklace
  BeadFamily family;       // totally non-degenerate, over degeneracy.target
};

/// f = g . sigma with sigma a necklace degeneracy and g totally
/// non-degenerate.
TndFactorization tnd_factorize(const Necklace& n, const DendroidalSet& x,
                               const BeadFamily& f);

Json necklace_to_json(const Necklace& n);
Necklace necklace_from_json(const Json& j);

}  // namespace dendron
