#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dendron/dendroidal_set.hpp"
#include "dendron/necklace.hpp"
#include "dendron/nw.hpp"
#include "dendron/sset.hpp"

namespace dendron {

/// A simplex of W_!(X)(S): a necklace J -> T, a tall map phi: S -> T with
/// phi S inside J, a map x: Omega[n] -> X and a chain J <= J_0 <= ... <= J_n
/// of inner faces of T. Each J_k is stored as its inner edges (carrier ids,
/// sorted).
struct WQuadruple {
  Necklace necklace;
  TreeMap phi;
  BeadFamily x;
  std::vector<std::vector<EdgeId>> chain;

  int level() const { return static_cast<int>(chain.size()) - 1; }
  const Tree& source() const { return phi.source; }
  const Tree& carrier() const { return necklace.carrier(); }
  Tree chain_tree(std::size_t k) const;

  bool operator==(const WQuadruple& o) const;
  bool operator<(const WQuadruple& o) const;
};

std::optional<std::string> check_quadruple(const WQuadruple& q,
                                           const DendroidalSet& x);
bool is_flanked(const WQuadruple& q);

/// A generating equivalence: `map` sends from.necklace to to.necklace with
/// to.phi = map . from.phi, from.x = to.x . map and to.chain the image of
/// from.chain.
struct WMove {
  WQuadruple from;
  WQuadruple to;
  NecklaceMap map;
};
std::optional<std::string> check_move(const WMove& m, const DendroidalSet& x);

/// Inner edges of the image of the inner face `inner` of m.source.
std::vector<EdgeId> push_inner_face(const TreeMap& m,
                                    const std::vector<EdgeId>& inner);

/// The flanked quadruple on (J_0 -> J_n), mapping to q.
WMove flank(const WQuadruple& q, const DendroidalSet& x);
/// q -> its totally non-degenerate reduction.
WMove reduce(const WQuadruple& q, const DendroidalSet& x);
/// q -> the least transport of q along re-planarizations of the carrier,
/// edges renamed to depth-first indices.
WMove canonical_planar(const WQuadruple& q, const DendroidalSet& x);
/// Transport along an isomorphism of the carrier.
WMove transport(const WQuadruple& q, const TreeMap& iso, const DendroidalSet& x);

WQuadruple normalize_quadruple(const WQuadruple& q, const DendroidalSet& x);
bool is_normal(const WQuadruple& q, const DendroidalSet& x);

/// Zigzag of moves joining a and b, found by breadth-first search over
/// flanking, reduction and re-planarization moves in both directions.
/// Each step records which end of the move comes first.
struct ZigzagStep {
  WMove move;
  bool forward;  // true: walk from move.from to move.to
};
std::optional<std::vector<ZigzagStep>> find_zigzag(const WQuadruple& a,
                                                   const WQuadruple& b,
                                                   const DendroidalSet& x,
                                                   std::size_t max_steps = 8);

/// Normal forms of level n over s whose edge colors are `coloring` (indexed
/// by the edges of s). Carriers have at most `bound` edges; 0 picks a bound
/// that is exact for subpresheaves of representables.
std::vector<WQuadruple> wx_simplices(const DendroidalSet& x, const Tree& s,
                                     const std::vector<Dendrex>& coloring,
                                     int n, std::size_t bound = 0);

/// The image of a string S -> ... -> U as a quadruple for Omega[U].
WQuadruple string_quadruple(const NWString& s);

/// The corolla with root "0" and leaves "1", ..., "n".
Tree corolla(std::size_t n);

struct Signature {
  std::vector<Dendrex> leaves;
  Dendrex root;
};
/// Parses "a,b;r" against edge names of u, giving colors of Omega[u].
Signature parse_signature(const std::string& text, const Tree& u);

struct MappingSpace {
  SimplicialSet space;
  std::vector<std::vector<WQuadruple>> cells;  // by dimension
};
MappingSpace mapping_space(const DendroidalSet& x, const Signature& sig,
                           std::size_t bound = 0);
/// All non-empty mapping spaces over corollas with `leaves` leaves, keyed by
/// {root, leaves...}.
std::map<std::vector<Dendrex>, MappingSpace> mapping_spaces(const DendroidalSet& x,
                                                            std::size_t leaves,
                                                            std::size_t bound = 0);

enum class ClosedKind { representable, boundary, horn };
ClosedKind parse_closed_kind(const std::string& s);
/// Closed form for Omega[u], its boundary or the horn on `e` at the
/// signature given by edges of u.
SimplicialSet closed_form_mapping_space(ClosedKind kind, const Tree& u,
                                        const std::vector<EdgeId>& e,
                                        const std::vector<EdgeId>& leaves,
                                        EdgeId root);

/// Data C -> T <- Omega[n] -> X: a tall map from a corolla and a family.
struct TauTriple {
  Necklace necklace;
  TreeMap t;
  BeadFamily x;
  bool operator<(const TauTriple& o) const;
  bool operator==(const TauTriple& o) const;
};
struct TauReport {
  std::vector<TauTriple> triples;  // one per isomorphism class
  std::vector<std::size_t> class_of;
  std::size_t classes = 0;
  std::size_t bound = 0;
  bool exact = false;  // false: bounded approximation
};
/// automatic: subpresheaves of representables go through edge colorings and
/// a sorted-children key; generic: every replanarization is materialized.
enum class TauEngine { automatic, generic };
TauReport tau_operations(const DendroidalSet& x, const Signature& sig,
                         std::size_t bound, TauEngine engine = TauEngine::automatic);
/// All signatures with corollas of at most max_leaves leaves at once:
/// signature -> class count.
std::map<std::vector<Dendrex>, std::size_t> tau_class_counts(
    const DendroidalSet& x, std::size_t max_leaves, std::size_t bound,
    TauEngine engine = TauEngine::automatic);

}  // namespace dendron
