#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "dendron/dendroidal_set.hpp"
#include "dendron/necklace.hpp"
#include "dendron/tree.hpp"
#include "dendron/tree_map.hpp"

namespace dendron {

/// A string S -> J_0 -> ... -> J_n -> T: a tall map into J_0, planar inner
/// faces J_k -> J_{k+1} and a planar face J_n -> T. The J_k carry the edge
/// names of T.
struct NWString {
  Tree source;
  Tree target;
  std::vector<Tree> chain;
  TreeMap head;  // source -> chain[0]

  int level() const { return static_cast<int>(chain.size()) - 1; }
  /// source -> target.
  TreeMap composite() const;
  /// Outer closure of J_n in the target.
  Tree closure() const;

  bool operator==(const NWString& o) const {
    return source == o.source && target == o.target && chain == o.chain &&
           head.assignment == o.head.assignment;
  }
};

/// Checks every condition on the string; returns the first failure.
std::optional<std::string> check_string(const NWString& s);

/// NW(T)_n(S).
std::vector<NWString> nw_simplices(const Tree& t, const Tree& s, int n);
/// NW(n)_n(S): strings with J_0 containing J_F for F the closure.
std::vector<NWString> nw_simplices(const Necklace& nk, const Tree& s, int n);
bool in_necklace(const Necklace& nk, const NWString& s);

NWString nw_face(const NWString& s, int k);
NWString nw_degeneracy(const NWString& s, int k);
/// Restriction along psi: S* -> S.
NWString nw_pullback(const NWString& s, const TreeMap& psi);
/// Pushforward along phi: T -> T'.
NWString nw_pushforward(const NWString& s, const TreeMap& phi);

/// J^phi: the join of phi S and J_F in the inner faces of F, the outer
/// closure of phi.
Tree j_phi(const Necklace& nk, const TreeMap& phi);

/// NW(n) at a fixed simplicial level, as a dendroidal set.
class NWSet : public DendroidalSet {
 public:
  NWSet(Necklace nk, int level);

  std::string describe() const override;
  std::vector<Dendrex> dendrices(const Tree& s) const override;
  Dendrex restrict(const Dendrex& x, const TreeMap& f) const override;
  std::size_t max_nondegenerate_edges() const override;

  Dendrex encode(const NWString& s) const;
  NWString decode(const Tree& s, const Dendrex& x) const;
  const Necklace& necklace() const { return necklace_; }
  int level() const { return level_; }

 private:
  Necklace necklace_;
  int level_;
  std::vector<Tree> faces_;
  std::map<std::string, int> face_index_;
  mutable std::mutex mutex_;
  mutable std::map<std::string, std::vector<Dendrex>> cache_;

  // faces as edge masks of the carrier, when it has at most 64 edges
  bool fast_ = false;
  std::vector<std::uint64_t> mask_, leaf_mask_, required_;
  std::vector<std::vector<EdgeId>> to_carrier_, to_local_, inner_;
  std::vector<std::uint64_t> above_eq_;
  std::map<std::pair<std::uint64_t, std::uint64_t>, int> by_mask_;
  int face_of(std::uint64_t mask, std::uint64_t leaves) const;
};

}  // namespace dendron
