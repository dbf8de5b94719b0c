#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dendron/tree.hpp"
#include "dendron/tree_map.hpp"

namespace oracle {

using namespace dendron;

/// Counts factor chains S -> S_p -> U -> V -> T (iso, planar degeneracy,
/// planar inner face, planar outer face) through all planar intermediate
/// trees, by exhaustive search.
class FactorizationOracle {
 public:
  struct Result {
    int chains = 0;
    bool matches = false;  // the unique chain is the given factorization
  };
  Result check(const TreeMap& m, const Factorization& f);

 private:
  struct Target {
    std::vector<Tree> outer;                 // planar outer faces V
    std::vector<unsigned> outer_mask;        // edges of V as target ids
    std::vector<std::vector<Tree>> inner;    // inner faces of V by mask
    std::vector<std::vector<unsigned>> inner_mask;
  };
  struct Source {
    // planar shapes P of S up to canonical form, with all isos S -> P
    std::vector<std::pair<Tree, std::vector<TreeMap>>> shapes;
  };
  const Target& target(const Tree& t);
  const Source& source(const Tree& s);
  const Target& target_uncached(const Tree& t);
  const Source& source_uncached(const Tree& s);

  std::map<std::string, Target> targets_;
  std::map<std::string, Source> sources_;
  std::optional<std::pair<Tree, const Target*>> last_target_;
  std::optional<std::pair<Tree, const Source*>> last_source_;
};

/// Number of tall maps S -> T, counted through the decomposition of S into
/// pieces sitting over the vertices of T.
long tall_count_by_vertices(const Tree& s, const Tree& t);

}  // namespace oracle
