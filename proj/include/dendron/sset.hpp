#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dendron/json_io.hpp"

namespace dendron {

/// A simplex given as sigma^* y: a monotone surjection sigma: [n] -> [m],
/// stored as its values, applied to a non-degenerate m-cell y.
struct Simplex {
  std::vector<int> sigma;
  int dim = 0;   // dimension m of the cell
  int cell = 0;  // index among the cells of dimension m

  int simplex_dim() const { return static_cast<int>(sigma.size()) - 1; }
  bool degenerate() const { return simplex_dim() != dim; }
  bool operator==(const Simplex& o) const {
    return sigma == o.sigma && dim == o.dim && cell == o.cell;
  }
  bool operator<(const Simplex& o) const {
    if (dim != o.dim) return dim < o.dim;
    if (cell != o.cell) return cell < o.cell;
    return sigma < o.sigma;
  }
};

/// Identity surjection on [n].
std::vector<int> identity_sigma(int n);
/// Indices j with sigma(j) = sigma(j+1).
std::vector<int> degeneracy_word(const std::vector<int>& sigma);
std::vector<int> sigma_from_word(int n, const std::vector<int>& word);

/// A finite simplicial set stored by its non-degenerate cells. Each cell of
/// dimension n > 0 records its n+1 faces.
class SimplicialSet {
 public:
  int add_cell(int dim, std::vector<Simplex> faces, std::string label = "");

  int dimension() const { return static_cast<int>(cells_.size()) - 1; }
  std::size_t cell_count(int dim) const;
  /// Non-degenerate cell counts by dimension.
  std::vector<std::size_t> cell_vector() const;
  const std::vector<Simplex>& faces(int dim, int cell) const;
  const std::string& label(int dim, int cell) const;

  Simplex cell(int dim, int index) const;
  /// d_i of any simplex.
  Simplex face(const Simplex& x, int i) const;
  /// s_i of any simplex.
  Simplex degeneracy(const Simplex& x, int i) const;
  /// Every d_i d_j = d_{j-1} d_i on non-degenerate cells. Returns the first
  /// violation as text.
  std::optional<std::string> check_identities() const;

  /// Stable cell ids: cells numbered by dimension, then index.
  int global_id(int dim, int cell) const;

 private:
  struct Cell {
    std::vector<Simplex> faces;
    std::string label;
  };
  std::vector<std::vector<Cell>> cells_;
};

struct Poset {
  std::vector<std::string> labels;
  std::vector<std::vector<char>> leq;  // leq[a][b]: a <= b
  std::size_t size() const { return labels.size(); }
};

Poset boolean_lattice(std::size_t k);
/// Linear order 0 < 1 < ... < n-1.
Poset chain_poset(std::size_t n);

/// Non-degenerate k-cells are the strict chains of length k+1.
SimplicialSet nerve_of_poset(const Poset& p);
/// Nerve of the Boolean lattice on k elements.
SimplicialSet cube(std::size_t k);
/// Subcomplex of cube(b + e) of the chains constant on some boundary axis
/// (the first b) or containing some endpoint axis (the last e) throughout.
SimplicialSet pushout_product_domain(std::size_t boundary_axes,
                                     std::size_t endpoint_axes);

struct IsoWitness {
  std::vector<std::vector<int>> map;  // per dimension: cell of a -> cell of b
};
std::optional<IsoWitness> iso_check(const SimplicialSet& a,
                                    const SimplicialSet& b);

Json sset_to_json(const SimplicialSet& s);
std::string sset_to_dot(const SimplicialSet& s);

}  // namespace dendron
