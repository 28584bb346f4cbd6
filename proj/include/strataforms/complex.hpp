#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "strataforms/cells.hpp"
#include "strataforms/linalg.hpp"

namespace strataforms {

// Oriented simplex: the vertex order is the orientation; permuting the order
// multiplies by the permutation sign.
struct Simplex {
  std::vector<int> vertices;

  int dim() const { return static_cast<int>(vertices.size()) - 1; }
  // (sorted-vertex simplex, sign of the sorting permutation); sign 0 on repeats.
  std::pair<Simplex, int> canonical() const;
};

// Finite complex with rational vertex coordinates; simplices are stored with
// sorted vertex tuples and the set is closed under taking faces.
struct SimplicialComplex {
  int ambient_dim = 0;
  std::vector<std::vector<Rational>> points;
  std::set<std::vector<int>> simplices;

  void add_simplex(const std::vector<int>& vertices);  // closes under faces
  int max_dim() const;
  std::vector<std::vector<int>> simplices_of_dim(int k) const;  // sorted order
  bool has(const std::vector<int>& s) const { return simplices.count(s) > 0; }

  // All simplices containing s as a face (including s itself).
  std::vector<std::vector<int>> star(const std::vector<int>& s) const;

  // Matrix of the boundary operator C_k -> C_{k-1} in the sorted bases.
  RatMatrix boundary_matrix(int k) const;

  // Affine cells for every simplex, with faces and alternating signs.
  void populate_catalogue(CellCatalogue& cat, const std::string& prefix) const;
};

std::string simplex_cell_id(const std::string& prefix, const std::vector<int>& vertices);

// Formal rational combination of registered cells of one dimension.
struct Chain {
  int degree = 0;
  std::map<std::string, Rational> terms;

  void add(const std::string& cell, const Rational& c);
  Chain operator+(const Chain& o) const;
  Chain operator-(const Chain& o) const;
  Chain operator*(const Rational& c) const;
  bool is_zero() const { return terms.empty(); }
};

// Alternating-face boundary, extended linearly. Throws MissingFace when a
// referenced face cell is not registered.
Chain boundary(const Chain& c, const CellCatalogue& cat);

}  // namespace strataforms
