#pragma once

#include <string>

#include "strataforms/complex.hpp"
#include "strataforms/stratification.hpp"

namespace strataforms {

// Ready-made desk-scale geometries. Every builder registers cells into the
// returned catalogue and, where meaningful, a stratification and a chain.

struct BuiltComplex {
  SimplicialComplex K;
  CellCatalogue cat;
  Stratification strat;
  std::string prefix;
  Chain top_chain;  // sum of top-dimensional cells, consistently oriented
};

// Unit square split by the diagonal (0,0)-(1,1) into two triangles.
BuiltComplex split_square();

// Unit square as one box 2-cell with edge and corner cells; when
// drop_one_edge is true the top edge stratum is omitted (frontier violation).
BuiltComplex square_boxes(bool drop_one_edge = false);

// Both diagonals: arrangement catalogue plus the two single-diagonal
// stratifications co-registered on it.
struct DoubleSplitSquare {
  SimplicialComplex K;
  CellCatalogue cat;
  Stratification sigma_a;  // split by (0,0)-(1,1)
  Stratification sigma_b;  // split by (1,0)-(0,1)
  std::string prefix;
};
DoubleSplitSquare double_split_square();

// Fan disk: `triangles` triangles around one interior vertex, rational
// star-shaped polygon boundary.
BuiltComplex fan_disk(int triangles = 20);

// Boundary of a rational polygon (a 1-complex "circle").
BuiltComplex polygon_circle();

// Octahedron boundary surface in R^3.
BuiltComplex octahedron();

// Product flat torus: triangle boundary x triangle boundary in R^4,
// 9 vertices / 27 edges / 18 triangles.
BuiltComplex product_torus();

// Standard 3-simplex in R^3.
BuiltComplex tetrahedron();

// Tetrahedron split into two by the plane through an edge and the midpoint
// of the opposite edge.
BuiltComplex split_tetrahedron();

// Square coned at its center: 4 triangles, cone-invariant for the center.
BuiltComplex cone_square();

// Upper half square (0,1)x(0,1] over the open segment (0,1)x{0}: the minimal
// two-stratum geometry for tangential-continuity tests.
BuiltComplex half_plane_strip();

// One wall of a square ring: offset square [1,2]x[0,1]; not star-shaped with
// respect to the origin.
BuiltComplex offset_square();

// Triangle 0 < y < x < 1 with its band structure over the open base (0,1):
// strata are the origin, the open base edge (graph of 0), the open hypotenuse
// (graph of x), and the open band.
BuiltComplex triangle_band();

}  // namespace strataforms
