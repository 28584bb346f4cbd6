#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "strataforms/polyform.hpp"

namespace strataforms {

enum class RefDomain { Simplex, Box };

// Oriented k-cell: a polynomial embedding of the standard simplex or unit box
// into R^n, with its boundary faces registered by id and induced sign.
struct ParametrizedCell {
  std::string id;
  RefDomain domain = RefDomain::Simplex;
  int dim = 0;
  int ambient_dim = 0;
  PolyMap map;  // dim vars -> ambient_dim comps
  int orientation = 1;
  std::vector<std::pair<std::string, int>> faces;  // (cell id, induced sign)
};

class CellCatalogue {
 public:
  void add(ParametrizedCell cell);
  bool has(const std::string& id) const { return cells_.count(id) > 0; }
  const ParametrizedCell& get(const std::string& id) const;
  const std::map<std::string, ParametrizedCell>& all() const { return cells_; }

 private:
  std::map<std::string, ParametrizedCell> cells_;
};

// ---- reference-domain geometry ----

// Affine inclusion of the i-th facet: simplex convention drops vertex i of
// (e_0=0, e_1, ..., e_k); boundary sign is (-1)^i.
PolyMap simplex_face_map(int k, int i);
// Box facet fixing axis j (1-based in the sign convention) at value a in {0,1};
// boundary sign is (-1)^(j+1+a) with j 0-based here, matching the cube chain rule.
PolyMap box_face_map(int k, int j, int a);

Rational ref_volume(RefDomain d, int k);
std::vector<Rational> ref_barycenter(RefDomain d, int k);
std::vector<double> ref_barycenter_d(RefDomain d, int k);
bool ref_contains(RefDomain d, int k, const std::vector<double>& u, double slack = 1e-12);

// Affine maps of all j-dimensional reference faces into the domain.
std::vector<PolyMap> ref_face_maps(RefDomain d, int k, int j);

// Deterministic low-discrepancy points in the open reference domain.
std::vector<std::vector<double>> ref_interior_points(RefDomain d, int k, int count);
std::vector<double> halton_point(RefDomain d, int k, int index);

// ---- metric queries ----

struct DistanceResult {
  double distance = 0;
  std::vector<double> param;  // minimizing reference point
};

// Distance from an ambient point to the closed image of a cell. Exact
// (rational least squares over the face lattice) for affine maps; projected
// gradient with multistart otherwise.
DistanceResult distance_to_cell(const std::vector<double>& point, const ParametrizedCell& cell);

struct CellAudit {
  bool rank_ok = true;
  bool faces_ok = true;
  double max_face_gap = 0;
  std::string detail;
};

// Samples interior differentials (rank k) and facet/face-cell agreement.
CellAudit audit_cell(const ParametrizedCell& cell, const CellCatalogue& cat, int samples,
                     double tol);

}  // namespace strataforms
