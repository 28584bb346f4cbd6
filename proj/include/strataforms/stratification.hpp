#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "strataforms/cells.hpp"
#include "strataforms/complex.hpp"

namespace strataforms {

// A stratum is one parametrized cell plus its declared lower-dimensional
// neighbours (S' <= S). When the stratum is co-registered on a shared
// catalogue, `catalogue_cells` lists the catalogue cells whose union it is.
struct Stratum {
  std::string id;
  int dim = 0;
  std::string cell;
  std::set<std::string> adjacency;
  std::set<std::string> catalogue_cells;
};

struct Stratification {
  std::string id;
  int ambient_dim = 0;
  std::map<std::string, Stratum> strata;

  void add(Stratum s);
  const Stratum& get(const std::string& id) const;
  std::vector<std::string> ids_of_dim(int k) const;
  int max_dim() const;
};

struct FrontierSample {
  std::string stratum;
  std::vector<double> point;
  std::string nearest;
  double distance = 0;
  bool ok = false;
};

struct FrontierReport {
  bool pass = true;        // boundary coverage
  bool overlap_ok = true;  // pairwise-disjointness audit at interior samples
  double max_distance = 0;
  std::vector<FrontierSample> failures;
  int samples_total = 0;
};

// Samples boundary points of each stratum's parametrized image and checks
// that every one lies within tol of a declared adjacent stratum of strictly
// lower dimension. Also audits pairwise disjointness at interior samples.
FrontierReport validate_frontier(const Stratification& sigma, const CellCatalogue& cat,
                                 int samples_per_face = 64, double tol = 1e-9);

// Common refinement of two stratifications co-registered on one catalogue.
// Output strata are reused input strata where an intersection group equals a
// whole input stratum, and single catalogue cells otherwise.
struct Refinement {
  Stratification refined;
  std::map<std::string, std::string> parent_in_a;  // refined stratum -> stratum of a
  std::map<std::string, std::string> parent_in_b;
};

Refinement refine_common(const Stratification& a, const Stratification& b,
                         const CellCatalogue& cat);

// Stratification whose strata are the simplices of a complex, adjacency being
// the proper-face relation.
Stratification stratification_from_complex(const SimplicialComplex& K, const std::string& prefix,
                                           const std::string& strat_id);

}  // namespace strataforms
