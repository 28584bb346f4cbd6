#pragma once

#include <map>
#include <string>
#include <vector>

#include "strataforms/cohomology.hpp"
#include "strataforms/stratified_form.hpp"

namespace strataforms {

// Geometric triangulation: the complex plus affine cells per simplex.
struct Triangulation {
  SimplicialComplex K;
  CellCatalogue cells;
  std::string prefix;

  const ParametrizedCell& cell_of(const std::vector<int>& simplex) const;
  // first top-dimensional simplex containing s (lexicographic; the complex
  // must be pure for lower-dimensional integration)
  std::vector<int> containing_top(const std::vector<int>& s) const;
};

// Throws DegenerateSimplex when a top simplex has rank-deficient geometry.
Triangulation make_triangulation(const SimplicialComplex& K, const std::string& prefix);

// Barycentric hat functions per top simplex, in its reference coordinates:
// lambda_0 = 1 - sum u, lambda_m = u_m. They sum to 1 exactly and are
// supported in the star of their vertex.
struct PartitionOfUnity {
  std::map<std::vector<int>, std::vector<Polynomial>> per_top;  // top -> lambdas
};
PartitionOfUnity partition_of_unity(const Triangulation& T);

// Elementary form: one PolyForm per top simplex, written in that simplex's
// reference coordinates.
struct ElementaryForm {
  int degree = 0;
  std::map<std::vector<int>, PolyForm> per_top;

  bool is_symbolic_zero() const;
  ElementaryForm operator-(const ElementaryForm& o) const;
};

// j! sum_k (-1)^k lambda_{i_k} d lambda_{i_0} ∧ ... (k-th omitted) ... applied
// per simplex and extended linearly over the cochain.
ElementaryForm elementary_form(const Triangulation& T, const Cochain& f);

ElementaryForm elementary_d(const ElementaryForm& e);

struct CommuteReport {
  bool exact_zero = true;
  double residual = 0;
};
// d(phi_f) - phi_df as symbolic forms per top simplex.
CommuteReport check_commute(const Triangulation& T, const Cochain& f);

// Integral of an elementary j-form over a j-simplex of the complex, through
// the reference-coordinate inclusion into a containing top simplex.
double integrate_elementary(const ElementaryForm& e, const Triangulation& T,
                            const std::vector<int>& simplex, int order = -1);

// The cochain sigma -> ∫_sigma e over all j-simplices (the de Rham map psi
// restricted to the elementary complex).
std::map<std::vector<int>, double> derham_map(const ElementaryForm& e, const Triangulation& T,
                                              int order = -1);

// Closed-cochain to closed-form representative (NotClosed when df != 0);
// closedness of the output is verified symbolically.
ElementaryForm phi_T(const Triangulation& T, const Cochain& f);

// Exact ambient-coordinate version of the form on one top simplex (constant
// along normal directions when the simplex is lower-dimensional than the
// ambient space).
PolyForm ambient_form(const ElementaryForm& e, const Triangulation& T,
                      const std::vector<int>& top);

// The elementary form as a stratified form over the complex's stratification.
StratifiedForm to_stratified(const ElementaryForm& e, const Triangulation& T,
                             const Stratification& sigma);

struct PairingReport {
  int degree = 0;
  int betti = 0;
  int pairing_rank = 0;
  double chain_map_residual = 0;  // max |psi(d e)(s) - psi(e)(ds)|
  bool rank_matches = false;
};

// Rank of the psi-pairing between closed elementary forms and cycles, against
// the Betti number, plus the chain-map residual on random cochains.
PairingReport derham_pairing(const Triangulation& T, int degree, int order = -1,
                             unsigned seed = 1);

}  // namespace strataforms
