#pragma once

#include <map>
#include <string>
#include <vector>

#include "strataforms/quadrature.hpp"
#include "strataforms/stratified_form.hpp"

namespace strataforms {

// Integral of a k-form over a k-cell: quadrature applied to the symbolic
// pullback on the reference domain, times orientation. With order < 0 the
// rule order is the exact degree of the pulled-back integrand, which makes
// the quadrature exact up to rounding.
double integrate_cell(const PolyForm& w, const ParametrizedCell& cell, int order = -1);

double integrate_chain(const PolyForm& w, const Chain& c, const CellCatalogue& cat,
                       int order = -1, int jobs = 1);

// How chain cells attach to strata when integrating stratified forms.
struct StratumAssignment {
  std::map<std::string, std::string> fixed;                // cell -> stratum
  std::map<std::string, std::vector<std::string>> splits;  // cell -> registered refinement
};

// Replaces split cells by their registered refinements, recursively.
Chain expand_splits(const Chain& c, const StratumAssignment& assignment);

// Stratum whose closed image contains the whole sampled cell; declared
// assignments win, otherwise classification by distance sampling. Throws
// StratumStraddle when the image is not contained in one stratum.
std::string resolve_stratum(const std::string& cell_id, const CellCatalogue& cat,
                            const Stratification& sigma, const StratumAssignment& assignment,
                            double tol = 1e-7);

double integrate_chain(const StratifiedForm& w, const Chain& c, const CellCatalogue& cat,
                       const Stratification& sigma, const StratumAssignment& assignment = {},
                       int order = -1, int jobs = 1);

// Reference facets with their boundary signs.
std::vector<std::pair<PolyMap, int>> ref_facets(RefDomain d, int k);

struct StokesEpsEntry {
  double eps = 0;
  double interior = 0;  // ∫_{S_eps} dω
  double boundary = 0;  // ∫_{∂S_eps} ω
  double residual = 0;
};

struct StokesReport {
  std::vector<StokesEpsEntry> eps_entries;
  double limit_interior = 0;
  double limit_boundary = 0;
  double limit_residual = 0;
  bool monotone_ok = true;
  bool pass = false;
};

// Thm-3.6-style residual: the shrinkage S_eps is realized in the reference
// domain (contraction toward the barycenter by 1-eps), so each shrunk cell
// and its boundary stay inside the cell's stratum.
StokesReport stokes_residual(const StratifiedForm& w, const Chain& sigma_chain,
                             const CellCatalogue& cat, const Stratification& sigma,
                             const StratumAssignment& assignment = {},
                             std::vector<double> eps_seq = {}, double tol = 1e-8,
                             int order = -1, int jobs = 1);

}  // namespace strataforms
