#pragma once

#include <map>
#include <optional>
#include <string>

#include "strataforms/polyform.hpp"
#include "strataforms/stratification.hpp"

namespace strataforms {

// One ambient PolyForm per stratum; degrees and ambient dimensions agree.
// Only the restriction to each stratum's tangent spaces is meaningful.
struct StratifiedForm {
  std::string stratification;
  int degree = 0;
  std::map<std::string, PolyForm> components;  // stratum id -> form
  std::optional<Rational> declared_bound;

  const PolyForm& component(const std::string& stratum) const;
  bool has_component(const std::string& stratum) const { return components.count(stratum) > 0; }

  StratifiedForm derivative() const;  // d per stratum

  // Induced form on a refinement: each refined stratum inherits the parent's
  // ambient component.
  StratifiedForm on_refinement(const Stratification& refined,
                               const std::map<std::string, std::string>& parent) const;
};

struct ContinuityWitness {
  std::string upper, lower;
  std::vector<double> point;
  double residual = 0;
};

struct ContinuityReport {
  bool pass = true;
  double max_residual = 0;
  int pairs_checked = 0;
  int pairs_vacuous = 0;  // lower stratum too thin to carry a k-multivector
  std::vector<ContinuityWitness> failures;
};

// Graph-closure audit (tangential matching across adjacent strata). For each
// adjacency pair S' <= S, boundary points p of S near S' are approached along
// sequences p_i at dyadic distances; the form on S evaluated on converging
// tangent multivectors must approach the value on S'.
ContinuityReport check_graph_closed(const StratifiedForm& w, const Stratification& sigma,
                                    const CellCatalogue& cat, int samples = 8,
                                    double tol = 1e-6);

struct SupNormEstimate {
  double value = 0;
  std::vector<double> argmax_point;
  std::string argmax_stratum;
  bool bound_respected = true;  // vs declared_bound, when present
};

// Lower bound for the comass sup-norm: max of |w(x; xi)| over sampled points
// and orthonormal simple multivectors tangent to the strata.
SupNormEstimate sup_norm_estimate(const StratifiedForm& w, const Stratification& sigma,
                                  const CellCatalogue& cat, int samples = 64);

}  // namespace strataforms
