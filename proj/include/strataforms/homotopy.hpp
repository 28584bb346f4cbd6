#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "strataforms/stratified_form.hpp"

namespace strataforms {

// Strong deformation retraction r : U x [0,1] -> U. Cone retractions are
// global polynomial maps in (x, t); lifted retractions transport a base
// retraction through graph/band cells delimited by theta_lo <= theta_hi and
// are evaluated pointwise (exactly on rational inputs when the thetas are
// polynomial).
struct Retraction {
  enum class Kind { Cone, Lifted };
  enum class CellKind { Graph, Band };

  Kind kind = Kind::Cone;
  std::string id;
  std::string stratification;
  int ambient_dim = 0;
  std::vector<std::string> target;  // strata of N

  // cone data
  std::vector<Rational> center;
  std::optional<PolyMap> poly;  // (x_1..x_n, t) -> R^n when polynomial

  // lifted data
  std::shared_ptr<const Retraction> base;
  CellKind cellkind = CellKind::Band;
  Polynomial theta_lo, theta_hi;  // on the base coordinates
  // test hooks: override the double evaluation of the delimiters
  std::function<double(const std::vector<double>&)> theta_lo_fn, theta_hi_fn;

  bool is_polynomial() const { return poly.has_value(); }

  std::vector<Rational> eval(const std::vector<Rational>& q, const Rational& t) const;
  std::vector<double> eval(const std::vector<double>& q, double t) const;

  // band coordinate tau(q) = (y - theta_lo(x)) / (theta_hi(x) - theta_lo(x))
  Rational tau(const std::vector<Rational>& q) const;
};

// Audited constructor: every stratum must be closed under x -> p + t(x - p)
// at sampled (x, t); throws NotConeInvariant otherwise.
Retraction cone_retraction(const std::vector<Rational>& center, const Stratification& sigma,
                           const CellCatalogue& cat, int samples = 32, double tol = 1e-7);

// Lift of a base retraction through a graph or band cell; bands are sampled
// for delimiter crossings (DelimiterCrossing).
Retraction lift_retraction(std::shared_ptr<const Retraction> base, const Polynomial& theta_lo,
                           const Polynomial& theta_hi, Retraction::CellKind cellkind,
                           const Stratification& sigma, const CellCatalogue& cat,
                           int samples = 64);

// r*w on R^(n+1) split as alpha + dt ∧ beta with t the last variable.
struct TimeSplitForm {
  PolyForm alpha;  // no dt factor
  PolyForm beta;   // the dt-coefficient
};
TimeSplitForm split_time(const PolyForm& w_xt);

// K(w) = ∫_0^1 beta dt for polynomial retractions (symbolic). Throws
// NonPolynomialRetraction for lifted retractions without a polynomial map.
PolyForm homotopy_operator(const PolyForm& w, const Retraction& r);

// Numeric evaluation of K(w)(x; v_1..v_{k-1}) by Gauss quadrature in t, for
// retractions that are only pointwise evaluable.
double homotopy_value(const PolyForm& w, const Retraction& r, const std::vector<double>& x,
                      const std::vector<std::vector<double>>& vectors, int t_order = 10);

// pullback under r_t for fixed rational t (polynomial retractions)
PolyForm pullback_at_time(const Retraction& r, const PolyForm& w, const Rational& t);

struct RetractionAudit {
  bool endpoint_identity = true;   // r(x,1) = x
  bool endpoint_in_target = true;  // r(x,0) ∈ N
  bool preserves_strata = true;    // r(S x (0,1]) ⊂ S
  bool target_single_stratum = true;
  double max_endpoint_gap = 0;
  double max_stratum_gap = 0;
  bool pass = true;
};
RetractionAudit audit_retraction(const Retraction& r, const Stratification& sigma,
                                 const CellCatalogue& cat, int samples = 24, double tol = 1e-7);

struct PoincareResult {
  StratifiedForm gamma;
  bool symbolic_exact = true;   // d gamma_S == omega_S per stratum
  bool continuity_pass = true;  // graph-closure of gamma across strata
};

// gamma = K(omega) + r_0^* gamma', stratumwise. Requires d omega = 0 per
// stratum (NotClosed) and a passing Thm-5.1-style audit (AuditFailed).
PoincareResult poincare_primitive(const StratifiedForm& w, const Stratification& sigma,
                                  const CellCatalogue& cat, const Retraction& r,
                                  const std::optional<PolyForm>& gamma_prime = std::nullopt);

struct SemidiffReport {
  std::vector<double> t_seq;
  std::vector<double> residuals;  // max_x |d_x r_t - d_x r_0| per t
  double extrapolated_limit = 0;
  bool monotone = true;
  bool strata_preserved = true;
  bool pass = false;
};

// Thm 5.1 (2.5): spatial differentials along each stratum converge to the
// differential at t = 0. Differentials by central differences (step 1e-5) in
// the stratum charts; the limit is read off by linear extrapolation of the
// tail of the residual sequence.
SemidiffReport check_semidifferentiable(const Retraction& r, const Stratification& sigma,
                                        const CellCatalogue& cat, int samples = 16,
                                        std::vector<double> t_seq = {}, double tol = 1e-4);

struct LipschitzReport {
  double estimate = 0;  // lower bound for the true constant
  int pairs = 0;
};
LipschitzReport lipschitz_estimate(const Retraction& r, const Stratification& sigma,
                                   const CellCatalogue& cat, int samples = 256);

}  // namespace strataforms
