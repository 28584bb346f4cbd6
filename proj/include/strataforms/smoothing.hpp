#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "strataforms/integrate.hpp"

namespace strataforms {

// Form sampled on a regular grid over an axis-aligned box; per multi-index a
// node-major array (axis 0 fastest). An optional analytic derivative grid is
// attached when the form was sampled from a symbolic source.
struct GridForm {
  std::vector<std::array<double, 2>> box;
  std::vector<int> res;
  int degree = 0;
  std::map<MultiIndex, std::vector<double>> comps;
  std::shared_ptr<GridForm> analytic_d;

  int n() const { return static_cast<int>(box.size()); }
  double h(int axis) const { return (box[axis][1] - box[axis][0]) / (res[axis] - 1); }
  long node_count() const;
  std::vector<double> node_point(long flat) const;
  long flat_index(const std::vector<int>& idx) const;
};

// Samples a PolyForm (and its symbolic exterior derivative) on the grid.
GridForm sample_polyform(const PolyForm& w, const std::vector<std::array<double, 2>>& box,
                         const std::vector<int>& res, bool with_derivative = true);

// Compactly supported even bump c · exp(-1/(1 - |x/eps|^2)); the discrete
// stencil is normalized to unit mass on the grid.
struct Mollifier {
  double radius = 0.1;
};

struct MollifierStencil {
  std::vector<std::vector<int>> offsets;
  std::vector<double> weights;  // include the h^n volume factor; sum to 1
};
MollifierStencil mollifier_stencil(const Mollifier& m, const GridForm& grid);

// Coefficient-wise discrete convolution with the mollifier; the result lives
// on the eps-inset sub-box. Throws RadiusTooLarge.
GridForm convolve(const GridForm& w, const Mollifier& m);

// Convolution of two grid forms: sum over index pairs of (a_I * b_J) dx_I∧dx_J
// with zero-padding outside the box.
GridForm form_convolve(const GridForm& a, const GridForm& b);

// Central-difference exterior derivative; defined one node inside the box.
GridForm discrete_d(const GridForm& w);

// Sup distance over the common node set (grids must share spacing).
double grid_sup_diff(const GridForm& a, const GridForm& b);
double grid_sup(const GridForm& a);

struct ConvolutionIdentitiesReport {
  double commutation_residual = 0;  // alpha*beta vs (-1)^{jk} beta*alpha
  double derivative_residual = 0;   // d(alpha*phi) vs (d alpha)*phi
  double grid_step = 0;
  bool pass = false;
};
// PASS iff both residuals are at most C h^2 (second-order differencing).
ConvolutionIdentitiesReport check_convolution_identities(const GridForm& alpha,
                                                         const GridForm& beta,
                                                         const Mollifier& m, double C = 100);

struct WeakDerivativeReport {
  double residual = 0;  // max over test forms
  bool pass = false;
  std::vector<double> per_form;
  std::vector<PolyForm> forms;  // the test forms, for independent cross-checks
};

// Integration-by-parts detector: max over compactly supported polynomial test
// forms phi of |∫ candidate ∧ phi - (-1)^{k+1} ∫ omega ∧ d phi|, both sides by
// exact-order quadrature over the stratification's top cells.
WeakDerivativeReport weak_derivative_residual(const StratifiedForm& w,
                                              const Stratification& sigma,
                                              const CellCatalogue& cat,
                                              const PolyForm& candidate, int testforms = 8,
                                              unsigned seed = 1, double tol = 1e-6);

// ---- tubular extension ----

struct TubeSpec {
  enum class Kind { Segment, Plane, Parabola };
  Kind kind = Kind::Segment;
  // segment from a to b in R^n
  std::vector<double> seg_a, seg_b;
  // plane rectangle in R^3: origin + two orthogonal axes with extents
  std::vector<double> plane_o, plane_u, plane_v;  // axes scaled to full extent
  // parabola y = c x^2 over [x0, x1] in R^2
  double par_c = 1, par_x0 = 0, par_x1 = 1;
  // trapezoid width profile: rho0 on the middle, tapering to 0 at the ends
  double rho0 = 0.25;
  double taper = 1.0 / 3;
};

struct TubePoint {
  double dist = 0;
  std::vector<double> foot;
  double s = 0;  // normalized base parameter in [0,1] (min over axes for planes)
};
TubePoint tube_project(const TubeSpec& spec, const std::vector<double>& x);
double tube_rho(const TubeSpec& spec, double s);
// cutoff: 1 where dist < rho/2, 0 where dist > 3 rho/4, quintic in between
double tube_cutoff(const TubeSpec& spec, const std::vector<double>& x);

class TubeForm {
 public:
  TubeForm(TubeSpec spec, PolyForm gamma_on_s);

  // gamma_hat = phi_S · pi^* gamma, zero outside the tube
  double value(const std::vector<double>& x, const std::vector<std::vector<double>>& vectors) const;
  // d gamma_hat = d phi_S ∧ pi^* gamma + phi_S · pi^*(d gamma)
  double d_value(const std::vector<double>& x,
                 const std::vector<std::vector<double>>& vectors) const;

  const TubeSpec& spec() const { return spec_; }

 private:
  TubeSpec spec_;
  PolyForm gamma_;
  std::optional<PolyMap> projection_;  // affine cases: symbolic pullbacks
  std::optional<PolyForm> pulled_;     // pi^* gamma
  std::optional<PolyForm> pulled_d_;   // pi^*(d gamma)

  double pullback_value(const PolyForm& w, const std::vector<double>& x,
                        const std::vector<std::vector<double>>& vectors) const;
};

// Extension by zero of phi_S pi^* gamma. The decay audit (|gamma| bounded by
// sup over the fiber of (1+|d phi|)^-2, constant 1) is sampled; throws
// DecayAuditFailed.
TubeForm tube_extension(const PolyForm& gamma, const TubeSpec& spec, int samples = 64);

}  // namespace strataforms
