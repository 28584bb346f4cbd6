#pragma once

#include <vector>

#include "strataforms/cells.hpp"

namespace strataforms {

// Nodes and weights on a reference domain, exact for polynomials up to the
// declared total degree `order`. Simplex rules are conical products of
// Gauss-Jacobi factors; box rules are Gauss-Legendre tensor products.
// Exactness is audited on monomials once at construction.
struct QuadratureRule {
  RefDomain domain = RefDomain::Simplex;
  int dim = 0;
  int order = 0;
  std::vector<std::vector<double>> nodes;
  std::vector<double> weights;

  double apply(const Polynomial& integrand) const;
};

// Cached by (domain, dim, order); thread-safe.
const QuadratureRule& quadrature_rule(RefDomain d, int dim, int order);

// Gauss-Legendre points/weights on [0,1].
void gauss_legendre_01(int m, std::vector<double>& x, std::vector<double>& w);
// Gauss-Jacobi on [0,1] with weight (1-x)^alpha.
void gauss_jacobi_01(int m, int alpha, std::vector<double>& x, std::vector<double>& w);

// Exact integral of the monomial u^e over the reference domain (test oracle
// for the construction audit).
Rational monomial_ref_integral(RefDomain d, const std::vector<unsigned>& e);

}  // namespace strataforms
