#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "strataforms/polynomial.hpp"

namespace strataforms {

using MultiIndex = std::vector<int>;  // strictly increasing, entries in 0..n-1

// Polynomial map between Euclidean spaces: comps[i] is the i-th coordinate
// function, each a Polynomial in domain_dim variables.
struct PolyMap {
  int domain_dim = 0;
  std::vector<Polynomial> comps;

  int codomain_dim() const { return static_cast<int>(comps.size()); }
  static PolyMap identity(int n);
  static PolyMap constant(const std::vector<Rational>& p);

  std::vector<Rational> eval(const std::vector<Rational>& x) const;
  std::vector<double> eval(const std::vector<double>& x) const;

  // Jacobian column j = d(comps)/d(x_j), evaluated exactly.
  std::vector<std::vector<Rational>> jacobian(const std::vector<Rational>& x) const;
  std::vector<std::vector<double>> jacobian(const std::vector<double>& x) const;

  PolyMap compose(const PolyMap& inner) const;  // this ∘ inner
  bool is_affine() const;
  int max_degree() const;
};

// A k-multivector written in the elementary-wedge basis e_I.
struct Multivector {
  int n = 0;
  int k = 0;
  std::map<MultiIndex, Rational> comps;

  static Multivector elementary(int n, const MultiIndex& idx, const Rational& c = Rational(1));
  // Wedge of k column vectors; component on e_I is the k x k minor on rows I.
  static Multivector from_vectors(int n, const std::vector<std::vector<Rational>>& vectors);

  Rational norm_squared() const;  // Euclidean in the e_I basis
};

// Differential k-form on R^n with polynomial coefficients: sum over strictly
// increasing multi-indices I of p_I dx_I. A 0-form is the single entry with
// the empty index.
class PolyForm {
 public:
  PolyForm() = default;
  PolyForm(int ambient_dim, int degree) : n_(ambient_dim), k_(degree) {}

  static PolyForm zero(int n, int k) { return PolyForm(n, k); }
  // dx_i as a 1-form
  static PolyForm dx(int n, int i);
  static PolyForm scalar(int n, const Polynomial& p);  // 0-form

  int ambient_dim() const { return n_; }
  int degree() const { return k_; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::map<MultiIndex, Polynomial>& coeffs() const { return coeffs_; }
  const Polynomial* coeff(const MultiIndex& I) const;
  int coefficient_degree() const;  // max total degree over coefficients

  void add_term(const MultiIndex& I, const Polynomial& p);

  PolyForm operator+(const PolyForm& o) const;
  PolyForm operator-(const PolyForm& o) const;
  PolyForm operator-() const;
  PolyForm operator*(const Rational& c) const;
  PolyForm scaled(const Polynomial& p) const;
  bool operator==(const PolyForm& o) const;

  std::string str() const;

 private:
  int n_ = 0;
  int k_ = 0;
  std::map<MultiIndex, Polynomial> coeffs_;
};

// Exterior product. Degrees add; beyond the ambient dimension the result is
// the zero form (exterior-algebra convention, not an error).
PolyForm wedge(const PolyForm& a, const PolyForm& b);

PolyForm exterior_derivative(const PolyForm& w);

// Pullback along F : R^m -> R^n of a form on R^n; exact symbolic chain rule.
PolyForm pullback(const PolyMap& F, const PolyForm& w);

// Evaluation omega(x; xi). Multilinear and alternating through the
// elementary-wedge representation of xi.
Rational evaluate(const PolyForm& w, const std::vector<Rational>& x, const Multivector& xi);
double evaluate(const PolyForm& w, const std::vector<double>& x, const Multivector& xi);
// Evaluation against a wedge of k explicit vectors (minors computed on the fly).
double evaluate(const PolyForm& w, const std::vector<double>& x,
                const std::vector<std::vector<double>>& vectors);

// Sign of the permutation sorting `idx` (no repeats), or 0 if a repeat occurs;
// sorted result returned through `sorted`.
int sort_index_sign(const MultiIndex& idx, MultiIndex& sorted);

}  // namespace strataforms
