#pragma once

#include <map>
#include <string>
#include <vector>

#include "strataforms/rational.hpp"

namespace strataforms {

// Multivariate polynomial with exact rational coefficients. Terms are keyed
// by the exponent vector (length = number of variables); zero coefficients
// are never stored, so equality of maps is equality of polynomials.
class Polynomial {
 public:
  using Exponents = std::vector<unsigned>;

  Polynomial() : nvars_(0) {}
  explicit Polynomial(int nvars) : nvars_(nvars) {}
  Polynomial(int nvars, const Rational& c);

  static Polynomial variable(int nvars, int i);
  static Polynomial constant(int nvars, const Rational& c) { return Polynomial(nvars, c); }

  int nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_value() const;  // valid when is_constant()
  const std::map<Exponents, Rational>& terms() const { return terms_; }

  int total_degree() const;   // -1 for the zero polynomial
  int degree_in(int i) const;

  void add_term(const Exponents& e, const Rational& c);

  Polynomial operator-() const;
  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(const Rational& c) const;
  bool operator==(const Polynomial& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }
  bool operator!=(const Polynomial& o) const { return !(*this == o); }

  Polynomial derivative(int i) const;
  Polynomial pow(unsigned e) const;

  // Composition: substitute subs[i] (all over a common variable set) for x_i.
  Polynomial substitute(const std::vector<Polynomial>& subs) const;

  // Definite integral over [0,1] in variable i; the variable is eliminated
  // and the result lives on the remaining nvars-1 variables.
  Polynomial integrate_unit_drop(int i) const;

  // Extends to n more trailing variables (exponent 0 on the new ones).
  Polynomial extend(int extra) const;

  Rational eval(const std::vector<Rational>& x) const;
  double eval(const std::vector<double>& x) const;

  std::string str() const;  // for diagnostics

 private:
  int nvars_;
  std::map<Exponents, Rational> terms_;
};

inline Polynomial operator*(const Rational& c, const Polynomial& p) { return p * c; }

}  // namespace strataforms
