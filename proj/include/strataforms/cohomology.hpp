#pragma once

#include <map>
#include <optional>
#include <vector>

#include "strataforms/complex.hpp"
#include "strataforms/linalg.hpp"

namespace strataforms {

// Simplicial cochain over the rationals, keyed by sorted vertex tuples.
struct Cochain {
  int degree = 0;
  std::map<std::vector<int>, Rational> values;

  Rational operator()(const std::vector<int>& s) const {
    auto it = values.find(s);
    return it == values.end() ? Rational(0) : it->second;
  }
  void set(const std::vector<int>& s, const Rational& v);
  bool is_zero() const { return values.empty(); }
  Cochain operator+(const Cochain& o) const;
  Cochain operator-(const Cochain& o) const;
  Cochain operator*(const Rational& c) const;
  bool operator==(const Cochain& o) const { return degree == o.degree && values == o.values; }
};

// (df)(s) = f(boundary s), exactly.
Cochain coboundary(const Cochain& f, const SimplicialComplex& K);

struct BettiTable {
  std::vector<int> b;  // b[k]
  int euler_characteristic() const;
};

// Exact ranks by fraction-free elimination: b_k = dim C_k - rank d_k - rank d_{k+1}.
BettiTable betti(const SimplicialComplex& K);

// Solves dg = f for a (k-1)-cochain g, exactly. Requires df = 0 (NotClosed
// otherwise); returns nullopt when f is closed but not exact. Free variables
// of the elimination are set to zero.
std::optional<Cochain> solve_primitive(const Cochain& f, const SimplicialComplex& K);

struct FunctionalSplit {
  RatVector g1;
  RatVector g2;
};

// Lemma-4.7-style splitting: given surjective phi1 : V -> W1, phi2 : V -> W2
// (rows = matrices acting on column vectors) and a functional f on V with
// ker f containing ker phi1 ∩ ker phi2, produces g1, g2 with
// f = g1∘phi1 + g2∘phi2 exactly. The extension off the image of
// x -> (phi1 x, phi2 x) is zero on a greedily chosen complement basis.
// Throws NotSurjective / KernelConditionFails.
FunctionalSplit split_functional(int dim_v, const RatMatrix& phi1, const RatMatrix& phi2,
                                 const RatVector& f);

}  // namespace strataforms
