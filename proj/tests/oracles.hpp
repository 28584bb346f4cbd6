// Independent oracles used by the test suites. These deliberately avoid the
// library's own code paths for the quantity they check.
#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "strataforms/cells.hpp"
#include "strataforms/linalg.hpp"
#include "strataforms/polyform.hpp"
#include "strataforms/quadrature.hpp"

namespace oracles {

using namespace strataforms;

// Representation-formula wedge: sum over all permutations with the standard
// 1/(k! l!) normalization, evaluated against explicit vectors.
inline double wedge_by_permutations(const PolyForm& a, const PolyForm& b,
                                    const std::vector<double>& x,
                                    const std::vector<std::vector<double>>& v) {
  int k = a.degree(), l = b.degree();
  std::vector<int> perm(k + l);
  std::iota(perm.begin(), perm.end(), 0);
  double acc = 0;
  do {
    int sign = 1;
    for (int i = 0; i < k + l; ++i)
      for (int j = i + 1; j < k + l; ++j)
        if (perm[i] > perm[j]) sign = -sign;
    std::vector<std::vector<double>> va, vb;
    for (int i = 0; i < k; ++i) va.push_back(v[perm[i]]);
    for (int i = k; i < k + l; ++i) vb.push_back(v[perm[i]]);
    acc += sign * evaluate(a, x, va) * evaluate(b, x, vb);
  } while (std::next_permutation(perm.begin(), perm.end()));
  double norm = 1;
  for (int i = 2; i <= k; ++i) norm *= i;
  for (int i = 2; i <= l; ++i) norm *= i;
  return acc / norm;
}

// Pullback via the numeric chain rule: (F*w)(u; v1..vk) = w(F(u); dF(u)v1 ...).
inline double pullback_by_chain_rule(const PolyMap& F, const PolyForm& w,
                                     const std::vector<double>& u,
                                     const std::vector<std::vector<double>>& v) {
  auto x = F.eval(u);
  auto J = F.jacobian(u);
  std::vector<std::vector<double>> jv;
  for (const auto& vec : v) {
    std::vector<double> img(J.size(), 0.0);
    for (size_t r = 0; r < J.size(); ++r)
      for (size_t c = 0; c < vec.size(); ++c) img[r] += J[r][c] * vec[c];
    jv.push_back(std::move(img));
  }
  return evaluate(w, x, jv);
}

// Exact integral of a k-form over a k-cell through the monomial formula
// (the symbolic antiderivative route; no quadrature involved).
inline Rational integrate_cell_exact(const PolyForm& w, const ParametrizedCell& cell) {
  PolyForm pb = pullback(cell.map, w);
  Rational acc(0);
  MultiIndex top(cell.dim);
  std::iota(top.begin(), top.end(), 0);
  const Polynomial* p = pb.coeff(top);
  if (p)
    for (const auto& [e, c] : p->terms()) acc += c * monomial_ref_integral(cell.domain, e);
  return acc * Rational(cell.orientation);
}

// Doubled signed area of a closed rational polygon (shoelace).
inline Rational shoelace_double_area(const std::vector<std::vector<Rational>>& pts) {
  Rational acc(0);
  for (size_t i = 0; i < pts.size(); ++i) {
    const auto& p = pts[i];
    const auto& q = pts[(i + 1) % pts.size()];
    acc += p[0] * q[1] - q[0] * p[1];
  }
  return acc;
}

// Plain rational Gaussian elimination rank: independent of the library's
// fraction-free Bareiss path.
inline int rank_gauss(RatMatrix m) {
  if (m.empty() || m[0].empty()) return 0;
  const size_t rows = m.size(), cols = m[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t piv = r;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[r]);
    for (size_t i = r + 1; i < rows; ++i) {
      if (m[i][c] == 0) continue;
      Rational f = m[i][c] / m[r][c];
      for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return static_cast<int>(r);
}

inline Polynomial random_polynomial(std::mt19937_64& rng, int nvars, int deg, int terms) {
  Polynomial p(nvars);
  std::uniform_int_distribution<int> dnum(-6, 6), dden(1, 4), dexp(0, deg);
  for (int t = 0; t < terms; ++t) {
    Polynomial::Exponents e(nvars);
    int budget = deg;
    for (int i = 0; i < nvars; ++i) {
      int x = std::min(budget, dexp(rng));
      e[i] = static_cast<unsigned>(x);
      budget -= x;
    }
    p.add_term(e, Rational(dnum(rng), dden(rng)));
  }
  return p;
}

inline PolyForm random_form(std::mt19937_64& rng, int n, int k, int deg = 2, int terms = 2) {
  PolyForm f(n, k);
  std::vector<int> idx(k);
  std::function<void(int, int)> rec = [&](int pos, int start) {
    if (pos == k) {
      f.add_term(idx, random_polynomial(rng, n, deg, terms));
      return;
    }
    for (int i = start; i < n; ++i) {
      idx[pos] = i;
      rec(pos + 1, i + 1);
    }
  };
  if (k == 0)
    f.add_term({}, random_polynomial(rng, n, deg, terms));
  else
    rec(0, 0);
  return f;
}

}  // namespace oracles
