#include "strataforms/polyform.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace strataforms {

PolyMap PolyMap::identity(int n) {
  PolyMap f;
  f.domain_dim = n;
  for (int i = 0; i < n; ++i) f.comps.push_back(Polynomial::variable(n, i));
  return f;
}

PolyMap PolyMap::constant(const std::vector<Rational>& p) {
  PolyMap f;
  f.domain_dim = 0;
  for (const auto& c : p) f.comps.push_back(Polynomial::constant(0, c));
  return f;
}

std::vector<Rational> PolyMap::eval(const std::vector<Rational>& x) const {
  std::vector<Rational> y;
  y.reserve(comps.size());
  for (const auto& p : comps) y.push_back(p.eval(x));
  return y;
}

std::vector<double> PolyMap::eval(const std::vector<double>& x) const {
  std::vector<double> y;
  y.reserve(comps.size());
  for (const auto& p : comps) y.push_back(p.eval(x));
  return y;
}

std::vector<std::vector<Rational>> PolyMap::jacobian(const std::vector<Rational>& x) const {
  std::vector<std::vector<Rational>> J(comps.size(), std::vector<Rational>(domain_dim));
  for (size_t i = 0; i < comps.size(); ++i)
    for (int j = 0; j < domain_dim; ++j) J[i][j] = comps[i].derivative(j).eval(x);
  return J;
}

std::vector<std::vector<double>> PolyMap::jacobian(const std::vector<double>& x) const {
  std::vector<std::vector<double>> J(comps.size(), std::vector<double>(domain_dim));
  for (size_t i = 0; i < comps.size(); ++i)
    for (int j = 0; j < domain_dim; ++j) J[i][j] = comps[i].derivative(j).eval(x);
  return J;
}

PolyMap PolyMap::compose(const PolyMap& inner) const {
  if (inner.codomain_dim() != domain_dim)
    throw Error("DimensionMismatch", "map composition arity");
  PolyMap f;
  f.domain_dim = inner.domain_dim;
  for (const auto& p : comps) f.comps.push_back(p.substitute(inner.comps));
  return f;
}

bool PolyMap::is_affine() const { return max_degree() <= 1; }

int PolyMap::max_degree() const {
  int d = 0;
  for (const auto& p : comps) d = std::max(d, p.total_degree());
  return d;
}

int sort_index_sign(const MultiIndex& idx, MultiIndex& sorted) {
  sorted = idx;
  int sign = 1;
  for (size_t i = 0; i < sorted.size(); ++i)
    for (size_t j = i + 1; j < sorted.size(); ++j) {
      if (sorted[i] == sorted[j]) return 0;
      if (sorted[i] > sorted[j]) {
        std::swap(sorted[i], sorted[j]);
        sign = -sign;
      }
    }
  return sign;
}

Multivector Multivector::elementary(int n, const MultiIndex& idx, const Rational& c) {
  Multivector v;
  v.n = n;
  v.k = static_cast<int>(idx.size());
  MultiIndex sorted;
  int s = sort_index_sign(idx, sorted);
  if (s != 0 && c != 0) v.comps[sorted] = c * s;
  return v;
}

namespace {
Rational det_rational(std::vector<std::vector<Rational>> m) {
  const size_t n = m.size();
  Rational det(1);
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) return Rational(0);
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (size_t r = c + 1; r < n; ++r) {
      if (m[r][c] == 0) continue;
      Rational f = m[r][c] / m[c][c];
      for (size_t j = c; j < n; ++j) m[r][j] -= f * m[c][j];
    }
  }
  return det;
}

double det_double(std::vector<std::vector<double>> m) {
  const size_t n = m.size();
  double det = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    for (size_t r = c + 1; r < n; ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    if (m[piv][c] == 0) return 0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (size_t r = c + 1; r < n; ++r) {
      double f = m[r][c] / m[c][c];
      for (size_t j = c; j < n; ++j) m[r][j] -= f * m[c][j];
    }
  }
  return det;
}

void increasing_indices(int n, int k, const std::function<void(const MultiIndex&)>& fn) {
  MultiIndex idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  if (k == 0) {
    fn(idx);
    return;
  }
  if (k > n) return;
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}
}  // namespace

Multivector Multivector::from_vectors(int n, const std::vector<std::vector<Rational>>& vectors) {
  Multivector v;
  v.n = n;
  v.k = static_cast<int>(vectors.size());
  increasing_indices(n, v.k, [&](const MultiIndex& I) {
    std::vector<std::vector<Rational>> m(v.k, std::vector<Rational>(v.k));
    for (int r = 0; r < v.k; ++r)
      for (int c = 0; c < v.k; ++c) m[r][c] = vectors[c].at(I[r]);
    Rational d = det_rational(m);
    if (d != 0) v.comps[I] = d;
  });
  return v;
}

Rational Multivector::norm_squared() const {
  Rational s(0);
  for (const auto& [I, c] : comps) s += c * c;
  return s;
}

PolyForm PolyForm::dx(int n, int i) {
  PolyForm f(n, 1);
  f.coeffs_[{i}] = Polynomial::constant(n, 1);
  return f;
}

PolyForm PolyForm::scalar(int n, const Polynomial& p) {
  PolyForm f(n, 0);
  if (!p.is_zero()) f.coeffs_[MultiIndex{}] = p;
  return f;
}

const Polynomial* PolyForm::coeff(const MultiIndex& I) const {
  auto it = coeffs_.find(I);
  return it == coeffs_.end() ? nullptr : &it->second;
}

int PolyForm::coefficient_degree() const {
  int d = -1;
  for (const auto& [I, p] : coeffs_) d = std::max(d, p.total_degree());
  return d;
}

void PolyForm::add_term(const MultiIndex& I, const Polynomial& p) {
  if (static_cast<int>(I.size()) != k_) throw Error("DegreeMismatch", "multi-index length");
  for (size_t i = 0; i < I.size(); ++i) {
    if (I[i] < 0 || I[i] >= n_) throw Error("DimensionMismatch", "index out of range");
    if (i + 1 < I.size() && I[i] >= I[i + 1])
      throw Error("DimensionMismatch", "multi-index not increasing");
  }
  if (p.nvars() != n_) throw Error("DimensionMismatch", "coefficient arity");
  auto it = coeffs_.find(I);
  if (it == coeffs_.end()) {
    if (!p.is_zero()) coeffs_[I] = p;
  } else {
    it->second = it->second + p;
    if (it->second.is_zero()) coeffs_.erase(it);
  }
}

PolyForm PolyForm::operator+(const PolyForm& o) const {
  if (n_ != o.n_ || k_ != o.k_) throw Error("DegreeMismatch", "form addition");
  PolyForm r = *this;
  for (const auto& [I, p] : o.coeffs_) r.add_term(I, p);
  return r;
}

PolyForm PolyForm::operator-(const PolyForm& o) const { return *this + (-o); }

PolyForm PolyForm::operator-() const {
  PolyForm r(n_, k_);
  for (const auto& [I, p] : coeffs_) r.coeffs_[I] = -p;
  return r;
}

PolyForm PolyForm::operator*(const Rational& c) const {
  PolyForm r(n_, k_);
  if (c == 0) return r;
  for (const auto& [I, p] : coeffs_) r.coeffs_[I] = p * c;
  return r;
}

PolyForm PolyForm::scaled(const Polynomial& p) const {
  PolyForm r(n_, k_);
  for (const auto& [I, q] : coeffs_) {
    Polynomial prod = q * p;
    if (!prod.is_zero()) r.coeffs_[I] = prod;
  }
  return r;
}

bool PolyForm::operator==(const PolyForm& o) const {
  return n_ == o.n_ && k_ == o.k_ && coeffs_ == o.coeffs_;
}

std::string PolyForm::str() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [I, p] : coeffs_) {
    if (!first) os << "  +  ";
    first = false;
    os << "(" << p.str() << ")";
    for (int i : I) os << " dx" << i;
  }
  return os.str();
}

PolyForm wedge(const PolyForm& a, const PolyForm& b) {
  if (a.ambient_dim() != b.ambient_dim())
    throw Error("DimensionMismatch", "wedge of forms on different spaces");
  int n = a.ambient_dim();
  int k = a.degree() + b.degree();
  if (k > n) return PolyForm::zero(n, k);
  PolyForm r(n, k);
  for (const auto& [I, p] : a.coeffs()) {
    for (const auto& [J, q] : b.coeffs()) {
      MultiIndex cat = I;
      cat.insert(cat.end(), J.begin(), J.end());
      MultiIndex sorted;
      int s = sort_index_sign(cat, sorted);
      if (s == 0) continue;
      r.add_term(sorted, (p * q) * Rational(s));
    }
  }
  return r;
}

PolyForm exterior_derivative(const PolyForm& w) {
  int n = w.ambient_dim();
  int k = w.degree() + 1;
  if (k > n) return PolyForm::zero(n, k);
  PolyForm r(n, k);
  for (const auto& [I, p] : w.coeffs()) {
    for (int i = 0; i < n; ++i) {
      Polynomial dp = p.derivative(i);
      if (dp.is_zero()) continue;
      MultiIndex cat;
      cat.push_back(i);
      cat.insert(cat.end(), I.begin(), I.end());
      MultiIndex sorted;
      int s = sort_index_sign(cat, sorted);
      if (s == 0) continue;
      r.add_term(sorted, dp * Rational(s));
    }
  }
  return r;
}

PolyForm pullback(const PolyMap& F, const PolyForm& w) {
  if (F.codomain_dim() != w.ambient_dim())
    throw Error("DimensionMismatch", "pullback map/form arity");
  int m = F.domain_dim;
  int k = w.degree();
  if (k > m) return PolyForm::zero(m, k);
  // dF_i as 1-forms on the domain
  std::vector<PolyForm> dF;
  dF.reserve(F.comps.size());
  for (const auto& comp : F.comps) {
    PolyForm df(m, 1);
    for (int j = 0; j < m; ++j) {
      Polynomial d = comp.derivative(j);
      if (!d.is_zero()) df.add_term({j}, d);
    }
    dF.push_back(df);
  }
  PolyForm r(m, k);
  for (const auto& [I, p] : w.coeffs()) {
    PolyForm term = PolyForm::scalar(m, p.substitute(F.comps));
    for (int idx : I) term = wedge(term, dF[idx]);
    r = r + term;
  }
  return r;
}

Rational evaluate(const PolyForm& w, const std::vector<Rational>& x, const Multivector& xi) {
  if (xi.n != w.ambient_dim() || xi.k != w.degree())
    throw Error("DimensionMismatch", "evaluate: multivector mismatch");
  Rational acc(0);
  for (const auto& [I, c] : xi.comps) {
    const Polynomial* p = w.coeff(I);
    if (p) acc += p->eval(x) * c;
  }
  return acc;
}

double evaluate(const PolyForm& w, const std::vector<double>& x, const Multivector& xi) {
  if (xi.n != w.ambient_dim() || xi.k != w.degree())
    throw Error("DimensionMismatch", "evaluate: multivector mismatch");
  double acc = 0;
  for (const auto& [I, c] : xi.comps) {
    const Polynomial* p = w.coeff(I);
    if (p) acc += p->eval(x) * to_double(c);
  }
  return acc;
}

double evaluate(const PolyForm& w, const std::vector<double>& x,
                const std::vector<std::vector<double>>& vectors) {
  if (static_cast<int>(vectors.size()) != w.degree())
    throw Error("DimensionMismatch", "evaluate: vector count != degree");
  double acc = 0;
  int k = w.degree();
  for (const auto& [I, p] : w.coeffs()) {
    std::vector<std::vector<double>> m(k, std::vector<double>(k));
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) m[r][c] = vectors[c].at(I[r]);
    double d = k == 0 ? 1.0 : det_double(m);
    if (d != 0) acc += p.eval(x) * d;
  }
  return acc;
}

}  // namespace strataforms
