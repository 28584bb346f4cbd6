#include "strataforms/cohomology.hpp"

#include <algorithm>

namespace strataforms {

void Cochain::set(const std::vector<int>& s, const Rational& v) {
  if (static_cast<int>(s.size()) != degree + 1)
    throw Error("GradingMismatch", "cochain key has wrong dimension");
  if (v == 0)
    values.erase(s);
  else
    values[s] = v;
}

Cochain Cochain::operator+(const Cochain& o) const {
  if (degree != o.degree) throw Error("GradingMismatch", "cochain addition");
  Cochain r = *this;
  for (const auto& [s, v] : o.values) {
    auto it = r.values.find(s);
    if (it == r.values.end()) {
      r.values[s] = v;
    } else {
      it->second += v;
      if (it->second == 0) r.values.erase(it);
    }
  }
  return r;
}

Cochain Cochain::operator-(const Cochain& o) const { return *this + o * Rational(-1); }

Cochain Cochain::operator*(const Rational& c) const {
  Cochain r;
  r.degree = degree;
  if (c == 0) return r;
  for (const auto& [s, v] : values) r.values[s] = v * c;
  return r;
}

Cochain coboundary(const Cochain& f, const SimplicialComplex& K) {
  for (const auto& [s, v] : f.values)
    if (!K.has(s)) throw Error("GradingMismatch", "cochain not graded over the complex");
  Cochain df;
  df.degree = f.degree + 1;
  for (const auto& s : K.simplices_of_dim(f.degree + 1)) {
    Rational acc(0);
    for (size_t i = 0; i < s.size(); ++i) {
      std::vector<int> face;
      for (size_t j = 0; j < s.size(); ++j)
        if (j != i) face.push_back(s[j]);
      Rational sign = (i % 2 == 0) ? 1 : -1;
      acc += sign * f(face);
    }
    if (acc != 0) df.values[s] = acc;
  }
  return df;
}

int BettiTable::euler_characteristic() const {
  int chi = 0;
  for (size_t k = 0; k < b.size(); ++k) chi += (k % 2 == 0 ? 1 : -1) * b[k];
  return chi;
}

BettiTable betti(const SimplicialComplex& K) {
  BettiTable table;
  int dmax = K.max_dim();
  if (dmax < 0) return table;
  std::vector<int> rank_d(dmax + 2, 0);
  for (int k = 1; k <= dmax; ++k) rank_d[k] = rank_bareiss(K.boundary_matrix(k));
  for (int k = 0; k <= dmax; ++k) {
    int nk = static_cast<int>(K.simplices_of_dim(k).size());
    table.b.push_back(nk - rank_d[k] - rank_d[k + 1]);
  }
  return table;
}

std::optional<Cochain> solve_primitive(const Cochain& f, const SimplicialComplex& K) {
  if (!coboundary(f, K).is_zero()) throw Error("NotClosed", "df != 0");
  int k = f.degree;
  if (k == 0) {
    // only f = 0 is a coboundary of (-1)-cochains
    if (f.is_zero()) return Cochain{-1, {}};
    return std::nullopt;
  }
  auto rows = K.simplices_of_dim(k);
  auto cols = K.simplices_of_dim(k - 1);
  // (dg)(s) = g(boundary s): matrix of d is the transpose of boundary_k
  RatMatrix D(rows.size(), RatVector(cols.size(), Rational(0)));
  std::map<std::vector<int>, int> col_index;
  for (size_t i = 0; i < cols.size(); ++i) col_index[cols[i]] = static_cast<int>(i);
  for (size_t r = 0; r < rows.size(); ++r) {
    const auto& s = rows[r];
    for (size_t i = 0; i < s.size(); ++i) {
      std::vector<int> face;
      for (size_t j = 0; j < s.size(); ++j)
        if (j != i) face.push_back(s[j]);
      D[r][col_index.at(face)] += (i % 2 == 0) ? 1 : -1;
    }
  }
  RatVector rhs(rows.size(), Rational(0));
  for (size_t r = 0; r < rows.size(); ++r) rhs[r] = f(rows[r]);
  auto sol = solve_linear(D, rhs);
  if (!sol) return std::nullopt;
  Cochain g;
  g.degree = k - 1;
  for (size_t c = 0; c < cols.size(); ++c)
    if ((*sol)[c] != 0) g.values[cols[c]] = (*sol)[c];
  return g;
}

FunctionalSplit split_functional(int dim_v, const RatMatrix& phi1, const RatMatrix& phi2,
                                 const RatVector& f) {
  const int w1 = static_cast<int>(phi1.size());
  const int w2 = static_cast<int>(phi2.size());
  if (static_cast<int>(f.size()) != dim_v) throw Error("DimensionMismatch", "functional arity");
  for (const auto& row : phi1)
    if (static_cast<int>(row.size()) != dim_v) throw Error("DimensionMismatch", "phi1 shape");
  for (const auto& row : phi2)
    if (static_cast<int>(row.size()) != dim_v) throw Error("DimensionMismatch", "phi2 shape");
  if (rank_bareiss(phi1) != w1 || rank_bareiss(phi2) != w2)
    throw Error("NotSurjective", "phi1 or phi2 is not surjective");

  // stacked map psi = (phi1, phi2) : V -> W1 (+) W2
  RatMatrix psi;
  psi.reserve(w1 + w2);
  for (const auto& r : phi1) psi.push_back(r);
  for (const auto& r : phi2) psi.push_back(r);

  // kernel condition: f vanishes on ker psi = ker phi1 ∩ ker phi2
  for (const auto& v : nullspace(psi)) {
    Rational fv(0);
    for (int i = 0; i < dim_v; ++i) fv += f[i] * v[i];
    if (fv != 0) throw Error("KernelConditionFails", "f does not vanish on ker phi1 ∩ ker phi2");
  }

  // columns of psi are psi(e_i); greedily select an independent spanning set
  const int w = w1 + w2;
  RatMatrix selected;            // rows = chosen basis vectors of W1 (+) W2
  std::vector<Rational> values;  // g on those vectors
  std::vector<int> preimage;     // V basis index for image columns
  auto try_add = [&](const RatVector& cand) {
    RatMatrix probe = selected;
    probe.push_back(cand);
    if (rank_bareiss(probe) == static_cast<int>(probe.size())) {
      selected = std::move(probe);
      return true;
    }
    return false;
  };
  for (int i = 0; i < dim_v && static_cast<int>(selected.size()) < w; ++i) {
    RatVector col(w);
    for (int r = 0; r < w; ++r) col[r] = psi[r][i];
    if (try_add(col)) {
      values.push_back(f[i]);
      preimage.push_back(i);
    }
  }
  // extend by standard basis vectors with g = 0 there
  for (int i = 0; i < w && static_cast<int>(selected.size()) < w; ++i) {
    RatVector e(w, Rational(0));
    e[i] = 1;
    if (try_add(e)) values.push_back(Rational(0));
  }
  if (static_cast<int>(selected.size()) != w)
    throw Error("DimensionMismatch", "could not complete basis of W1 (+) W2");

  // g is the functional with <g, basis_j> = values_j, i.e. selected * g = values
  auto g = solve_linear(selected, values);
  if (!g) throw Error("DimensionMismatch", "extension solve failed");
  FunctionalSplit out;
  out.g1.assign(g->begin(), g->begin() + w1);
  out.g2.assign(g->begin() + w1, g->end());

  // The chosen image values are consistent only because of the kernel
  // condition; verify the reconstruction on the basis of V.
  for (int i = 0; i < dim_v; ++i) {
    Rational acc(0);
    for (int r = 0; r < w1; ++r) acc += out.g1[r] * phi1[r][i];
    for (int r = 0; r < w2; ++r) acc += out.g2[r] * phi2[r][i];
    if (acc != f[i]) throw Error("KernelConditionFails", "reconstruction failed");
  }
  return out;
}

}  // namespace strataforms
