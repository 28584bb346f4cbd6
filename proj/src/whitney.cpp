#include "strataforms/whitney.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "strataforms/integrate.hpp"

namespace strataforms {

const ParametrizedCell& Triangulation::cell_of(const std::vector<int>& simplex) const {
  return cells.get(simplex_cell_id(prefix, simplex));
}

std::vector<int> Triangulation::containing_top(const std::vector<int>& s) const {
  int d = K.max_dim();
  if (static_cast<int>(s.size()) - 1 == d) return s;
  for (const auto& t : K.simplices_of_dim(d))
    if (std::includes(t.begin(), t.end(), s.begin(), s.end())) return t;
  throw Error("NotInComplex", "simplex has no containing top simplex (complex not pure?)");
}

Triangulation make_triangulation(const SimplicialComplex& K, const std::string& prefix) {
  Triangulation T;
  T.K = K;
  T.prefix = prefix;
  K.populate_catalogue(T.cells, prefix);
  int d = K.max_dim();
  for (const auto& top : K.simplices_of_dim(d)) {
    const auto& cell = T.cell_of(top);
    auto J = cell.map.jacobian(ref_barycenter(RefDomain::Simplex, d));
    RatMatrix Jr(J.size());
    for (size_t i = 0; i < J.size(); ++i) Jr[i] = J[i];
    if (rank_bareiss(Jr) != d)
      throw Error("DegenerateSimplex", "top simplex with rank-deficient geometry");
  }
  return T;
}

namespace {

// lambda_m and d lambda_m in the reference coordinates of a d-simplex
Polynomial lambda_poly(int d, int m) {
  if (m == 0) {
    Polynomial p = Polynomial::constant(d, Rational(1));
    for (int i = 0; i < d; ++i) p = p - Polynomial::variable(d, i);
    return p;
  }
  return Polynomial::variable(d, m - 1);
}

PolyForm dlambda_form(int d, int m) {
  PolyForm f(d, 1);
  if (m == 0) {
    for (int i = 0; i < d; ++i) f.add_term({i}, Polynomial::constant(d, Rational(-1)));
  } else {
    f.add_term({m - 1}, Polynomial::constant(d, Rational(1)));
  }
  return f;
}

// phi_{T,sigma} restricted to one top simplex, in reference coordinates
PolyForm elementary_on_top(const std::vector<int>& sigma, const std::vector<int>& top) {
  const int d = static_cast<int>(top.size()) - 1;
  const int j = static_cast<int>(sigma.size()) - 1;
  std::vector<int> pos;
  for (int v : sigma) {
    auto it = std::find(top.begin(), top.end(), v);
    if (it == top.end()) return PolyForm::zero(d, j);  // hats of absent vertices vanish
    pos.push_back(static_cast<int>(it - top.begin()));
  }
  Rational factorial(1);
  for (int i = 2; i <= j; ++i) factorial *= i;
  PolyForm acc(d, j);
  for (int k = 0; k <= j; ++k) {
    PolyForm term = PolyForm::scalar(d, lambda_poly(d, pos[k]));
    for (int t = 0; t <= j; ++t) {
      if (t == k) continue;
      term = wedge(term, dlambda_form(d, pos[t]));
    }
    acc = acc + term * (k % 2 == 0 ? factorial : -factorial);
  }
  return acc;
}

}  // namespace

PartitionOfUnity partition_of_unity(const Triangulation& T) {
  PartitionOfUnity pou;
  int d = T.K.max_dim();
  for (const auto& top : T.K.simplices_of_dim(d)) {
    std::vector<Polynomial> lambdas;
    for (int m = 0; m <= d; ++m) lambdas.push_back(lambda_poly(d, m));
    pou.per_top[top] = std::move(lambdas);
  }
  return pou;
}

bool ElementaryForm::is_symbolic_zero() const {
  for (const auto& [top, f] : per_top)
    if (!f.is_zero()) return false;
  return true;
}

ElementaryForm ElementaryForm::operator-(const ElementaryForm& o) const {
  if (degree != o.degree) throw Error("DegreeMismatch", "elementary form subtraction");
  ElementaryForm r = *this;
  for (const auto& [top, f] : o.per_top) {
    auto it = r.per_top.find(top);
    if (it == r.per_top.end())
      r.per_top[top] = -f;
    else
      it->second = it->second - f;
  }
  return r;
}

ElementaryForm elementary_form(const Triangulation& T, const Cochain& f) {
  for (const auto& [s, v] : f.values)
    if (!T.K.has(s)) throw Error("GradingMismatch", "cochain not graded over the complex");
  ElementaryForm e;
  e.degree = f.degree;
  int d = T.K.max_dim();
  for (const auto& top : T.K.simplices_of_dim(d)) {
    PolyForm acc(d, f.degree);
    for (const auto& [sigma, coeff] : f.values)
      acc = acc + elementary_on_top(sigma, top) * coeff;
    e.per_top[top] = std::move(acc);
  }
  return e;
}

ElementaryForm elementary_d(const ElementaryForm& e) {
  ElementaryForm r;
  r.degree = e.degree + 1;
  for (const auto& [top, f] : e.per_top) r.per_top[top] = exterior_derivative(f);
  return r;
}

CommuteReport check_commute(const Triangulation& T, const Cochain& f) {
  CommuteReport report;
  ElementaryForm lhs = elementary_d(elementary_form(T, f));
  ElementaryForm rhs = elementary_form(T, coboundary(f, T.K));
  ElementaryForm diff = lhs - rhs;
  report.exact_zero = diff.is_symbolic_zero();
  if (!report.exact_zero) {
    for (const auto& [top, g] : diff.per_top) {
      int d = static_cast<int>(top.size()) - 1;
      for (const auto& u : ref_interior_points(RefDomain::Simplex, d, 16)) {
        for (const auto& [I, p] : g.coeffs())
          report.residual = std::max(report.residual, std::abs(p.eval(u)));
      }
    }
  }
  return report;
}

double integrate_elementary(const ElementaryForm& e, const Triangulation& T,
                            const std::vector<int>& simplex, int order) {
  const int j = static_cast<int>(simplex.size()) - 1;
  if (j != e.degree) throw Error("DegreeMismatch", "simplex dim != form degree");
  auto top = T.containing_top(simplex);
  const int d = static_cast<int>(top.size()) - 1;
  const PolyForm& f = e.per_top.at(top);
  if (f.is_zero()) return 0.0;
  // inclusion of the face spanned by the positions of `simplex` in `top`
  std::vector<int> pos;
  for (int v : simplex)
    pos.push_back(static_cast<int>(std::find(top.begin(), top.end(), v) - top.begin()));
  PolyMap incl;
  incl.domain_dim = j;
  auto vertex_coord = [&](int m, int c) {  // c-th coordinate of ref vertex a_m
    return Rational(m == c + 1 ? 1 : 0);
  };
  for (int c = 0; c < d; ++c) {
    Polynomial p = Polynomial::constant(j, vertex_coord(pos[0], c));
    for (int t = 1; t <= j; ++t) {
      Rational delta = vertex_coord(pos[t], c) - vertex_coord(pos[0], c);
      if (delta != 0) p = p + Polynomial::variable(j, t - 1) * delta;
    }
    incl.comps.push_back(p);
  }
  PolyForm pb = pullback(incl, f);
  MultiIndex topidx(j);
  std::iota(topidx.begin(), topidx.end(), 0);
  const Polynomial* integrand = pb.coeff(topidx);
  if (!integrand) return 0.0;
  int use_order = order >= 0 ? std::max(order, integrand->total_degree())
                             : integrand->total_degree();
  return quadrature_rule(RefDomain::Simplex, j, std::max(0, use_order)).apply(*integrand);
}

std::map<std::vector<int>, double> derham_map(const ElementaryForm& e, const Triangulation& T,
                                              int order) {
  std::map<std::vector<int>, double> out;
  for (const auto& s : T.K.simplices_of_dim(e.degree))
    out[s] = integrate_elementary(e, T, s, order);
  return out;
}

ElementaryForm phi_T(const Triangulation& T, const Cochain& f) {
  if (!coboundary(f, T.K).is_zero()) throw Error("NotClosed", "df != 0");
  ElementaryForm e = elementary_form(T, f);
  if (!elementary_d(e).is_symbolic_zero())
    throw Error("NotClosed", "elementary form of a closed cochain failed symbolic closedness");
  return e;
}

PolyForm ambient_form(const ElementaryForm& e, const Triangulation& T,
                      const std::vector<int>& top) {
  const int d = static_cast<int>(top.size()) - 1;
  const int n = T.K.ambient_dim;
  const PolyForm& f = e.per_top.at(top);
  // affine chart x = V0 + M u; left inverse u(x) = (M^T M)^{-1} M^T (x - V0)
  RatMatrix M(n, RatVector(d));
  const auto& V0 = T.K.points.at(top[0]);
  for (int jcol = 0; jcol < d; ++jcol) {
    const auto& Vj = T.K.points.at(top[jcol + 1]);
    for (int r = 0; r < n; ++r) M[r][jcol] = Vj[r] - V0[r];
  }
  RatMatrix G(d, RatVector(d, Rational(0)));
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int r = 0; r < n; ++r) G[a][b] += M[r][a] * M[r][b];
  // L = G^{-1} M^T, solved column by column
  RatMatrix L(d, RatVector(n, Rational(0)));
  for (int c = 0; c < n; ++c) {
    RatVector rhs(d, Rational(0));
    for (int a = 0; a < d; ++a) rhs[a] = M[c][a];
    auto sol = solve_linear(G, rhs);
    if (!sol) throw Error("DegenerateSimplex", "singular Gram matrix in ambient conversion");
    for (int a = 0; a < d; ++a) L[a][c] = (*sol)[a];
  }
  // u_a(x) as ambient polynomials
  std::vector<Polynomial> u_of_x;
  for (int a = 0; a < d; ++a) {
    Polynomial p(n);
    Rational shift(0);
    for (int c = 0; c < n; ++c) {
      if (L[a][c] != 0) p = p + Polynomial::variable(n, c) * L[a][c];
      shift += L[a][c] * V0[c];
    }
    p = p - Polynomial::constant(n, shift);
    u_of_x.push_back(p);
  }
  // du_a as constant ambient 1-forms
  std::vector<PolyForm> du(d, PolyForm(n, 1));
  for (int a = 0; a < d; ++a)
    for (int c = 0; c < n; ++c)
      if (L[a][c] != 0) du[a].add_term({c}, Polynomial::constant(n, L[a][c]));

  PolyForm out(n, f.degree());
  for (const auto& [I, p] : f.coeffs()) {
    PolyForm term = PolyForm::scalar(n, p.substitute(u_of_x));
    for (int idx : I) term = wedge(term, du[idx]);
    out = out + term;
  }
  return out;
}

StratifiedForm to_stratified(const ElementaryForm& e, const Triangulation& T,
                             const Stratification& sigma) {
  StratifiedForm w;
  w.stratification = sigma.id;
  w.degree = e.degree;
  // cache ambient conversions per top simplex
  std::map<std::vector<int>, PolyForm> ambient;
  for (const auto& [top, f] : e.per_top) ambient[top] = ambient_form(e, T, top);
  for (const auto& s : T.K.simplices) {
    auto top = T.containing_top(s);
    w.components[simplex_cell_id(T.prefix, s)] = ambient.at(top);
  }
  return w;
}

PairingReport derham_pairing(const Triangulation& T, int degree, int order, unsigned seed) {
  PairingReport report;
  report.degree = degree;
  BettiTable table = betti(T.K);
  report.betti = degree < static_cast<int>(table.b.size()) ? table.b[degree] : 0;

  auto k_simplices = T.K.simplices_of_dim(degree);
  const int nk = static_cast<int>(k_simplices.size());

  // cycles: nullspace of boundary_k (for degree 0 every vertex is a cycle)
  std::vector<RatVector> cycles;
  if (degree == 0) {
    for (int i = 0; i < nk; ++i) {
      RatVector v(nk, Rational(0));
      v[i] = 1;
      cycles.push_back(v);
    }
  } else {
    cycles = nullspace(T.K.boundary_matrix(degree));
  }
  // closed cochains: nullspace of d_k = transpose(boundary_{k+1})
  std::vector<RatVector> closed;
  auto above = T.K.simplices_of_dim(degree + 1);
  if (above.empty()) {
    for (int i = 0; i < nk; ++i) {
      RatVector v(nk, Rational(0));
      v[i] = 1;
      closed.push_back(v);
    }
  } else {
    closed = nullspace(transpose(T.K.boundary_matrix(degree + 1)));
  }

  // pairing matrix by quadrature, rationalized entry-wise
  RatMatrix P(cycles.size(), RatVector(closed.size(), Rational(0)));
  for (size_t fc = 0; fc < closed.size(); ++fc) {
    Cochain f;
    f.degree = degree;
    for (int i = 0; i < nk; ++i)
      if (closed[fc][i] != 0) f.values[k_simplices[i]] = closed[fc][i];
    ElementaryForm e = phi_T(T, f);
    auto psi = derham_map(e, T, order);
    for (size_t cy = 0; cy < cycles.size(); ++cy) {
      double acc = 0;
      for (int i = 0; i < nk; ++i)
        if (cycles[cy][i] != 0) acc += to_double(cycles[cy][i]) * psi.at(k_simplices[i]);
      P[cy][fc] = rationalize(acc, 1e-8);
    }
  }
  report.pairing_rank = rank_bareiss(P);
  report.rank_matches = report.pairing_rank == report.betti;

  // chain-map residual on a few random cochains: psi(d e)(s) = psi(e)(ds)
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dist(-3, 3);
  if (!above.empty()) {
    for (int trial = 0; trial < 3; ++trial) {
      Cochain f;
      f.degree = degree;
      for (int i = 0; i < nk; ++i) {
        int v = dist(rng);
        if (v != 0) f.values[k_simplices[i]] = Rational(v);
      }
      ElementaryForm e = elementary_form(T, f);
      ElementaryForm de = elementary_d(e);
      for (const auto& s : above) {
        double lhs = integrate_elementary(de, T, s, order);
        double rhs = 0;
        for (size_t i = 0; i < s.size(); ++i) {
          std::vector<int> face;
          for (size_t j2 = 0; j2 < s.size(); ++j2)
            if (j2 != i) face.push_back(s[j2]);
          rhs += (i % 2 == 0 ? 1.0 : -1.0) * integrate_elementary(e, T, face, order);
        }
        report.chain_map_residual = std::max(report.chain_map_residual, std::abs(lhs - rhs));
      }
    }
  }
  return report;
}

}  // namespace strataforms
