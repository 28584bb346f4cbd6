#include "strataforms/cells.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "strataforms/linalg.hpp"

namespace strataforms {

void CellCatalogue::add(ParametrizedCell cell) {
  if (cell.map.domain_dim != cell.dim)
    throw Error("DimensionMismatch", "cell map arity != cell dim: " + cell.id);
  if (cell.map.codomain_dim() != cell.ambient_dim)
    throw Error("DimensionMismatch", "cell map codomain != ambient dim: " + cell.id);
  cells_[cell.id] = std::move(cell);
}

const ParametrizedCell& CellCatalogue::get(const std::string& id) const {
  auto it = cells_.find(id);
  if (it == cells_.end()) throw Error("MissingCell", "no cell with id '" + id + "'");
  return it->second;
}

PolyMap simplex_face_map(int k, int i) {
  // Vertices of the standard simplex: a_0 = 0, a_j = e_j. The face drops a_i.
  std::vector<std::vector<Rational>> verts;
  for (int j = 0; j <= k; ++j) {
    if (j == i) continue;
    std::vector<Rational> v(k, Rational(0));
    if (j > 0) v[j - 1] = 1;
    verts.push_back(v);
  }
  PolyMap f;
  f.domain_dim = k - 1;
  for (int c = 0; c < k; ++c) {
    Polynomial p = Polynomial::constant(k - 1, verts[0][c]);
    for (int j = 1; j < static_cast<int>(verts.size()); ++j) {
      Rational delta = verts[j][c] - verts[0][c];
      if (delta != 0) p = p + Polynomial::variable(k - 1, j - 1) * delta;
    }
    f.comps.push_back(p);
  }
  return f;
}

PolyMap box_face_map(int k, int j, int a) {
  PolyMap f;
  f.domain_dim = k - 1;
  int src = 0;
  for (int c = 0; c < k; ++c) {
    if (c == j) {
      f.comps.push_back(Polynomial::constant(k - 1, Rational(a)));
    } else {
      f.comps.push_back(Polynomial::variable(k - 1, src));
      ++src;
    }
  }
  return f;
}

Rational ref_volume(RefDomain d, int k) {
  if (k == 0) return Rational(1);
  if (d == RefDomain::Box) return Rational(1);
  Rational f(1);
  for (int i = 2; i <= k; ++i) f *= i;
  return Rational(1) / f;
}

std::vector<Rational> ref_barycenter(RefDomain d, int k) {
  if (d == RefDomain::Box) return std::vector<Rational>(k, Rational(1, 2));
  return std::vector<Rational>(k, Rational(1, k + 1));
}

std::vector<double> ref_barycenter_d(RefDomain d, int k) {
  auto b = ref_barycenter(d, k);
  std::vector<double> r(b.size());
  for (size_t i = 0; i < b.size(); ++i) r[i] = to_double(b[i]);
  return r;
}

bool ref_contains(RefDomain d, int k, const std::vector<double>& u, double slack) {
  double s = 0;
  for (int i = 0; i < k; ++i) {
    if (u[i] < -slack) return false;
    if (d == RefDomain::Box && u[i] > 1 + slack) return false;
    s += u[i];
  }
  if (d == RefDomain::Simplex && s > 1 + slack) return false;
  return true;
}

namespace {
void subsets_of_size(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
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

std::vector<PolyMap> ref_face_maps(RefDomain d, int k, int j) {
  std::vector<PolyMap> maps;
  if (j < 0 || j > k) return maps;
  if (j == k) {
    maps.push_back(PolyMap::identity(k));
    return maps;
  }
  if (d == RefDomain::Simplex) {
    // faces = affine hulls of (j+1)-subsets of the k+1 vertices
    std::vector<std::vector<Rational>> verts;
    for (int v = 0; v <= k; ++v) {
      std::vector<Rational> p(k, Rational(0));
      if (v > 0) p[v - 1] = 1;
      verts.push_back(p);
    }
    subsets_of_size(k + 1, j + 1, [&](const std::vector<int>& sel) {
      PolyMap f;
      f.domain_dim = j;
      for (int c = 0; c < k; ++c) {
        Polynomial p = Polynomial::constant(j, verts[sel[0]][c]);
        for (int t = 1; t <= j; ++t) {
          Rational delta = verts[sel[t]][c] - verts[sel[0]][c];
          if (delta != 0) p = p + Polynomial::variable(j, t - 1) * delta;
        }
        f.comps.push_back(p);
      }
      maps.push_back(std::move(f));
    });
  } else {
    // fix k-j axes at 0 or 1
    subsets_of_size(k, k - j, [&](const std::vector<int>& fixed) {
      int patterns = 1 << (k - j);
      for (int pat = 0; pat < patterns; ++pat) {
        PolyMap f;
        f.domain_dim = j;
        int src = 0;
        for (int c = 0; c < k; ++c) {
          auto pos = std::find(fixed.begin(), fixed.end(), c);
          if (pos != fixed.end()) {
            int bit = (pat >> (pos - fixed.begin())) & 1;
            f.comps.push_back(Polynomial::constant(j, Rational(bit)));
          } else {
            f.comps.push_back(Polynomial::variable(j, src));
            ++src;
          }
        }
        maps.push_back(std::move(f));
      }
    });
  }
  return maps;
}

namespace {
double halton_1d(int index, int base) {
  double f = 1.0, r = 0.0;
  int i = index;
  while (i > 0) {
    f /= base;
    r += f * (i % base);
    i /= base;
  }
  return r;
}
const int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19};
}  // namespace

std::vector<double> halton_point(RefDomain d, int k, int index) {
  std::vector<double> u(k);
  for (int i = 0; i < k; ++i) u[i] = halton_1d(index + 1, kPrimes[i % 8]);
  if (d == RefDomain::Simplex && k > 0) {
    // order statistics: sorted box coordinates -> uniform simplex point
    std::vector<double> s = u;
    std::sort(s.begin(), s.end());
    double prev = 0;
    for (int i = 0; i < k; ++i) {
      u[i] = s[i] - prev;
      prev = s[i];
    }
  }
  return u;
}

std::vector<std::vector<double>> ref_interior_points(RefDomain d, int k, int count) {
  std::vector<std::vector<double>> pts;
  if (k == 0) {
    pts.push_back({});
    return pts;
  }
  pts.reserve(count);
  auto bary = ref_barycenter_d(d, k);
  for (int i = 0; i < count; ++i) {
    auto u = halton_point(d, k, i);
    // pull slightly toward the barycenter so samples stay interior
    for (int j = 0; j < k; ++j) u[j] = bary[j] + (u[j] - bary[j]) * (1 - 1e-3);
    pts.push_back(std::move(u));
  }
  return pts;
}

// ---- distance ----

namespace {

double norm2(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return s;
}

std::vector<double> to_doubles(const std::vector<Rational>& v) {
  std::vector<double> r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = to_double(v[i]);
  return r;
}

// Exact distance for affine simplex cells: least squares on each face's
// affine hull, keeping feasible (barycentric >= 0) candidates.
DistanceResult affine_simplex_distance(const std::vector<double>& p,
                                       const ParametrizedCell& cell) {
  int k = cell.dim;
  int n = cell.ambient_dim;
  // vertex images, exact
  std::vector<std::vector<Rational>> V;
  for (int v = 0; v <= k; ++v) {
    std::vector<Rational> u(k, Rational(0));
    if (v > 0) u[v - 1] = 1;
    V.push_back(cell.map.eval(u));
  }
  std::vector<Rational> pr(p.size());
  for (size_t i = 0; i < p.size(); ++i) pr[i] = Rational(p[i]);

  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_param(k, 0.0);
  for (int fsz = 1; fsz <= k + 1; ++fsz) {
    subsets_of_size(k + 1, fsz, [&](const std::vector<int>& sel) {
      // minimize |V[sel0] + sum mu_t (V[sel_t]-V[sel0]) - p|^2
      int m = fsz - 1;
      RatMatrix A(n, RatVector(std::max(m, 1), Rational(0)));
      RatVector rhs(n);
      for (int r = 0; r < n; ++r) {
        for (int t = 0; t < m; ++t) A[r][t] = V[sel[t + 1]][r] - V[sel[0]][r];
        rhs[r] = pr[r] - V[sel[0]][r];
      }
      RatVector mu(m, Rational(0));
      if (m > 0) {
        // normal equations A^T A mu = A^T rhs
        RatMatrix At = transpose(A);
        RatMatrix G(m, RatVector(m, Rational(0)));
        RatVector g(m, Rational(0));
        for (int i = 0; i < m; ++i) {
          for (int j = 0; j < m; ++j)
            for (int r = 0; r < n; ++r) G[i][j] += At[i][r] * At[j][r];
          for (int r = 0; r < n; ++r) g[i] += At[i][r] * rhs[r];
        }
        auto sol = solve_linear(G, g);
        if (!sol) return;  // degenerate face; skip
        mu = *sol;
      }
      // feasibility: barycentric coords nonnegative
      Rational s(0);
      for (const auto& q : mu) {
        if (q < 0) return;
        s += q;
      }
      if (s > 1) return;
      // residual
      Rational d2(0);
      for (int r = 0; r < n; ++r) {
        Rational resid = rhs[r];
        for (int t = 0; t < m; ++t) resid -= A[r][t] * mu[t];
        d2 += resid * resid;
      }
      double dist = std::sqrt(to_double(d2));
      if (dist < best) {
        best = dist;
        // reference parameter: lambda on selected vertices
        std::vector<Rational> lam(k + 1, Rational(0));
        lam[sel[0]] = 1 - s;
        for (int t = 0; t < m; ++t) lam[sel[t + 1]] = mu[t];
        for (int i = 0; i < k; ++i) best_param[i] = to_double(lam[i + 1]);
      }
    });
  }
  return {best, best_param};
}

DistanceResult affine_box_distance(const std::vector<double>& p, const ParametrizedCell& cell) {
  int k = cell.dim;
  int n = cell.ambient_dim;
  std::vector<Rational> pr(p.size());
  for (size_t i = 0; i < p.size(); ++i) pr[i] = Rational(p[i]);
  // affine map u -> b + M u, exact
  std::vector<Rational> zero(k, Rational(0));
  RatVector b = cell.map.eval(zero);
  RatMatrix M(n, RatVector(k, Rational(0)));
  for (int j = 0; j < k; ++j) {
    std::vector<Rational> e(k, Rational(0));
    e[j] = 1;
    RatVector col = cell.map.eval(e);
    for (int r = 0; r < n; ++r) M[r][j] = col[r] - b[r];
  }
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_param(k, 0.0);
  int patterns = 1;
  for (int i = 0; i < k; ++i) patterns *= 3;  // 0, 1, free
  for (int pat = 0; pat < patterns; ++pat) {
    std::vector<int> state(k);
    int pp = pat;
    for (int i = 0; i < k; ++i) {
      state[i] = pp % 3;
      pp /= 3;
    }
    std::vector<int> freev;
    RatVector u(k, Rational(0));
    for (int i = 0; i < k; ++i) {
      if (state[i] == 2)
        freev.push_back(i);
      else
        u[i] = Rational(state[i]);
    }
    int m = static_cast<int>(freev.size());
    if (m > 0) {
      RatMatrix G(m, RatVector(m, Rational(0)));
      RatVector g(m, Rational(0));
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j)
          for (int r = 0; r < n; ++r) G[i][j] += M[r][freev[i]] * M[r][freev[j]];
        for (int r = 0; r < n; ++r) {
          Rational resid = pr[r] - b[r];
          for (int c = 0; c < k; ++c)
            if (state[c] != 2) resid -= M[r][c] * u[c];
          g[i] += M[r][freev[i]] * resid;
        }
      }
      auto sol = solve_linear(G, g);
      if (!sol) continue;
      bool feasible = true;
      for (int i = 0; i < m; ++i) {
        if ((*sol)[i] < 0 || (*sol)[i] > 1) {
          feasible = false;
          break;
        }
        u[freev[i]] = (*sol)[i];
      }
      if (!feasible) continue;
    }
    Rational d2(0);
    for (int r = 0; r < n; ++r) {
      Rational resid = pr[r] - b[r];
      for (int c = 0; c < k; ++c) resid -= M[r][c] * u[c];
      d2 += resid * resid;
    }
    double dist = std::sqrt(to_double(d2));
    if (dist < best) {
      best = dist;
      for (int i = 0; i < k; ++i) best_param[i] = to_double(u[i]);
    }
  }
  return {best, best_param};
}

void project_ref(RefDomain d, int k, std::vector<double>& u) {
  for (int i = 0; i < k; ++i) u[i] = std::max(0.0, d == RefDomain::Box ? std::min(1.0, u[i]) : u[i]);
  if (d == RefDomain::Simplex) {
    double s = std::accumulate(u.begin(), u.end(), 0.0);
    // alternate clamping and hyperplane projection; converges fast at desk scale
    for (int round = 0; round < 40 && s > 1 + 1e-15; ++round) {
      double shift = (s - 1) / k;
      for (int i = 0; i < k; ++i) u[i] = std::max(0.0, u[i] - shift);
      s = std::accumulate(u.begin(), u.end(), 0.0);
    }
  }
}

DistanceResult gradient_distance(const std::vector<double>& p, const ParametrizedCell& cell) {
  // projected Levenberg-Marquardt with multistart
  int k = cell.dim;
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_param(k, 0.0);
  std::vector<std::vector<double>> starts = ref_interior_points(cell.domain, k, 12);
  auto face_maps = ref_face_maps(cell.domain, k, 0);
  for (const auto& fm : face_maps) starts.push_back(to_doubles(fm.eval(std::vector<Rational>{})));
  for (auto u : starts) {
    double lambda = 1e-6;
    double f0;
    {
      auto y = cell.map.eval(u);
      f0 = 0;
      for (size_t i = 0; i < y.size(); ++i) f0 += (y[i] - p[i]) * (y[i] - p[i]);
    }
    for (int it = 0; it < 200; ++it) {
      auto y = cell.map.eval(u);
      std::vector<double> r(y.size());
      for (size_t i = 0; i < y.size(); ++i) r[i] = y[i] - p[i];
      auto J = cell.map.jacobian(u);
      // normal equations (J^T J + lambda I) d = -J^T r
      std::vector<std::vector<double>> A(k, std::vector<double>(k, 0.0));
      std::vector<double> g(k, 0.0);
      for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b)
          for (size_t i = 0; i < r.size(); ++i) A[a][b] += J[i][a] * J[i][b];
        for (size_t i = 0; i < r.size(); ++i) g[a] += J[i][a] * r[i];
      }
      if (std::sqrt(norm2(g)) < 1e-15) break;
      bool improved = false;
      for (int damp = 0; damp < 12 && !improved; ++damp) {
        auto M = A;
        for (int a = 0; a < k; ++a) M[a][a] += lambda;
        // solve M d = -g by Gaussian elimination
        std::vector<double> d = g;
        std::vector<std::vector<double>> W = M;
        for (int c = 0; c < k; ++c) {
          int piv = c;
          for (int rr = c + 1; rr < k; ++rr)
            if (std::abs(W[rr][c]) > std::abs(W[piv][c])) piv = rr;
          std::swap(W[piv], W[c]);
          std::swap(d[piv], d[c]);
          for (int rr = c + 1; rr < k; ++rr) {
            double fpiv = W[rr][c] / W[c][c];
            for (int cc = c; cc < k; ++cc) W[rr][cc] -= fpiv * W[c][cc];
            d[rr] -= fpiv * d[c];
          }
        }
        for (int c = k - 1; c >= 0; --c) {
          for (int cc = c + 1; cc < k; ++cc) d[c] -= W[c][cc] * d[cc];
          d[c] /= W[c][c];
        }
        std::vector<double> cand(k);
        for (int a = 0; a < k; ++a) cand[a] = u[a] - d[a];
        project_ref(cell.domain, k, cand);
        auto yc = cell.map.eval(cand);
        double fc = 0;
        for (size_t i = 0; i < yc.size(); ++i) fc += (yc[i] - p[i]) * (yc[i] - p[i]);
        if (fc < f0) {
          u = cand;
          f0 = fc;
          lambda = std::max(1e-12, lambda * 0.3);
          improved = true;
        } else {
          lambda *= 10;
        }
      }
      if (!improved) break;
      if (f0 < 1e-26) break;
    }
    if (std::sqrt(f0) < best) {
      best = std::sqrt(f0);
      best_param = u;
    }
  }
  return {best, best_param};
}

}  // namespace

DistanceResult distance_to_cell(const std::vector<double>& point, const ParametrizedCell& cell) {
  if (static_cast<int>(point.size()) != cell.ambient_dim)
    throw Error("DimensionMismatch", "distance_to_cell point arity");
  if (cell.dim == 0) {
    auto y = cell.map.eval(std::vector<double>{});
    double d2 = 0;
    for (size_t i = 0; i < y.size(); ++i) d2 += (y[i] - point[i]) * (y[i] - point[i]);
    return {std::sqrt(d2), {}};
  }
  if (cell.map.is_affine()) {
    return cell.domain == RefDomain::Simplex ? affine_simplex_distance(point, cell)
                                             : affine_box_distance(point, cell);
  }
  return gradient_distance(point, cell);
}

CellAudit audit_cell(const ParametrizedCell& cell, const CellCatalogue& cat, int samples,
                     double tol) {
  CellAudit audit;
  int k = cell.dim;
  // rank of the differential at interior samples
  if (k > 0) {
    for (const auto& u : ref_interior_points(cell.domain, k, samples)) {
      auto J = cell.map.jacobian(u);
      // Gram determinant > 0 iff rank k
      std::vector<std::vector<double>> G(k, std::vector<double>(k, 0.0));
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
          for (size_t r = 0; r < J.size(); ++r) G[a][b] += J[r][a] * J[r][b];
      double det = 1;
      for (int c = 0; c < k; ++c) {
        int piv = c;
        for (int r = c + 1; r < k; ++r)
          if (std::abs(G[r][c]) > std::abs(G[piv][c])) piv = r;
        if (std::abs(G[piv][c]) < 1e-14) {
          det = 0;
          break;
        }
        std::swap(G[piv], G[c]);
        det *= G[c][c];
        for (int r = c + 1; r < k; ++r) {
          double f = G[r][c] / G[c][c];
          for (int j = c; j < k; ++j) G[r][j] -= f * G[c][j];
        }
      }
      if (std::abs(det) < 1e-14) {
        audit.rank_ok = false;
        audit.detail = "rank-deficient differential in cell " + cell.id;
        break;
      }
    }
  }
  // declared faces must agree with restrictions to reference facets
  int nfacets = cell.domain == RefDomain::Simplex ? k + 1 : 2 * k;
  if (!cell.faces.empty() && static_cast<int>(cell.faces.size()) == nfacets && k > 0) {
    for (int i = 0; i < nfacets; ++i) {
      const auto& [fid, sign] = cell.faces[i];
      (void)sign;
      if (!cat.has(fid)) continue;
      const auto& face_cell = cat.get(fid);
      PolyMap facet = cell.domain == RefDomain::Simplex
                          ? simplex_face_map(k, i)
                          : box_face_map(k, i / 2, i % 2);
      for (const auto& u : ref_interior_points(cell.domain, k - 1, std::max(2, samples / 2))) {
        std::vector<Rational> ur(u.size());
        for (size_t t = 0; t < u.size(); ++t) ur[t] = Rational(u[t]);
        auto q = cell.map.eval(to_doubles(facet.eval(ur)));
        double gap = distance_to_cell(q, face_cell).distance;
        audit.max_face_gap = std::max(audit.max_face_gap, gap);
        if (gap > tol) {
          audit.faces_ok = false;
          audit.detail = "face " + fid + " does not match facet of " + cell.id;
        }
      }
    }
  }
  return audit;
}

}  // namespace strataforms
