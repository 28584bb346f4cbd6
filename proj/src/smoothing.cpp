#include "strataforms/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <set>

namespace strataforms {

long GridForm::node_count() const {
  long c = 1;
  for (int r : res) c *= r;
  return c;
}

std::vector<double> GridForm::node_point(long flat) const {
  std::vector<double> p(n());
  for (int a = 0; a < n(); ++a) {
    int i = static_cast<int>(flat % res[a]);
    flat /= res[a];
    p[a] = box[a][0] + i * h(a);
  }
  return p;
}

long GridForm::flat_index(const std::vector<int>& idx) const {
  long flat = 0;
  for (int a = n() - 1; a >= 0; --a) flat = flat * res[a] + idx[a];
  return flat;
}

namespace {
void all_indices(int n, int k, const std::function<void(const MultiIndex&)>& fn) {
  MultiIndex idx(k);
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

GridForm sample_polyform(const PolyForm& w, const std::vector<std::array<double, 2>>& box,
                         const std::vector<int>& res, bool with_derivative) {
  GridForm g;
  g.box = box;
  g.res = res;
  g.degree = w.degree();
  for (int r : res)
    if (r < 4) throw Error("BadParameter", "grid resolution must be at least 4 per axis");
  long count = g.node_count();
  all_indices(g.n(), g.degree, [&](const MultiIndex& I) {
    std::vector<double> values(count, 0.0);
    const Polynomial* p = w.coeff(I);
    if (p)
      for (long f = 0; f < count; ++f) values[f] = p->eval(g.node_point(f));
    g.comps[I] = std::move(values);
  });
  if (with_derivative && w.degree() < w.ambient_dim()) {
    g.analytic_d =
        std::make_shared<GridForm>(sample_polyform(exterior_derivative(w), box, res, false));
  }
  return g;
}

MollifierStencil mollifier_stencil(const Mollifier& m, const GridForm& grid) {
  MollifierStencil st;
  const int n = grid.n();
  double hvol = 1;
  std::vector<int> reach(n);
  for (int a = 0; a < n; ++a) {
    double h = grid.h(a);
    hvol *= h;
    reach[a] = static_cast<int>(std::floor(m.radius / h));
  }
  std::vector<int> off(n, 0);
  std::function<void(int)> rec = [&](int axis) {
    if (axis == n) {
      double r2 = 0;
      for (int a = 0; a < n; ++a) {
        double d = off[a] * grid.h(a) / m.radius;
        r2 += d * d;
      }
      if (r2 < 1.0) {
        st.offsets.push_back(off);
        st.weights.push_back(std::exp(-1.0 / (1.0 - r2)));
      }
      return;
    }
    for (off[axis] = -reach[axis]; off[axis] <= reach[axis]; ++off[axis]) rec(axis + 1);
    off[axis] = 0;
  };
  rec(0);
  double mass = 0;
  for (double w : st.weights) mass += w * hvol;
  for (double& w : st.weights) w = w * hvol / mass;
  // audits: unit mass and evenness
  double total = 0;
  for (double w : st.weights) total += w;
  if (std::abs(total - 1.0) > 1e-10) throw Error("MollifierAudit", "stencil mass != 1");
  for (size_t i = 0; i < st.offsets.size(); ++i) {
    std::vector<int> neg = st.offsets[i];
    for (int& c : neg) c = -c;
    auto it = std::find(st.offsets.begin(), st.offsets.end(), neg);
    if (it == st.offsets.end() ||
        std::abs(st.weights[i] - st.weights[it - st.offsets.begin()]) > 1e-12)
      throw Error("MollifierAudit", "stencil is not even");
  }
  return st;
}

GridForm convolve(const GridForm& w, const Mollifier& m) {
  const int n = w.n();
  for (int a = 0; a < n; ++a)
    if (m.radius >= 0.5 * (w.box[a][1] - w.box[a][0]))
      throw Error("RadiusTooLarge", "mollifier radius must be under half the shortest side");
  MollifierStencil st = mollifier_stencil(m, w);
  GridForm out;
  out.degree = w.degree;
  out.box.resize(n);
  out.res.resize(n);
  std::vector<int> margin(n);
  for (int a = 0; a < n; ++a) {
    margin[a] = static_cast<int>(std::ceil(m.radius / w.h(a) - 1e-12));
    out.box[a] = {w.box[a][0] + margin[a] * w.h(a), w.box[a][1] - margin[a] * w.h(a)};
    out.res[a] = w.res[a] - 2 * margin[a];
    if (out.res[a] < 2) throw Error("RadiusTooLarge", "inset grid is empty");
  }
  long count = out.node_count();
  for (const auto& [I, values] : w.comps) {
    std::vector<double> result(count, 0.0);
    for (long f = 0; f < count; ++f) {
      // index in the source grid
      std::vector<int> idx(n);
      long rem = f;
      for (int a = 0; a < n; ++a) {
        idx[a] = static_cast<int>(rem % out.res[a]) + margin[a];
        rem /= out.res[a];
      }
      double acc = 0;
      for (size_t s = 0; s < st.offsets.size(); ++s) {
        std::vector<int> src(n);
        bool inside = true;
        for (int a = 0; a < n; ++a) {
          src[a] = idx[a] - st.offsets[s][a];
          if (src[a] < 0 || src[a] >= w.res[a]) {
            inside = false;
            break;
          }
        }
        if (inside) acc += st.weights[s] * values[w.flat_index(src)];
      }
      result[f] = acc;
    }
    out.comps[I] = std::move(result);
  }
  return out;
}

GridForm form_convolve(const GridForm& a, const GridForm& b) {
  if (a.box != b.box || a.res != b.res)
    throw Error("DimensionMismatch", "form_convolve needs a common grid");
  const int n = a.n();
  GridForm out;
  out.box = a.box;
  out.res = a.res;
  out.degree = a.degree + b.degree;
  if (out.degree > n) return out;
  double hvol = 1;
  for (int ax = 0; ax < n; ++ax) hvol *= a.h(ax);
  long count = a.node_count();
  for (const auto& [I, av] : a.comps) {
    for (const auto& [J, bv] : b.comps) {
      MultiIndex cat = I;
      cat.insert(cat.end(), J.begin(), J.end());
      MultiIndex sorted;
      int sign = sort_index_sign(cat, sorted);
      if (sign == 0) continue;
      auto& res = out.comps[sorted];
      if (res.empty()) res.assign(count, 0.0);
      // (a_I * b_J)(x) = sum_y a(y) b(x - y) h^n with zero padding
      for (long fx = 0; fx < count; ++fx) {
        std::vector<int> xi(n);
        long rem = fx;
        for (int ax = 0; ax < n; ++ax) {
          xi[ax] = static_cast<int>(rem % a.res[ax]);
          rem /= a.res[ax];
        }
        double acc = 0;
        for (long fy = 0; fy < count; ++fy) {
          std::vector<int> yi(n);
          long remy = fy;
          bool ok = true;
          for (int ax = 0; ax < n; ++ax) {
            yi[ax] = static_cast<int>(remy % a.res[ax]);
            remy /= a.res[ax];
            int d = xi[ax] - yi[ax];
            // b is indexed relative to the box origin: offset index
            if (d < 0 || d >= a.res[ax]) {
              ok = false;
              break;
            }
            yi[ax] = d;  // reuse as b-index
          }
          if (ok) acc += av[fy] * bv[b.flat_index(yi)];
        }
        res[fx] += sign * acc * hvol;
      }
    }
  }
  return out;
}

GridForm discrete_d(const GridForm& w) {
  const int n = w.n();
  GridForm out;
  out.degree = w.degree + 1;
  out.box.resize(n);
  out.res.resize(n);
  for (int a = 0; a < n; ++a) {
    out.box[a] = {w.box[a][0] + w.h(a), w.box[a][1] - w.h(a)};
    out.res[a] = w.res[a] - 2;
    if (out.res[a] < 2) throw Error("BadParameter", "grid too small for differencing");
  }
  if (out.degree > n) return out;
  long count = out.node_count();
  all_indices(n, out.degree, [&](const MultiIndex& K) { out.comps[K].assign(count, 0.0); });
  for (const auto& [I, values] : w.comps) {
    for (int axis = 0; axis < n; ++axis) {
      MultiIndex cat;
      cat.push_back(axis);
      cat.insert(cat.end(), I.begin(), I.end());
      MultiIndex sorted;
      int sign = sort_index_sign(cat, sorted);
      if (sign == 0) continue;
      auto& res = out.comps[sorted];
      double inv2h = 1.0 / (2 * w.h(axis));
      for (long f = 0; f < count; ++f) {
        std::vector<int> idx(n);
        long rem = f;
        for (int a = 0; a < n; ++a) {
          idx[a] = static_cast<int>(rem % out.res[a]) + 1;
          rem /= out.res[a];
        }
        auto up = idx, dn = idx;
        up[axis] += 1;
        dn[axis] -= 1;
        res[f] += sign * (values[w.flat_index(up)] - values[w.flat_index(dn)]) * inv2h;
      }
    }
  }
  return out;
}

namespace {
// alignment of node lattices: offset of b's origin inside a's lattice
bool common_window(const GridForm& a, const GridForm& b, std::vector<int>& a_off,
                   std::vector<int>& b_off, std::vector<int>& extent) {
  const int n = a.n();
  a_off.assign(n, 0);
  b_off.assign(n, 0);
  extent.assign(n, 0);
  for (int ax = 0; ax < n; ++ax) {
    double h = a.h(ax);
    if (std::abs(h - b.h(ax)) > 1e-12) return false;
    double lo = std::max(a.box[ax][0], b.box[ax][0]);
    double hi = std::min(a.box[ax][1], b.box[ax][1]);
    if (hi < lo) return false;
    a_off[ax] = static_cast<int>(std::lround((lo - a.box[ax][0]) / h));
    b_off[ax] = static_cast<int>(std::lround((lo - b.box[ax][0]) / h));
    extent[ax] = static_cast<int>(std::lround((hi - lo) / h)) + 1;
  }
  return true;
}
}  // namespace

double grid_sup_diff(const GridForm& a, const GridForm& b) {
  std::vector<int> a_off, b_off, extent;
  if (a.degree != b.degree || !common_window(a, b, a_off, b_off, extent))
    throw Error("DimensionMismatch", "grids are not comparable");
  const int n = a.n();
  double sup = 0;
  std::set<MultiIndex> keys;
  for (const auto& [I, v] : a.comps) keys.insert(I);
  for (const auto& [I, v] : b.comps) keys.insert(I);
  std::vector<int> idx(n, 0);
  for (const auto& I : keys) {
    const std::vector<double>* av = a.comps.count(I) ? &a.comps.at(I) : nullptr;
    const std::vector<double>* bv = b.comps.count(I) ? &b.comps.at(I) : nullptr;
    std::fill(idx.begin(), idx.end(), 0);
    while (true) {
      std::vector<int> ai(n), bi(n);
      for (int ax = 0; ax < n; ++ax) {
        ai[ax] = idx[ax] + a_off[ax];
        bi[ax] = idx[ax] + b_off[ax];
      }
      double va = av ? (*av)[a.flat_index(ai)] : 0.0;
      double vb = bv ? (*bv)[b.flat_index(bi)] : 0.0;
      sup = std::max(sup, std::abs(va - vb));
      int ax = 0;
      while (ax < n && ++idx[ax] == extent[ax]) {
        idx[ax] = 0;
        ++ax;
      }
      if (ax == n) break;
    }
  }
  return sup;
}

double grid_sup(const GridForm& a) {
  double sup = 0;
  for (const auto& [I, v] : a.comps)
    for (double x : v) sup = std::max(sup, std::abs(x));
  return sup;
}

ConvolutionIdentitiesReport check_convolution_identities(const GridForm& alpha,
                                                         const GridForm& beta,
                                                         const Mollifier& m, double C) {
  ConvolutionIdentitiesReport report;
  report.grid_step = alpha.h(0);
  // (1) alpha*beta = (-1)^{jk} beta*alpha
  GridForm ab = form_convolve(alpha, beta);
  GridForm ba = form_convolve(beta, alpha);
  int jk = alpha.degree * beta.degree;
  for (auto& [I, v] : ba.comps)
    if (jk % 2 == 1)
      for (double& x : v) x = -x;
  report.commutation_residual = grid_sup_diff(ab, ba);
  // (2) d(alpha * phi_eps) = (d alpha) * phi_eps, with the analytic derivative
  // when the sample carries one
  GridForm smoothed = convolve(alpha, m);
  GridForm lhs = discrete_d(smoothed);
  GridForm rhs = alpha.analytic_d ? convolve(*alpha.analytic_d, m)
                                  : convolve(discrete_d(alpha), m);
  report.derivative_residual = grid_sup_diff(lhs, rhs);
  double h2 = report.grid_step * report.grid_step;
  report.pass = report.commutation_residual <= C * h2 && report.derivative_residual <= C * h2;
  return report;
}

WeakDerivativeReport weak_derivative_residual(const StratifiedForm& w,
                                              const Stratification& sigma,
                                              const CellCatalogue& cat,
                                              const PolyForm& candidate, int testforms,
                                              unsigned seed, double tol) {
  WeakDerivativeReport report;
  const int n = sigma.ambient_dim;
  const int k = w.degree;
  const int test_degree = n - k - 1;
  if (test_degree < 0) throw Error("DegreeMismatch", "no test forms in this codimension");

  // bounding box of the top strata (assumed to tile a box)
  std::vector<std::array<double, 2>> box(n, {1e300, -1e300});
  std::vector<std::string> top;
  for (const auto& [sid, s] : sigma.strata) {
    if (s.dim != n) continue;
    top.push_back(sid);
    const auto& cell = cat.get(s.cell);
    for (const auto& corner : ref_face_maps(cell.domain, cell.dim, 0)) {
      auto p = cell.map.eval(corner.eval(std::vector<Rational>{}));
      for (int a = 0; a < n; ++a) {
        box[a][0] = std::min(box[a][0], to_double(p[a]));
        box[a][1] = std::max(box[a][1], to_double(p[a]));
      }
    }
  }
  if (top.empty()) throw Error("MissingStratum", "no top-dimensional strata");

  // polynomial bump vanishing to second order on the box boundary
  Polynomial bump = Polynomial::constant(n, Rational(1));
  for (int a = 0; a < n; ++a) {
    Polynomial xa = Polynomial::variable(n, a);
    Polynomial lo = xa - Polynomial::constant(n, Rational(box[a][0]));
    Polynomial hi = Polynomial::constant(n, Rational(box[a][1])) - xa;
    bump = bump * lo * lo * hi * hi;
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> cnum(-3, 3), cden(1, 2);
  double worst = 0;
  for (int trial = 0; trial < testforms; ++trial) {
    PolyForm phi(n, test_degree);
    all_indices(n, test_degree, [&](const MultiIndex& J) {
      Polynomial p(n);
      for (int t = 0; t < 2; ++t) {
        Polynomial::Exponents e(n, 0);
        for (int a = 0; a < n; ++a) e[a] = rng() % 3;
        p.add_term(e, Rational(cnum(rng), cden(rng)));
      }
      phi.add_term(J, p * bump);
    });
    PolyForm dphi = exterior_derivative(phi);
    double lhs = 0, rhs = 0;
    for (const auto& sid : top) {
      const auto& s = sigma.get(sid);
      const auto& cell = cat.get(s.cell);
      lhs += integrate_cell(wedge(candidate, phi), cell);
      rhs += integrate_cell(wedge(w.component(sid), dphi), cell);
    }
    double sign = (k + 1) % 2 == 0 ? 1.0 : -1.0;
    double residual = std::abs(lhs - sign * rhs);
    report.per_form.push_back(residual);
    report.forms.push_back(phi);
    worst = std::max(worst, residual);
  }
  report.residual = worst;
  report.pass = worst <= tol;
  return report;
}

// ---- tubes ----

TubePoint tube_project(const TubeSpec& spec, const std::vector<double>& x) {
  TubePoint tp;
  if (spec.kind == TubeSpec::Kind::Segment) {
    const auto& a = spec.seg_a;
    const auto& b = spec.seg_b;
    double len2 = 0, dot = 0;
    for (size_t i = 0; i < a.size(); ++i) {
      len2 += (b[i] - a[i]) * (b[i] - a[i]);
      dot += (x[i] - a[i]) * (b[i] - a[i]);
    }
    double s = std::clamp(dot / len2, 0.0, 1.0);
    tp.s = s;
    tp.foot.resize(a.size());
    double d2 = 0;
    for (size_t i = 0; i < a.size(); ++i) {
      tp.foot[i] = a[i] + s * (b[i] - a[i]);
      d2 += (x[i] - tp.foot[i]) * (x[i] - tp.foot[i]);
    }
    tp.dist = std::sqrt(d2);
    return tp;
  }
  if (spec.kind == TubeSpec::Kind::Plane) {
    const auto& o = spec.plane_o;
    double su = 0, sv = 0, uu = 0, vv = 0;
    for (size_t i = 0; i < o.size(); ++i) {
      su += (x[i] - o[i]) * spec.plane_u[i];
      uu += spec.plane_u[i] * spec.plane_u[i];
      sv += (x[i] - o[i]) * spec.plane_v[i];
      vv += spec.plane_v[i] * spec.plane_v[i];
    }
    double pu = std::clamp(su / uu, 0.0, 1.0), pv = std::clamp(sv / vv, 0.0, 1.0);
    tp.s = std::min({pu, 1 - pu, pv, 1 - pv});  // normalized distance to the rim
    tp.foot.resize(o.size());
    double d2 = 0;
    for (size_t i = 0; i < o.size(); ++i) {
      tp.foot[i] = o[i] + pu * spec.plane_u[i] + pv * spec.plane_v[i];
      d2 += (x[i] - tp.foot[i]) * (x[i] - tp.foot[i]);
    }
    tp.dist = std::sqrt(d2);
    return tp;
  }
  // parabola y = c t^2, t in [x0, x1]: damped Newton with multistart on the
  // quartic distance derivative
  double best_t = spec.par_x0, best_d2 = 1e300;
  for (int s0 = 0; s0 <= 8; ++s0) {
    double t = spec.par_x0 + (spec.par_x1 - spec.par_x0) * s0 / 8.0;
    for (int it = 0; it < 60; ++it) {
      double fx = t - x[0] + 2 * spec.par_c * t * (spec.par_c * t * t - x[1]);
      double dfx = 1 + 2 * spec.par_c * (spec.par_c * t * t - x[1]) + 4 * spec.par_c * spec.par_c * t * t;
      if (std::abs(dfx) < 1e-14) break;
      double step = fx / dfx;
      t = std::clamp(t - step, spec.par_x0, spec.par_x1);
      if (std::abs(step) < 1e-15) break;
    }
    double d2 = (x[0] - t) * (x[0] - t) +
                (x[1] - spec.par_c * t * t) * (x[1] - spec.par_c * t * t);
    if (d2 < best_d2) {
      best_d2 = d2;
      best_t = t;
    }
  }
  tp.s = (best_t - spec.par_x0) / (spec.par_x1 - spec.par_x0);
  tp.foot = {best_t, spec.par_c * best_t * best_t};
  tp.dist = std::sqrt(best_d2);
  return tp;
}

double tube_rho(const TubeSpec& spec, double s) {
  double ramp = std::min(s, 1 - s) / spec.taper;
  return spec.rho0 * std::clamp(ramp, 0.0, 1.0);
}

namespace {
double quintic_step(double s) {  // 0 -> 0, 1 -> 1, C^2
  s = std::clamp(s, 0.0, 1.0);
  return s * s * s * (s * (6 * s - 15) + 10);
}
}  // namespace

double tube_cutoff(const TubeSpec& spec, const std::vector<double>& x) {
  TubePoint tp = tube_project(spec, x);
  double rho = tube_rho(spec, tp.s);
  if (rho <= 0) return 0;
  double q = tp.dist / rho;
  if (q <= 0.5) return 1;
  if (q >= 0.75) return 0;
  return quintic_step((0.75 - q) / 0.25);
}

TubeForm::TubeForm(TubeSpec spec, PolyForm gamma_on_s) : spec_(std::move(spec)), gamma_(std::move(gamma_on_s)) {
  const int n = gamma_.ambient_dim();
  if (spec_.kind == TubeSpec::Kind::Segment) {
    // affine orthogonal projection onto the segment's line (valid inside the
    // tube, whose width vanishes toward the caps)
    PolyMap pi;
    pi.domain_dim = n;
    double len2 = 0;
    for (int i = 0; i < n; ++i)
      len2 += (spec_.seg_b[i] - spec_.seg_a[i]) * (spec_.seg_b[i] - spec_.seg_a[i]);
    for (int i = 0; i < n; ++i) {
      Polynomial p = Polynomial::constant(n, Rational(spec_.seg_a[i]));
      for (int j = 0; j < n; ++j) {
        Rational cij(((spec_.seg_b[i] - spec_.seg_a[i]) * (spec_.seg_b[j] - spec_.seg_a[j])) / len2);
        if (cij != 0)
          p = p + (Polynomial::variable(n, j) - Polynomial::constant(n, Rational(spec_.seg_a[j]))) * cij;
      }
      pi.comps.push_back(p);
    }
    projection_ = pi;
  } else if (spec_.kind == TubeSpec::Kind::Plane) {
    PolyMap pi;
    pi.domain_dim = n;
    double uu = 0, vv = 0;
    for (int i = 0; i < n; ++i) {
      uu += spec_.plane_u[i] * spec_.plane_u[i];
      vv += spec_.plane_v[i] * spec_.plane_v[i];
    }
    for (int i = 0; i < n; ++i) {
      Polynomial p = Polynomial::constant(n, Rational(spec_.plane_o[i]));
      for (int j = 0; j < n; ++j) {
        Rational cij(spec_.plane_u[i] * spec_.plane_u[j] / uu +
                     spec_.plane_v[i] * spec_.plane_v[j] / vv);
        if (cij != 0)
          p = p + (Polynomial::variable(n, j) - Polynomial::constant(n, Rational(spec_.plane_o[j]))) * cij;
      }
      pi.comps.push_back(p);
    }
    projection_ = pi;
  }
  if (projection_) {
    pulled_ = pullback(*projection_, gamma_);
    pulled_d_ = pullback(*projection_, exterior_derivative(gamma_));
  }
}

double TubeForm::pullback_value(const PolyForm& w, const std::vector<double>& x,
                                const std::vector<std::vector<double>>& vectors) const {
  // numeric pi^* w via finite differences of the projection
  TubePoint tp = tube_project(spec_, x);
  const double h = 1e-6;
  std::vector<std::vector<double>> pushed;
  for (const auto& v : vectors) {
    std::vector<double> xp(x.size()), xm(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
      xp[i] = x[i] + h * v[i];
      xm[i] = x[i] - h * v[i];
    }
    auto fp = tube_project(spec_, xp).foot;
    auto fm = tube_project(spec_, xm).foot;
    std::vector<double> dv(fp.size());
    for (size_t i = 0; i < fp.size(); ++i) dv[i] = (fp[i] - fm[i]) / (2 * h);
    pushed.push_back(std::move(dv));
  }
  return evaluate(w, tp.foot, pushed);
}

double TubeForm::value(const std::vector<double>& x,
                       const std::vector<std::vector<double>>& vectors) const {
  double phi = tube_cutoff(spec_, x);
  if (phi == 0) return 0;
  double pb = pulled_ ? evaluate(*pulled_, x, vectors) : pullback_value(gamma_, x, vectors);
  return phi * pb;
}

double TubeForm::d_value(const std::vector<double>& x,
                         const std::vector<std::vector<double>>& vectors) const {
  // d(phi pi^* gamma) = d phi ∧ pi^* gamma + phi pi^*(d gamma)
  const double h = 1e-6;
  double acc = 0;
  // d phi ∧ pi^* gamma, expanded over the vectors
  for (size_t i = 0; i < vectors.size(); ++i) {
    std::vector<double> xp(x.size()), xm(x.size());
    for (size_t c = 0; c < x.size(); ++c) {
      xp[c] = x[c] + h * vectors[i][c];
      xm[c] = x[c] - h * vectors[i][c];
    }
    double dphi = (tube_cutoff(spec_, xp) - tube_cutoff(spec_, xm)) / (2 * h);
    if (dphi == 0) continue;
    std::vector<std::vector<double>> rest;
    for (size_t j = 0; j < vectors.size(); ++j)
      if (j != i) rest.push_back(vectors[j]);
    double pb = pulled_ ? evaluate(*pulled_, x, rest) : pullback_value(gamma_, x, rest);
    acc += (i % 2 == 0 ? 1.0 : -1.0) * dphi * pb;
  }
  double phi = tube_cutoff(spec_, x);
  if (phi != 0) {
    double pbd = pulled_d_ ? evaluate(*pulled_d_, x, vectors)
                           : pullback_value(exterior_derivative(gamma_), x, vectors);
    acc += phi * pbd;
  }
  return acc;
}

TubeForm tube_extension(const PolyForm& gamma, const TubeSpec& spec, int samples) {
  TubeForm form(spec, gamma);
  // decay audit: |gamma(x)| <= sup over fiber of (1 + |d phi(y)|)^-2, with the
  // suppressed constant taken as 1
  const int n = gamma.ambient_dim();
  const double h = 1e-6;
  for (int i = 0; i < samples; ++i) {
    double s = (i + 0.5) / samples;
    // base point at parameter s
    std::vector<double> base(n);
    if (spec.kind == TubeSpec::Kind::Segment) {
      for (int c = 0; c < n; ++c) base[c] = spec.seg_a[c] + s * (spec.seg_b[c] - spec.seg_a[c]);
    } else if (spec.kind == TubeSpec::Kind::Parabola) {
      double t = spec.par_x0 + s * (spec.par_x1 - spec.par_x0);
      base = {t, spec.par_c * t * t};
    } else {
      for (int c = 0; c < n; ++c)
        base[c] = spec.plane_o[c] + s * spec.plane_u[c] + 0.5 * spec.plane_v[c];
    }
    // |gamma| at the base point against axis frames
    double gnorm = 0;
    for (const auto& [I, p] : gamma.coeffs()) gnorm = std::max(gnorm, std::abs(p.eval(base)));
    // sup over the fiber of (1 + |d phi|)^-2, sampled along axis offsets
    double bound = 0;
    double rho = tube_rho(spec, s);
    for (int off = -4; off <= 4; ++off) {
      for (int axis = 0; axis < n; ++axis) {
        std::vector<double> y = base;
        y[axis] += off * rho / 5.0;
        double grad2 = 0;
        for (int c = 0; c < n; ++c) {
          auto yp = y, ym = y;
          yp[c] += h;
          ym[c] -= h;
          double g = (tube_cutoff(spec, yp) - tube_cutoff(spec, ym)) / (2 * h);
          grad2 += g * g;
        }
        double val = 1.0 / ((1 + std::sqrt(grad2)) * (1 + std::sqrt(grad2)));
        bound = std::max(bound, val);
      }
    }
    if (gnorm > bound + 1e-12)
      throw Error("DecayAuditFailed", "gamma exceeds the tube decay bound at a sample");
  }
  return form;
}

}  // namespace strataforms
