#include "strataforms/stratified_form.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace strataforms {

const PolyForm& StratifiedForm::component(const std::string& stratum) const {
  auto it = components.find(stratum);
  if (it == components.end())
    throw Error("MissingComponent", "no form component on stratum '" + stratum + "'");
  return it->second;
}

StratifiedForm StratifiedForm::derivative() const {
  StratifiedForm d;
  d.stratification = stratification;
  d.degree = degree + 1;
  for (const auto& [sid, f] : components) d.components[sid] = exterior_derivative(f);
  return d;
}

StratifiedForm StratifiedForm::on_refinement(
    const Stratification& refined, const std::map<std::string, std::string>& parent) const {
  StratifiedForm out;
  out.stratification = refined.id;
  out.degree = degree;
  out.declared_bound = declared_bound;
  for (const auto& [sid, s] : refined.strata) {
    auto it = parent.find(sid);
    if (it == parent.end()) throw Error("MissingStratum", "refined stratum without parent");
    if (has_component(it->second)) out.components[sid] = component(it->second);
  }
  return out;
}

namespace {

std::vector<double> apply_jacobian(const std::vector<std::vector<double>>& J,
                                   const std::vector<double>& v) {
  std::vector<double> out(J.size(), 0.0);
  for (size_t r = 0; r < J.size(); ++r)
    for (size_t c = 0; c < v.size(); ++c) out[r] += J[r][c] * v[c];
  return out;
}

double frame_norm(const std::vector<std::vector<double>>& v) {
  // Gram determinant of the frame = squared norm of the simple multivector
  const int k = static_cast<int>(v.size());
  std::vector<std::vector<double>> G(k, std::vector<double>(k, 0.0));
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (size_t t = 0; t < v[a].size(); ++t) G[a][b] += v[a][t] * v[b][t];
  double det = 1;
  for (int c = 0; c < k; ++c) {
    int piv = c;
    for (int r = c + 1; r < k; ++r)
      if (std::abs(G[r][c]) > std::abs(G[piv][c])) piv = r;
    if (std::abs(G[piv][c]) < 1e-300) return 0;
    std::swap(G[piv], G[c]);
    det *= G[c][c];
    for (int r = c + 1; r < k; ++r) {
      double f = G[r][c] / G[c][c];
      for (int j = c; j < k; ++j) G[r][j] -= f * G[c][j];
    }
  }
  return det <= 0 ? 0 : std::sqrt(det);
}

void k_subsets(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
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

ContinuityReport check_graph_closed(const StratifiedForm& w, const Stratification& sigma,
                                    const CellCatalogue& cat, int samples, double tol) {
  ContinuityReport report;
  const int k = w.degree;
  for (const auto& [sid, upper] : sigma.strata) {
    if (!w.has_component(sid)) continue;
    const auto& cell = cat.get(upper.cell);
    if (!cat.has(upper.cell)) throw Error("NoTangentData", "stratum cell missing");
    const PolyForm& w_upper = w.component(sid);
    for (const auto& adj : upper.adjacency) {
      const Stratum& lower = sigma.get(adj);
      if (!w.has_component(adj)) continue;
      if (lower.dim < k) {
        ++report.pairs_vacuous;  // ∧^k of the lower tangent space is zero
        continue;
      }
      ++report.pairs_checked;
      const PolyForm& w_lower = w.component(adj);
      const auto& lower_cell = cat.get(lower.cell);
      // facets of the upper reference domain with the lower stratum's
      // dimension; box facets are boxes, simplex facets simplices
      for (const auto& facet : ref_face_maps(cell.domain, cell.dim, lower.dim)) {
        for (const auto& uf :
             ref_interior_points(cell.domain, lower.dim, std::max(2, samples / 2))) {
          std::vector<Rational> ur(uf.size());
          for (size_t t = 0; t < uf.size(); ++t) ur[t] = Rational(uf[t]);
          auto ustar_r = facet.eval(ur);
          std::vector<double> ustar(ustar_r.size());
          for (size_t t = 0; t < ustar_r.size(); ++t) ustar[t] = to_double(ustar_r[t]);
          std::vector<double> p = cell.map.eval(ustar);
          if (distance_to_cell(p, lower_cell).distance > 100 * tol) continue;  // other face

          // k tangent directions along the facet (ambient limits lie in T_p S')
          auto Jfacet = facet.jacobian(ur);  // (dim cell) x (lower.dim), rational
          std::vector<std::vector<double>> facet_dirs;
          for (int c = 0; c < lower.dim; ++c) {
            std::vector<double> d(cell.dim);
            for (int r = 0; r < cell.dim; ++r) d[r] = to_double(Jfacet[r][c]);
            facet_dirs.push_back(std::move(d));
          }
          auto bary = ref_barycenter_d(cell.domain, cell.dim);
          std::vector<double> inward(cell.dim);
          for (int t = 0; t < cell.dim; ++t) inward[t] = bary[t] - ustar[t];

          k_subsets(lower.dim, k, [&](const std::vector<int>& sel) {
            // limit multivector at p
            auto Jstar = cell.map.jacobian(ustar);
            std::vector<std::vector<double>> frame_limit;
            for (int idx : sel) frame_limit.push_back(apply_jacobian(Jstar, facet_dirs[idx]));
            double scale = frame_norm(frame_limit);
            if (scale < 1e-9) return;  // degenerate direction set
            double lower_value = evaluate(w_lower, p, frame_limit) / scale;

            // approach along u_i = u* + 2^-i (barycenter - u*); the sequence
            // value at the facet is recovered by polynomial extrapolation in
            // the approach parameter (exact for polynomial coefficients up to
            // the interpolation order)
            std::vector<double> hs, values;
            for (int i = 1; i <= 12; ++i) {
              double step = std::ldexp(1.0, -i);
              std::vector<double> ui(cell.dim);
              for (int t = 0; t < cell.dim; ++t) ui[t] = ustar[t] + step * inward[t];
              auto Ji = cell.map.jacobian(ui);
              std::vector<std::vector<double>> frame_i;
              for (int idx : sel) frame_i.push_back(apply_jacobian(Ji, facet_dirs[idx]));
              hs.push_back(step);
              values.push_back(evaluate(w_upper, cell.map.eval(ui), frame_i) / scale);
            }
            // Neville extrapolation to h = 0 through the last 5 samples
            const int m = 5;
            std::vector<double> t(values.end() - m, values.end());
            std::vector<double> h(hs.end() - m, hs.end());
            for (int lev = 1; lev < m; ++lev)
              for (int i2 = 0; i2 < m - lev; ++i2)
                t[i2] = (h[i2 + lev] * t[i2] - h[i2] * t[i2 + 1]) / (h[i2 + lev] - h[i2]);
            double upper_value = t[0];
            double residual = std::abs(upper_value - lower_value);
            report.max_residual = std::max(report.max_residual, residual);
            if (residual > tol) {
              report.pass = false;
              if (report.failures.size() < 32)
                report.failures.push_back({sid, adj, p, residual});
            }
          });
        }
      }
    }
  }
  return report;
}

SupNormEstimate sup_norm_estimate(const StratifiedForm& w, const Stratification& sigma,
                                  const CellCatalogue& cat, int samples) {
  SupNormEstimate est;
  const int k = w.degree;
  for (const auto& [sid, stratum] : sigma.strata) {
    if (!w.has_component(sid)) continue;
    if (stratum.dim < k) continue;
    const auto& cell = cat.get(stratum.cell);
    const PolyForm& f = w.component(sid);
    // sample points: corners of the reference domain, then low-discrepancy
    std::vector<std::vector<double>> points;
    for (const auto& corner : ref_face_maps(cell.domain, cell.dim, 0))
      points.push_back([&] {
        auto v = corner.eval(std::vector<Rational>{});
        std::vector<double> d(v.size());
        for (size_t i = 0; i < v.size(); ++i) d[i] = to_double(v[i]);
        return d;
      }());
    for (const auto& u : ref_interior_points(cell.domain, cell.dim, samples)) points.push_back(u);

    for (const auto& u : points) {
      // exact tangent frame: Gram-Schmidt over the rationals, square roots
      // deferred to the final norm
      std::vector<Rational> ur(u.size());
      for (size_t t = 0; t < u.size(); ++t) ur[t] = Rational(u[t]);
      auto x = cell.map.eval(ur);
      auto J = cell.map.jacobian(ur);
      std::vector<std::vector<Rational>> basis;
      std::vector<Rational> norms_sq;
      for (int c = 0; c < cell.dim; ++c) {
        std::vector<Rational> v(x.size());
        for (size_t r = 0; r < x.size(); ++r) v[r] = J[r][c];
        for (size_t b = 0; b < basis.size(); ++b) {
          Rational dot(0);
          for (size_t t = 0; t < v.size(); ++t) dot += v[t] * basis[b][t];
          Rational factor = dot / norms_sq[b];
          for (size_t t = 0; t < v.size(); ++t) v[t] -= factor * basis[b][t];
        }
        Rational nsq(0);
        for (const auto& c2 : v) nsq += c2 * c2;
        if (nsq == 0) continue;  // dependent column
        basis.push_back(std::move(v));
        norms_sq.push_back(nsq);
      }
      if (static_cast<int>(basis.size()) < k) continue;
      std::vector<double> xd(x.size());
      for (size_t t = 0; t < x.size(); ++t) xd[t] = to_double(x[t]);
      k_subsets(static_cast<int>(basis.size()), k, [&](const std::vector<int>& sel) {
        // orthogonal vectors: |v_1 ∧ ... ∧ v_k| = prod |v_i|
        std::vector<std::vector<Rational>> frame;
        Rational scale_sq(1);
        for (int idx : sel) {
          frame.push_back(basis[idx]);
          scale_sq *= norms_sq[idx];
        }
        Multivector xi = Multivector::from_vectors(static_cast<int>(x.size()), frame);
        Rational raw = evaluate(f, x, xi);
        double val = to_double(rational_abs(raw)) / std::sqrt(to_double(scale_sq));
        if (val > est.value) {
          est.value = val;
          est.argmax_point = xd;
          est.argmax_stratum = sid;
        }
      });
    }
  }
  if (w.declared_bound && est.value > to_double(*w.declared_bound) + 1e-9)
    est.bound_respected = false;
  return est;
}

}  // namespace strataforms
