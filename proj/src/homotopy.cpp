#include "strataforms/homotopy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "strataforms/quadrature.hpp"

namespace strataforms {

namespace {
std::vector<double> to_d(const std::vector<Rational>& v) {
  std::vector<double> r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = to_double(v[i]);
  return r;
}
}  // namespace

std::vector<Rational> Retraction::eval(const std::vector<Rational>& q, const Rational& t) const {
  if (poly) {
    std::vector<Rational> args = q;
    args.push_back(t);
    return poly->eval(args);
  }
  if (kind == Kind::Cone) {
    std::vector<Rational> out(q.size());
    for (size_t i = 0; i < q.size(); ++i) out[i] = center[i] + t * (q[i] - center[i]);
    return out;
  }
  if (theta_lo_fn || theta_hi_fn)
    throw Error("NonPolynomialRetraction", "exact evaluation with injected delimiters");
  std::vector<Rational> x(q.begin(), q.end() - 1);
  std::vector<Rational> rx = base->eval(x, t);
  std::vector<Rational> out = rx;
  if (cellkind == CellKind::Graph) {
    out.push_back(theta_lo.eval(rx));
    return out;
  }
  Rational lo = theta_lo.eval(x), hi = theta_hi.eval(x);
  if (hi == lo) {
    // collapsed fiber on the closure of the band; continuous extension
    if (q.back() != lo)
      throw Error("DelimiterCrossing", "point outside the closed band at a collapsed fiber");
    out.push_back(theta_lo.eval(rx));
    return out;
  }
  Rational tau_q = (q.back() - lo) / (hi - lo);
  out.push_back(tau_q * theta_hi.eval(rx) + (Rational(1) - tau_q) * theta_lo.eval(rx));
  return out;
}

std::vector<double> Retraction::eval(const std::vector<double>& q, double t) const {
  if (poly) {
    std::vector<double> args = q;
    args.push_back(t);
    return poly->eval(args);
  }
  if (kind == Kind::Cone) {
    std::vector<double> out(q.size());
    for (size_t i = 0; i < q.size(); ++i) {
      double c = to_double(center[i]);
      out[i] = c + t * (q[i] - c);
    }
    return out;
  }
  std::vector<double> x(q.begin(), q.end() - 1);
  std::vector<double> rx = base->eval(x, t);
  auto lo_at = [&](const std::vector<double>& p) {
    return theta_lo_fn ? theta_lo_fn(p) : theta_lo.eval(p);
  };
  auto hi_at = [&](const std::vector<double>& p) {
    return theta_hi_fn ? theta_hi_fn(p) : theta_hi.eval(p);
  };
  std::vector<double> out = rx;
  if (cellkind == CellKind::Graph) {
    out.push_back(lo_at(rx));
    return out;
  }
  double lo = lo_at(x), hi = hi_at(x);
  if (hi == lo) {
    out.push_back(lo_at(rx));
    return out;
  }
  double tau_q = (q.back() - lo) / (hi - lo);
  out.push_back(tau_q * hi_at(rx) + (1.0 - tau_q) * lo_at(rx));
  return out;
}

Rational Retraction::tau(const std::vector<Rational>& q) const {
  if (kind != Kind::Lifted || cellkind != CellKind::Band)
    throw Error("BadParameter", "tau is defined on band cells");
  std::vector<Rational> x(q.begin(), q.end() - 1);
  Rational lo = theta_lo.eval(x), hi = theta_hi.eval(x);
  if (hi == lo) throw Error("DelimiterCrossing", "theta_hi = theta_lo at evaluation point");
  return (q.back() - lo) / (hi - lo);
}

Retraction cone_retraction(const std::vector<Rational>& center, const Stratification& sigma,
                           const CellCatalogue& cat, int samples, double tol) {
  Retraction r;
  r.kind = Retraction::Kind::Cone;
  r.id = "cone";
  r.stratification = sigma.id;
  r.ambient_dim = sigma.ambient_dim;
  r.center = center;
  const int n = sigma.ambient_dim;
  PolyMap f;
  f.domain_dim = n + 1;
  for (int i = 0; i < n; ++i) {
    // p_i + t (x_i - p_i)
    Polynomial xi = Polynomial::variable(n + 1, i);
    Polynomial t = Polynomial::variable(n + 1, n);
    f.comps.push_back(Polynomial::constant(n + 1, center[i]) + t * (xi - Polynomial::constant(n + 1, center[i])));
  }
  r.poly = std::move(f);

  // audit: strata are closed under the cone map for t in (0,1]
  for (const auto& [sid, stratum] : sigma.strata) {
    const auto& cell = cat.get(stratum.cell);
    auto pts = ref_interior_points(cell.domain, cell.dim, std::max(4, samples / 4));
    for (const auto& u : pts) {
      auto x = cell.map.eval(u);
      for (double t : {0.875, 0.5, 0.125, 0.02}) {
        auto y = r.eval(x, t);
        if (distance_to_cell(y, cell).distance > tol)
          throw Error("NotConeInvariant",
                      "stratum " + sid + " escapes under the cone map at t=" + std::to_string(t));
      }
    }
  }
  // target: strata whose cells sit at the center
  std::vector<double> cd = to_d(center);
  for (const auto& [sid, stratum] : sigma.strata)
    if (distance_to_cell(cd, cat.get(stratum.cell)).distance <= tol) r.target.push_back(sid);
  if (r.target.empty()) throw Error("NotConeInvariant", "center lies on no stratum");
  return r;
}

Retraction lift_retraction(std::shared_ptr<const Retraction> base, const Polynomial& theta_lo,
                           const Polynomial& theta_hi, Retraction::CellKind cellkind,
                           const Stratification& sigma, const CellCatalogue& cat, int samples) {
  Retraction r;
  r.kind = Retraction::Kind::Lifted;
  r.id = base->id + ":lift";
  r.stratification = sigma.id;
  r.ambient_dim = base->ambient_dim + 1;
  r.base = std::move(base);
  r.theta_lo = theta_lo;
  r.theta_hi = theta_hi;
  r.cellkind = cellkind;
  if (cellkind == Retraction::CellKind::Band) {
    // sample the base of band strata for delimiter ordering
    for (const auto& [sid, stratum] : sigma.strata) {
      if (stratum.dim != r.ambient_dim) continue;
      const auto& cell = cat.get(stratum.cell);
      for (const auto& u : ref_interior_points(cell.domain, cell.dim, samples)) {
        auto q = cell.map.eval(u);
        std::vector<double> x(q.begin(), q.end() - 1);
        if (theta_lo.eval(x) >= theta_hi.eval(x))
          throw Error("DelimiterCrossing", "theta_lo >= theta_hi inside the band");
      }
    }
  }
  // N consists of the strata pointwise fixed by r at every time
  for (const auto& [sid, stratum] : sigma.strata) {
    if (stratum.dim >= r.ambient_dim) continue;
    const auto& cell = cat.get(stratum.cell);
    bool fixed = true;
    for (const auto& u : ref_interior_points(cell.domain, cell.dim, 4)) {
      auto x = cell.map.eval(u);
      for (double t : {0.0, 0.3, 0.7}) {
        auto y = r.eval(x, t);
        double gap = 0;
        for (size_t i = 0; i < x.size(); ++i) gap = std::max(gap, std::abs(y[i] - x[i]));
        if (gap > 1e-9) {
          fixed = false;
          break;
        }
      }
      if (!fixed) break;
    }
    if (fixed) r.target.push_back(sid);
  }
  return r;
}

TimeSplitForm split_time(const PolyForm& w_xt) {
  const int nt = w_xt.ambient_dim();  // variables x_1..x_{nt-1}, t
  const int t_idx = nt - 1;
  TimeSplitForm out{PolyForm(nt, w_xt.degree()), PolyForm(nt, w_xt.degree() - 1)};
  for (const auto& [I, p] : w_xt.coeffs()) {
    if (!I.empty() && I.back() == t_idx) {
      // dx_{i1..i_{k-1}} ∧ dt = (-1)^{k-1} dt ∧ dx_{i1..i_{k-1}}
      MultiIndex J(I.begin(), I.end() - 1);
      int sign = (static_cast<int>(J.size()) % 2 == 0) ? 1 : -1;
      out.beta.add_term(J, p * Rational(sign));
    } else {
      out.alpha.add_term(I, p);
    }
  }
  return out;
}

namespace {
// extend a form on x-variables to (x, t) and pull back through the map
PolyForm pullback_xt(const PolyMap& rmap, const PolyForm& w) {
  return pullback(rmap, w);
}
}  // namespace

PolyForm homotopy_operator(const PolyForm& w, const Retraction& r) {
  if (!r.is_polynomial())
    throw Error("NonPolynomialRetraction",
                "homotopy operator is symbolic only for polynomial retractions");
  const int n = r.ambient_dim;
  if (w.ambient_dim() != n) throw Error("DimensionMismatch", "form/retraction dimension");
  PolyForm pb = pullback_xt(*r.poly, w);  // form on (x, t)
  TimeSplitForm split = split_time(pb);
  // reassembly check: alpha + dt ∧ beta reproduces the pullback
  PolyForm dt(n + 1, 1);
  dt.add_term({n}, Polynomial::constant(n + 1, Rational(1)));
  if (!(split.alpha + wedge(dt, split.beta) == pb))
    throw Error("InternalError", "time-split reassembly failed");
  // integrate beta's coefficients in t over [0,1]
  PolyForm gamma(n, w.degree() - 1);
  for (const auto& [I, p] : split.beta.coeffs()) gamma.add_term(I, p.integrate_unit_drop(n));
  return gamma;
}

double homotopy_value(const PolyForm& w, const Retraction& r, const std::vector<double>& x,
                      const std::vector<std::vector<double>>& vectors, int t_order) {
  const int k = w.degree();
  if (static_cast<int>(vectors.size()) != k - 1)
    throw Error("DimensionMismatch", "homotopy_value needs k-1 vectors");
  std::vector<double> nodes, weights;
  gauss_legendre_01(t_order / 2 + 1, nodes, weights);
  const double h = 1e-6;
  double acc = 0;
  for (size_t q = 0; q < nodes.size(); ++q) {
    double t = nodes[q];
    // ∂_t r by central differences
    auto plus = r.eval(x, t + h);
    auto minus = r.eval(x, t - h);
    std::vector<double> dt(plus.size());
    for (size_t i = 0; i < plus.size(); ++i) dt[i] = (plus[i] - minus[i]) / (2 * h);
    // d_x r_t applied to each vector, by central differences
    std::vector<std::vector<double>> frame = {dt};
    for (const auto& v : vectors) {
      std::vector<double> xp(x.size()), xm(x.size());
      for (size_t i = 0; i < x.size(); ++i) {
        xp[i] = x[i] + h * v[i];
        xm[i] = x[i] - h * v[i];
      }
      auto fp = r.eval(xp, t);
      auto fm = r.eval(xm, t);
      std::vector<double> dv(fp.size());
      for (size_t i = 0; i < fp.size(); ++i) dv[i] = (fp[i] - fm[i]) / (2 * h);
      frame.push_back(std::move(dv));
    }
    acc += weights[q] * evaluate(w, r.eval(x, t), frame);
  }
  return acc;
}

PolyForm pullback_at_time(const Retraction& r, const PolyForm& w, const Rational& t) {
  if (!r.is_polynomial()) throw Error("NonPolynomialRetraction", "pullback_at_time");
  const int n = r.ambient_dim;
  PolyMap at_t;
  at_t.domain_dim = n;
  std::vector<Polynomial> subs;
  for (int i = 0; i < n; ++i) subs.push_back(Polynomial::variable(n, i));
  subs.push_back(Polynomial::constant(n, t));
  for (const auto& comp : r.poly->comps) at_t.comps.push_back(comp.substitute(subs));
  return pullback(at_t, w);
}

RetractionAudit audit_retraction(const Retraction& r, const Stratification& sigma,
                                 const CellCatalogue& cat, int samples, double tol) {
  RetractionAudit audit;
  for (const auto& [sid, stratum] : sigma.strata) {
    const auto& cell = cat.get(stratum.cell);
    std::string landing;
    for (const auto& u : ref_interior_points(cell.domain, cell.dim, samples)) {
      auto x = cell.map.eval(u);
      // 2.2: r(x,1) = x
      auto x1 = r.eval(x, 1.0);
      double gap = 0;
      for (size_t i = 0; i < x.size(); ++i) gap = std::max(gap, std::abs(x1[i] - x[i]));
      audit.max_endpoint_gap = std::max(audit.max_endpoint_gap, gap);
      if (gap > tol) audit.endpoint_identity = false;
      // 2.2: r(x,0) ∈ N, and 2.4: one stratum of N per stratum S
      auto x0 = r.eval(x, 0.0);
      double best = std::numeric_limits<double>::infinity();
      std::string best_id;
      for (const auto& tid : r.target) {
        double d = distance_to_cell(x0, cat.get(sigma.get(tid).cell)).distance;
        if (d < best) {
          best = d;
          best_id = tid;
        }
      }
      if (best > tol) audit.endpoint_in_target = false;
      if (landing.empty())
        landing = best_id;
      else if (landing != best_id)
        audit.target_single_stratum = false;
      // 2.3: r(S x (0,1]) ⊂ S
      for (double t : {0.75, 0.375, 0.0625}) {
        double d = distance_to_cell(r.eval(x, t), cell).distance;
        audit.max_stratum_gap = std::max(audit.max_stratum_gap, d);
        if (d > tol) audit.preserves_strata = false;
      }
    }
  }
  audit.pass = audit.endpoint_identity && audit.endpoint_in_target && audit.preserves_strata &&
               audit.target_single_stratum;
  return audit;
}

PoincareResult poincare_primitive(const StratifiedForm& w, const Stratification& sigma,
                                  const CellCatalogue& cat, const Retraction& r,
                                  const std::optional<PolyForm>& gamma_prime) {
  for (const auto& [sid, f] : w.components)
    if (!exterior_derivative(f).is_zero())
      throw Error("NotClosed", "omega is not closed on stratum " + sid);
  RetractionAudit audit = audit_retraction(r, sigma, cat);
  if (!audit.pass) throw Error("AuditFailed", "retraction violates the contract on this domain");

  PoincareResult result;
  result.gamma.stratification = w.stratification;
  result.gamma.degree = w.degree - 1;
  for (const auto& [sid, f] : w.components) {
    PolyForm gamma_s = homotopy_operator(f, r);
    if (gamma_prime) {
      // r_0^* gamma' transports the primitive on N
      gamma_s = gamma_s + pullback_at_time(r, *gamma_prime, Rational(0));
    }
    result.gamma.components[sid] = gamma_s;
    // symbolic verification: d gamma = omega - r_0^* omega (+ d r_0^* gamma')
    PolyForm want = f - pullback_at_time(r, f, Rational(0));
    if (gamma_prime)
      want = want + exterior_derivative(pullback_at_time(r, *gamma_prime, Rational(0)));
    if (!(exterior_derivative(result.gamma.components[sid]) == want))
      result.symbolic_exact = false;
  }
  result.continuity_pass = check_graph_closed(result.gamma, sigma, cat).pass;
  return result;
}

SemidiffReport check_semidifferentiable(const Retraction& r, const Stratification& sigma,
                                        const CellCatalogue& cat, int samples,
                                        std::vector<double> t_seq, double tol) {
  SemidiffReport report;
  if (t_seq.empty())
    for (int i = 1; i <= 10; ++i) t_seq.push_back(std::ldexp(1.0, -i));
  report.t_seq = t_seq;
  const double h = 1e-5;

  // chart differentials of r_t over each stratum, by central differences
  auto chart_differential = [&](const ParametrizedCell& cell, const std::vector<double>& u,
                                double t) {
    std::vector<std::vector<double>> D;
    for (int j = 0; j < cell.dim; ++j) {
      auto up = u, um = u;
      up[j] += h;
      um[j] -= h;
      auto fp = r.eval(cell.map.eval(up), t);
      auto fm = r.eval(cell.map.eval(um), t);
      std::vector<double> col(fp.size());
      for (size_t i = 0; i < fp.size(); ++i) col[i] = (fp[i] - fm[i]) / (2 * h);
      D.push_back(std::move(col));
    }
    return D;
  };

  std::vector<double> residuals(t_seq.size(), 0.0);
  for (const auto& [sid, stratum] : sigma.strata) {
    if (stratum.dim == 0) continue;
    const auto& cell = cat.get(stratum.cell);
    for (const auto& u : ref_interior_points(cell.domain, cell.dim, samples)) {
      auto D0 = chart_differential(cell, u, 0.0);
      for (size_t ti = 0; ti < t_seq.size(); ++ti) {
        auto Dt = chart_differential(cell, u, t_seq[ti]);
        double fro = 0;
        for (size_t a = 0; a < Dt.size(); ++a)
          for (size_t b = 0; b < Dt[a].size(); ++b) {
            double diff = Dt[a][b] - D0[a][b];
            fro += diff * diff;
          }
        residuals[ti] = std::max(residuals[ti], std::sqrt(fro));
      }
      // stratum preservation at the same samples
      auto x = cell.map.eval(u);
      for (double t : {0.5, 0.03125}) {
        if (distance_to_cell(r.eval(x, t), cell).distance > 1e-6)
          report.strata_preserved = false;
      }
    }
  }
  report.residuals = residuals;
  for (size_t i = 1; i < residuals.size(); ++i)
    if (residuals[i] > residuals[i - 1] + 1e-12) report.monotone = false;
  // linear extrapolation of the tail to t = 0
  size_t n = residuals.size();
  if (n >= 2) {
    double t1 = t_seq[n - 2], t2 = t_seq[n - 1];
    double r1 = residuals[n - 2], r2 = residuals[n - 1];
    report.extrapolated_limit = std::abs(r2 - t2 * (r1 - r2) / (t1 - t2));
  } else if (n == 1) {
    report.extrapolated_limit = residuals[0];
  }
  report.pass = report.monotone && report.strata_preserved &&
                (report.extrapolated_limit <= tol || (!residuals.empty() && residuals.back() <= tol));
  return report;
}

LipschitzReport lipschitz_estimate(const Retraction& r, const Stratification& sigma,
                                   const CellCatalogue& cat, int samples) {
  LipschitzReport report;
  // deterministic sample pool: (stratum point, Halton t)
  std::vector<std::pair<std::vector<double>, double>> pool;
  int idx = 0;
  while (static_cast<int>(pool.size()) < samples) {
    for (const auto& [sid, stratum] : sigma.strata) {
      const auto& cell = cat.get(stratum.cell);
      auto u = halton_point(cell.domain, cell.dim, idx);
      double t = halton_point(RefDomain::Box, 1, idx + 7)[0];
      pool.emplace_back(cell.map.eval(u), t);
      if (static_cast<int>(pool.size()) >= samples) break;
    }
    ++idx;
  }
  for (size_t i = 0; i < pool.size(); ++i) {
    auto ri = r.eval(pool[i].first, pool[i].second);
    for (size_t j = i + 1; j < pool.size(); ++j) {
      auto rj = r.eval(pool[j].first, pool[j].second);
      double num = 0, den = 0;
      for (size_t c = 0; c < ri.size(); ++c) num += (ri[c] - rj[c]) * (ri[c] - rj[c]);
      for (size_t c = 0; c < pool[i].first.size(); ++c)
        den += (pool[i].first[c] - pool[j].first[c]) * (pool[i].first[c] - pool[j].first[c]);
      den += (pool[i].second - pool[j].second) * (pool[i].second - pool[j].second);
      if (den < 1e-18) continue;
      report.estimate = std::max(report.estimate, std::sqrt(num / den));
      ++report.pairs;
    }
  }
  return report;
}

}  // namespace strataforms
