#include "strataforms/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "strataforms/parallel.hpp"

namespace strataforms {

double integrate_cell(const PolyForm& w, const ParametrizedCell& cell, int order) {
  if (w.degree() != cell.dim)
    throw Error("DegreeMismatch", "form degree != cell dimension");
  if (cell.dim == 0) {
    const Polynomial* p = w.coeff(MultiIndex{});
    double v = p ? p->eval(cell.map.eval(std::vector<double>{})) : 0.0;
    return cell.orientation * v;
  }
  PolyForm pb = pullback(cell.map, w);
  MultiIndex top(cell.dim);
  std::iota(top.begin(), top.end(), 0);
  const Polynomial* integrand = pb.coeff(top);
  if (!integrand) return 0.0;
  int use_order = order >= 0 ? std::max(order, integrand->total_degree())
                             : integrand->total_degree();
  const QuadratureRule& rule = quadrature_rule(cell.domain, cell.dim, std::max(0, use_order));
  return cell.orientation * rule.apply(*integrand);
}

double integrate_chain(const PolyForm& w, const Chain& c, const CellCatalogue& cat, int order,
                       int jobs) {
  std::vector<std::pair<std::string, Rational>> terms(c.terms.begin(), c.terms.end());
  std::vector<double> vals(terms.size(), 0.0);
  parallel_for(static_cast<int>(terms.size()), jobs, [&](int i) {
    vals[i] = to_double(terms[i].second) * integrate_cell(w, cat.get(terms[i].first), order);
  });
  double acc = 0;
  for (double v : vals) acc += v;
  return acc;
}

Chain expand_splits(const Chain& c, const StratumAssignment& assignment) {
  Chain out;
  out.degree = c.degree;
  for (const auto& [id, coeff] : c.terms) {
    auto it = assignment.splits.find(id);
    if (it == assignment.splits.end()) {
      out.add(id, coeff);
    } else {
      Chain sub;
      sub.degree = c.degree;
      for (const auto& piece : it->second) sub.add(piece, coeff);
      Chain expanded = expand_splits(sub, assignment);
      for (const auto& [pid, pc] : expanded.terms) out.add(pid, pc);
    }
  }
  return out;
}

std::string resolve_stratum(const std::string& cell_id, const CellCatalogue& cat,
                            const Stratification& sigma, const StratumAssignment& assignment,
                            double tol) {
  auto it = assignment.fixed.find(cell_id);
  if (it != assignment.fixed.end()) return it->second;
  const auto& cell = cat.get(cell_id);
  auto samples = ref_interior_points(cell.domain, cell.dim, 6);
  std::vector<std::string> candidates;
  for (const auto& [sid, stratum] : sigma.strata) {
    if (stratum.dim < cell.dim) continue;
    const auto& scell = cat.get(stratum.cell);
    bool contains = true;
    for (const auto& u : samples) {
      if (distance_to_cell(cell.map.eval(u), scell).distance > tol) {
        contains = false;
        break;
      }
    }
    if (contains) candidates.push_back(sid);
  }
  if (candidates.empty())
    throw Error("StratumStraddle",
                "cell " + cell_id + " is not contained in one stratum and has no split");
  // smallest containing stratum: minimal dimension
  std::string best = candidates[0];
  for (const auto& sid : candidates)
    if (sigma.get(sid).dim < sigma.get(best).dim) best = sid;
  return best;
}

double integrate_chain(const StratifiedForm& w, const Chain& c, const CellCatalogue& cat,
                       const Stratification& sigma, const StratumAssignment& assignment,
                       int order, int jobs) {
  Chain expanded = expand_splits(c, assignment);
  std::vector<std::pair<std::string, Rational>> terms(expanded.terms.begin(),
                                                      expanded.terms.end());
  std::vector<double> vals(terms.size(), 0.0);
  parallel_for(static_cast<int>(terms.size()), jobs, [&](int i) {
    const std::string sid = resolve_stratum(terms[i].first, cat, sigma, assignment);
    vals[i] =
        to_double(terms[i].second) * integrate_cell(w.component(sid), cat.get(terms[i].first), order);
  });
  double acc = 0;
  for (double v : vals) acc += v;
  return acc;
}

std::vector<std::pair<PolyMap, int>> ref_facets(RefDomain d, int k) {
  std::vector<std::pair<PolyMap, int>> out;
  if (d == RefDomain::Simplex) {
    for (int i = 0; i <= k; ++i) out.emplace_back(simplex_face_map(k, i), i % 2 == 0 ? 1 : -1);
  } else {
    for (int j = 0; j < k; ++j)
      for (int a = 0; a < 2; ++a)
        out.emplace_back(box_face_map(k, j, a), (j + 1 + a) % 2 == 0 ? 1 : -1);
  }
  return out;
}

namespace {

// cell with reference domain contracted toward its barycenter by 1-eps
PolyMap shrunk_map(const ParametrizedCell& cell, double eps) {
  auto bary = ref_barycenter(cell.domain, cell.dim);
  Rational s(1.0 - eps);
  PolyMap contraction;
  contraction.domain_dim = cell.dim;
  for (int i = 0; i < cell.dim; ++i) {
    Polynomial p = Polynomial::variable(cell.dim, i) * s;
    p = p + Polynomial::constant(cell.dim, bary[i] * (Rational(1) - s));
    contraction.comps.push_back(p);
  }
  return cell.map.compose(contraction);
}

double integrate_ref(const PolyForm& w_on_ref, RefDomain d, int k, int order) {
  MultiIndex top(k);
  std::iota(top.begin(), top.end(), 0);
  const Polynomial* integrand = w_on_ref.coeff(top);
  if (!integrand) return 0.0;
  int use_order = order >= 0 ? std::max(order, integrand->total_degree())
                             : integrand->total_degree();
  return quadrature_rule(d, k, std::max(0, use_order)).apply(*integrand);
}

}  // namespace

StokesReport stokes_residual(const StratifiedForm& w, const Chain& sigma_chain,
                             const CellCatalogue& cat, const Stratification& sigma,
                             const StratumAssignment& assignment, std::vector<double> eps_seq,
                             double tol, int order, int jobs) {
  StokesReport report;
  if (eps_seq.empty())
    for (int i = 1; i <= 8; ++i) eps_seq.push_back(std::ldexp(1.0, -i));
  StratifiedForm dw = w.derivative();

  Chain expanded = expand_splits(sigma_chain, assignment);
  std::vector<std::pair<std::string, Rational>> terms(expanded.terms.begin(),
                                                      expanded.terms.end());
  std::vector<std::string> strata_of(terms.size());
  for (size_t i = 0; i < terms.size(); ++i)
    strata_of[i] = resolve_stratum(terms[i].first, cat, sigma, assignment);

  // eps entries: both sides over the shrunk cells, which stay inside the
  // open stratum, so only the cell's own component is ever evaluated
  for (double eps : eps_seq) {
    StokesEpsEntry entry;
    entry.eps = eps;
    std::vector<double> ins(terms.size(), 0.0), outs(terms.size(), 0.0);
    parallel_for(static_cast<int>(terms.size()), jobs, [&](int i) {
      const auto& cell = cat.get(terms[i].first);
      double coeff = to_double(terms[i].second) * cell.orientation;
      PolyMap smap = shrunk_map(cell, eps);
      PolyForm pb_dw = pullback(smap, dw.component(strata_of[i]));
      ins[i] = coeff * integrate_ref(pb_dw, cell.domain, cell.dim, order);
      double bsum = 0;
      for (const auto& [fmap, sign] : ref_facets(cell.domain, cell.dim)) {
        PolyMap face = smap.compose(fmap);
        PolyForm pb_w = pullback(face, w.component(strata_of[i]));
        bsum += sign * integrate_ref(pb_w, cell.domain, cell.dim - 1, order);
      }
      outs[i] = coeff * bsum;
    });
    entry.interior = std::accumulate(ins.begin(), ins.end(), 0.0);
    entry.boundary = std::accumulate(outs.begin(), outs.end(), 0.0);
    entry.residual = std::abs(entry.interior - entry.boundary);
    report.eps_entries.push_back(entry);
  }

  // limit pair: full cells against dω, registered boundary chain against ω
  report.limit_interior = integrate_chain(dw, sigma_chain, cat, sigma, assignment, order, jobs);
  Chain bd = boundary(expanded, cat);
  report.limit_boundary = integrate_chain(w, bd, cat, sigma, assignment, order, jobs);
  report.limit_residual = std::abs(report.limit_interior - report.limit_boundary);

  double scale = std::abs(report.limit_interior) + std::abs(report.limit_boundary) + 1.0;
  double noise = 1e-12 * scale;
  for (size_t i = 1; i < report.eps_entries.size(); ++i)
    if (report.eps_entries[i].residual > report.eps_entries[i - 1].residual + noise)
      report.monotone_ok = false;
  report.pass = report.limit_residual <= tol && report.monotone_ok;
  return report;
}

}  // namespace strataforms
