#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "strataforms/builders.hpp"
#include "strataforms/integrate.hpp"

using namespace strataforms;

TEST_CASE("frontier validation on the complete and broken squares") {
  auto good = square_boxes(false);
  FrontierReport ok = validate_frontier(good.strat, good.cat, 16);
  CHECK(ok.pass);
  CHECK(ok.overlap_ok);

  auto broken = square_boxes(true);
  FrontierReport bad = validate_frontier(broken.strat, broken.cat, 16);
  CHECK(!bad.pass);
  REQUIRE(!bad.failures.empty());
  // flagged points sit near the missing top edge y = 1
  for (const auto& f : bad.failures) CHECK(f.point[1] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("any simplicial complex converts to a passing stratification") {
  for (auto built : {split_square(), fan_disk(8), octahedron()}) {
    FrontierReport r = validate_frontier(built.strat, built.cat, 8);
    CHECK(r.pass);
    // combinatorial oracle: boundary faces of each simplex are simplices of
    // the complex (face closure), so coverage is exact by construction
    for (const auto& s : built.K.simplices)
      if (s.size() > 1)
        for (size_t i = 0; i < s.size(); ++i) {
          std::vector<int> face;
          for (size_t j = 0; j < s.size(); ++j)
            if (j != i) face.push_back(s[j]);
          CHECK(built.K.has(face));
        }
  }
}

TEST_CASE("refine_common: idempotent on equal inputs") {
  auto dsq = double_split_square();
  auto r = refine_common(dsq.sigma_a, dsq.sigma_a, dsq.cat);
  CHECK(r.refined.strata.size() == dsq.sigma_a.strata.size());
  for (const auto& [sid, s] : dsq.sigma_a.strata) {
    REQUIRE(r.refined.strata.count(sid) == 1);
    CHECK(r.refined.get(sid).catalogue_cells == s.catalogue_cells);
  }
}

TEST_CASE("refine_common: a refining input is returned") {
  auto dsq = double_split_square();
  // coarse stratification: whole open square over the shared catalogue
  Stratification coarse;
  coarse.id = "coarse";
  coarse.ambient_dim = 2;
  auto id = [&](std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return simplex_cell_id(dsq.prefix, v);
  };
  for (int v = 0; v < 4; ++v) {
    Stratum s;
    s.id = id({v});
    s.dim = 0;
    s.cell = s.id;
    s.catalogue_cells = {s.id};
    coarse.add(s);
  }
  for (auto [a, b] : std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 3}, {0, 3}}) {
    Stratum s;
    s.id = id({a, b});
    s.dim = 1;
    s.cell = s.id;
    s.adjacency = {id({a}), id({b})};
    s.catalogue_cells = {s.id};
    coarse.add(s);
  }
  Stratum open_square;
  open_square.id = "coarse:open";
  open_square.dim = 2;
  open_square.cell = "dsq:cell:t012";  // representative only; never sampled here
  open_square.adjacency = {id({0, 1}), id({1, 2}), id({2, 3}), id({0, 3}),
                           id({0}),    id({1}),    id({2}),    id({3})};
  for (int t = 0; t < 4; ++t) {
    int i = t, j = (t + 1) % 4;
    open_square.catalogue_cells.insert(id({i, j, 4}));
    open_square.catalogue_cells.insert(id({i, 4}));
  }
  open_square.catalogue_cells.insert(id({4}));
  coarse.add(open_square);

  auto r = refine_common(coarse, dsq.sigma_a, dsq.cat);
  CHECK(r.refined.strata.size() == dsq.sigma_a.strata.size());
  for (const auto& [sid, s] : dsq.sigma_a.strata) CHECK(r.refined.strata.count(sid) == 1);
  // each coarse stratum is a union of refined strata
  for (const auto& [sid, s] : coarse.strata) {
    std::set<std::string> covered;
    for (const auto& [rid, rs] : r.refined.strata)
      if (r.parent_in_a.at(rid) == sid)
        covered.insert(rs.catalogue_cells.begin(), rs.catalogue_cells.end());
    CHECK(covered == s.catalogue_cells);
  }
}

TEST_CASE("refine_common: transverse diagonals give the 4-triangle refinement") {
  auto dsq = double_split_square();
  auto r = refine_common(dsq.sigma_a, dsq.sigma_b, dsq.cat);
  // the full arrangement: 4 corners + 4 boundary edges + 4 half-diagonals +
  // center + 4 small triangles = 17 strata
  CHECK(r.refined.strata.size() == 17);
  int triangles = 0;
  for (const auto& [sid, s] : r.refined.strata)
    if (s.dim == 2) {
      ++triangles;
      CHECK(s.catalogue_cells.size() == 1);
    }
  CHECK(triangles == 4);

  // frontier PASS survives refinement, and the inputs pass too
  CHECK(validate_frontier(r.refined, dsq.cat, 8).pass);
  CHECK(validate_frontier(dsq.sigma_a, dsq.cat, 8).pass);
  CHECK(validate_frontier(dsq.sigma_b, dsq.cat, 8).pass);
}

TEST_CASE("refine_common rejects unregistered strata") {
  auto dsq = double_split_square();
  Stratification naked = dsq.sigma_a;
  naked.strata.begin()->second.catalogue_cells.clear();
  CHECK_THROWS_WITH_AS(refine_common(naked, dsq.sigma_b, dsq.cat),
                       doctest::Contains("IncompatibleCatalogue"), Error);
}

TEST_CASE("graph closure: smooth, broken, and normal-direction forms") {
  auto half = half_plane_strip();
  PolyForm dx = PolyForm::dx(2, 0);
  PolyForm dy = PolyForm::dx(2, 1);
  PolyForm xdx(2, 1);
  xdx.add_term({0}, Polynomial::variable(2, 0));
  PolyForm zero1 = PolyForm::zero(2, 1);

  auto make = [&](const PolyForm& on_strip, const PolyForm& on_axis) {
    StratifiedForm w;
    w.stratification = half.strat.id;
    w.degree = 1;
    w.components["half:strip"] = on_strip;
    w.components["half:axis"] = on_axis;
    return w;
  };

  // dx on both strata: globally smooth
  CHECK(check_graph_closed(make(dx, dx), half.strat, half.cat).pass);

  // x dx on the strip vs 0 on the axis: limit x vs 0 fails away from origin
  auto broken = check_graph_closed(make(xdx, zero1), half.strat, half.cat);
  CHECK(!broken.pass);
  REQUIRE(!broken.failures.empty());
  CHECK(broken.max_residual > 0.1);
  for (const auto& f : broken.failures) CHECK(std::abs(f.point[1]) < 1e-9);

  // dy on the strip vs 0 on the axis: e2 is not tangent to the axis, no
  // constraint arises
  CHECK(check_graph_closed(make(dy, zero1), half.strat, half.cat).pass);
}

TEST_CASE("graph closure PASS is preserved under refinement") {
  auto dsq = double_split_square();
  std::mt19937_64 rng(19);
  PolyForm w = oracles::random_form(rng, 2, 1, 2, 2);
  StratifiedForm ws;
  ws.stratification = dsq.sigma_a.id;
  ws.degree = 1;
  for (const auto& [sid, s] : dsq.sigma_a.strata) ws.components[sid] = w;
  CHECK(check_graph_closed(ws, dsq.sigma_a, dsq.cat).pass);

  auto r = refine_common(dsq.sigma_a, dsq.sigma_b, dsq.cat);
  StratifiedForm refined = ws.on_refinement(r.refined, r.parent_in_a);
  CHECK(check_graph_closed(refined, r.refined, dsq.cat).pass);
}

TEST_CASE("sup-norm estimates") {
  auto sq = square_boxes();
  StratifiedForm w;
  w.stratification = sq.strat.id;
  w.degree = 1;
  w.components["box:face"] = PolyForm::dx(2, 0);
  auto est = sup_norm_estimate(w, sq.strat, sq.cat, 32);
  CHECK(est.value == doctest::Approx(1.0).epsilon(1e-12));

  StratifiedForm zero;
  zero.stratification = sq.strat.id;
  zero.degree = 1;
  zero.components["box:face"] = PolyForm::zero(2, 1);
  CHECK(sup_norm_estimate(zero, sq.strat, sq.cat).value == doctest::Approx(0.0));

  // x dy on [0,2]^2 attains 2 at the far corner
  CellCatalogue cat2;
  ParametrizedCell big;
  big.id = "big";
  big.domain = RefDomain::Box;
  big.dim = 2;
  big.ambient_dim = 2;
  big.map.domain_dim = 2;
  big.map.comps = {Polynomial::variable(2, 0) * Rational(2),
                   Polynomial::variable(2, 1) * Rational(2)};
  cat2.add(big);
  Stratification s2;
  s2.id = "big";
  s2.ambient_dim = 2;
  Stratum st;
  st.id = "big";
  st.dim = 2;
  st.cell = "big";
  s2.add(st);
  StratifiedForm xdy;
  xdy.stratification = "big";
  xdy.degree = 1;
  PolyForm f(2, 1);
  f.add_term({1}, Polynomial::variable(2, 0));
  xdy.components["big"] = f;
  xdy.declared_bound = Rational(2);
  auto est2 = sup_norm_estimate(xdy, s2, cat2, 64);
  CHECK(est2.value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(est2.bound_respected);
  xdy.declared_bound = Rational(1);
  CHECK(!sup_norm_estimate(xdy, s2, cat2, 64).bound_respected);
}

TEST_CASE("stokes residual: globally polynomial form on the box square") {
  auto sq = square_boxes();
  StratifiedForm w;
  w.stratification = sq.strat.id;
  w.degree = 1;
  PolyForm xdy(2, 1);
  xdy.add_term({1}, Polynomial::variable(2, 0));
  for (const auto& [sid, s] : sq.strat.strata) w.components[sid] = xdy;
  auto report = stokes_residual(w, sq.top_chain, sq.cat, sq.strat);
  CHECK(report.pass);
  CHECK(report.limit_interior == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(report.limit_boundary == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(report.limit_residual < 1e-12);
}

TEST_CASE("stokes residual: closed form forces zero boundary integral") {
  auto sq = split_square();
  StratifiedForm w;
  w.stratification = sq.strat.id;
  w.degree = 1;
  // closed 1-form: d(x^2 + y) = 2x dx + dy
  PolyForm closed(2, 1);
  closed.add_term({0}, Polynomial::variable(2, 0) * Rational(2));
  closed.add_term({1}, Polynomial::constant(2, Rational(1)));
  for (const auto& [sid, s] : sq.strat.strata) w.components[sid] = closed;
  auto report = stokes_residual(w, sq.top_chain, sq.cat, sq.strat);
  CHECK(report.pass);
  CHECK(report.limit_boundary == doctest::Approx(0.0).epsilon(1e-12));
}

namespace {
// per-triangle forms with matching tangential parts along x = y
struct SplitPair {
  StratifiedForm w;
};
SplitPair matched_split_form(const BuiltComplex& sq, std::mt19937_64& rng) {
  PolyForm base = oracles::random_form(rng, 2, 1, 3, 2);
  // upper correction (x-y) A + d(x-y) ∧ B vanishes tangentially on x = y
  Polynomial xy = Polynomial::variable(2, 0) - Polynomial::variable(2, 1);
  PolyForm A = oracles::random_form(rng, 2, 1, 2, 2);
  PolyForm dxy(2, 1);
  dxy.add_term({0}, Polynomial::constant(2, Rational(1)));
  dxy.add_term({1}, Polynomial::constant(2, Rational(-1)));
  PolyForm B = oracles::random_form(rng, 2, 0, 2, 1);
  PolyForm upper = base + A.scaled(xy) + wedge(dxy, B);

  StratifiedForm w;
  w.stratification = sq.strat.id;
  w.degree = 1;
  auto id = [&](std::vector<int> v) { return simplex_cell_id("sq", v); };
  w.components[id({0, 1, 2})] = base;   // lower triangle
  w.components[id({0, 2, 3})] = upper;  // upper triangle
  w.components[id({0, 2})] = base;      // diagonal: tangential parts agree
  w.components[id({0, 1})] = base;
  w.components[id({1, 2})] = base;
  w.components[id({2, 3})] = upper;
  w.components[id({0, 3})] = upper;
  for (int v = 0; v < 4; ++v) w.components[id({v})] = base;
  return {w};
}
}  // namespace

TEST_CASE("stokes residual: stratified split square with matching tangential parts") {
  auto sq = split_square();
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    auto pair = matched_split_form(sq, rng);
    CHECK(check_graph_closed(pair.w, sq.strat, sq.cat).pass);
    auto report = stokes_residual(pair.w, sq.top_chain, sq.cat, sq.strat);
    CHECK(report.pass);
    CHECK(report.limit_residual <= 1e-9);
  }
}

TEST_CASE("stokes residual: tangential mismatch equals the jump line integral") {
  auto sq = split_square();
  std::mt19937_64 rng(11);
  auto pair = matched_split_form(sq, rng);
  // break the upper component tangentially: add c*(dx + dy)
  PolyForm jump(2, 1);
  jump.add_term({0}, Polynomial::constant(2, Rational(1, 3)));
  jump.add_term({1}, Polynomial::constant(2, Rational(1, 3)));
  // the user breaks the upper expression: the change applies across the whole
  // closure of the upper triangle (its outer edges included), while the
  // diagonal keeps the lower side's values
  auto upper_id = simplex_cell_id("sq", {0, 2, 3});
  StratifiedForm broken = pair.w;
  broken.components[upper_id] = broken.components[upper_id] + jump;
  broken.components[simplex_cell_id("sq", {2, 3})] =
      broken.components[simplex_cell_id("sq", {2, 3})] + jump;
  broken.components[simplex_cell_id("sq", {0, 3})] =
      broken.components[simplex_cell_id("sq", {0, 3})] + jump;
  CHECK(!check_graph_closed(broken, sq.strat, sq.cat).pass);

  auto report = stokes_residual(broken, sq.top_chain, sq.cat, sq.strat);
  CHECK(!report.pass);
  // independent line-integral oracle for the jump across the diagonal
  double oracle =
      std::abs(to_double(oracles::integrate_cell_exact(jump, sq.cat.get(simplex_cell_id("sq", {0, 2})))));
  CHECK(report.limit_residual == doctest::Approx(oracle).epsilon(1e-9));
}
