#include "strataforms/builders.hpp"

#include <algorithm>

namespace strataforms {

namespace {

Rational R(long n, long d = 1) { return Rational(n, d); }

BuiltComplex from_complex(SimplicialComplex K, const std::string& prefix) {
  BuiltComplex out;
  out.K = std::move(K);
  out.prefix = prefix;
  out.K.populate_catalogue(out.cat, prefix);
  out.strat = stratification_from_complex(out.K, prefix, prefix);
  const int d = out.K.max_dim();
  out.top_chain.degree = d;
  for (const auto& s : out.K.simplices_of_dim(d)) {
    Rational coeff(1);
    if (d == out.K.ambient_dim) {
      // orient the chain consistently: sign of the affine chart determinant
      RatMatrix edges(d, RatVector(d));
      for (int j = 1; j <= d; ++j)
        for (int c = 0; c < d; ++c)
          edges[j - 1][c] = out.K.points[s[j]][c] - out.K.points[s[0]][c];
      Rational det(1);
      RatMatrix m = edges;
      for (int c = 0; c < d && det != 0; ++c) {
        int piv = c;
        while (piv < d && m[piv][c] == 0) ++piv;
        if (piv == d) {
          det = 0;
          break;
        }
        if (piv != c) {
          std::swap(m[piv], m[c]);
          det = -det;
        }
        det *= m[c][c];
        for (int r = c + 1; r < d; ++r) {
          if (m[r][c] == 0) continue;
          Rational f = m[r][c] / m[c][c];
          for (int j = c; j < d; ++j) m[r][j] -= f * m[c][j];
        }
      }
      if (det < 0) coeff = -1;
    }
    out.top_chain.add(simplex_cell_id(prefix, s), coeff);
  }
  return out;
}

// affine simplex cell on explicit vertices; faces left unregistered
ParametrizedCell make_simplex_cell(const std::string& id,
                                   const std::vector<std::vector<Rational>>& verts) {
  ParametrizedCell c;
  c.id = id;
  c.domain = RefDomain::Simplex;
  c.dim = static_cast<int>(verts.size()) - 1;
  c.ambient_dim = static_cast<int>(verts[0].size());
  PolyMap f;
  f.domain_dim = c.dim;
  for (int r = 0; r < c.ambient_dim; ++r) {
    Polynomial p = Polynomial::constant(c.dim, verts[0][r]);
    for (int j = 1; j <= c.dim; ++j) {
      Rational delta = verts[j][r] - verts[0][r];
      if (delta != 0) p = p + Polynomial::variable(c.dim, j - 1) * delta;
    }
    f.comps.push_back(p);
  }
  c.map = std::move(f);
  return c;
}

ParametrizedCell make_point_cell(const std::string& id, const std::vector<Rational>& p) {
  ParametrizedCell c;
  c.id = id;
  c.domain = RefDomain::Simplex;
  c.dim = 0;
  c.ambient_dim = static_cast<int>(p.size());
  c.map = PolyMap::constant(p);
  return c;
}

// affine box cell from corner `a` spanned by axis vectors (columns of span)
ParametrizedCell make_box_cell(const std::string& id, const std::vector<Rational>& a,
                               const std::vector<std::vector<Rational>>& span,
                               std::vector<std::pair<std::string, int>> faces = {}) {
  ParametrizedCell c;
  c.id = id;
  c.domain = RefDomain::Box;
  c.dim = static_cast<int>(span.size());
  c.ambient_dim = static_cast<int>(a.size());
  PolyMap f;
  f.domain_dim = c.dim;
  for (int r = 0; r < c.ambient_dim; ++r) {
    Polynomial p = Polynomial::constant(c.dim, a[r]);
    for (int j = 0; j < c.dim; ++j)
      if (span[j][r] != 0) p = p + Polynomial::variable(c.dim, j) * span[j][r];
    f.comps.push_back(p);
  }
  c.map = std::move(f);
  c.faces = std::move(faces);
  return c;
}

}  // namespace

BuiltComplex split_square() {
  SimplicialComplex K;
  K.ambient_dim = 2;
  K.points = {{R(0), R(0)}, {R(1), R(0)}, {R(1), R(1)}, {R(0), R(1)}};
  K.add_simplex({0, 1, 2});
  K.add_simplex({0, 2, 3});
  return from_complex(std::move(K), "sq");
}

BuiltComplex square_boxes(bool drop_one_edge) {
  BuiltComplex out;
  out.prefix = "box";
  const std::vector<std::vector<Rational>> pts = {
      {R(0), R(0)}, {R(1), R(0)}, {R(1), R(1)}, {R(0), R(1)}};
  // corners
  for (int i = 0; i < 4; ++i) out.cat.add(make_point_cell("box:p" + std::to_string(i), pts[i]));
  // edges as 1-boxes: e0 bottom, e1 right, e2 top, e3 left (all along +axis)
  auto edge = [&](const std::string& id, int from, int to) {
    std::vector<Rational> dir = {pts[to][0] - pts[from][0], pts[to][1] - pts[from][1]};
    auto c = make_box_cell(id, pts[from], {dir});
    c.faces = {{"box:p" + std::to_string(from), -1}, {"box:p" + std::to_string(to), 1}};
    out.cat.add(c);
  };
  edge("box:e0", 0, 1);
  edge("box:e1", 1, 2);
  edge("box:e2", 3, 2);
  edge("box:e3", 0, 3);
  // the square itself; box facets are ordered (axis0=0, axis0=1, axis1=0, axis1=1)
  auto sq = make_box_cell("box:face", pts[0], {{R(1), R(0)}, {R(0), R(1)}});
  sq.faces = {{"box:e3", -1}, {"box:e1", 1}, {"box:e0", 1}, {"box:e2", -1}};
  out.cat.add(sq);

  out.strat.id = "box";
  out.strat.ambient_dim = 2;
  for (int i = 0; i < 4; ++i) {
    Stratum s;
    s.id = "box:p" + std::to_string(i);
    s.dim = 0;
    s.cell = s.id;
    s.catalogue_cells = {s.id};
    out.strat.add(s);
  }
  auto add_edge_stratum = [&](const std::string& id, int a, int b) {
    Stratum s;
    s.id = id;
    s.dim = 1;
    s.cell = id;
    s.adjacency = {"box:p" + std::to_string(a), "box:p" + std::to_string(b)};
    s.catalogue_cells = {id};
    out.strat.add(s);
  };
  add_edge_stratum("box:e0", 0, 1);
  add_edge_stratum("box:e1", 1, 2);
  if (!drop_one_edge) add_edge_stratum("box:e2", 3, 2);
  add_edge_stratum("box:e3", 0, 3);
  Stratum top;
  top.id = "box:face";
  top.dim = 2;
  top.cell = "box:face";
  top.adjacency = {"box:e0", "box:e1", "box:e3", "box:p0", "box:p1", "box:p2", "box:p3"};
  if (!drop_one_edge) top.adjacency.insert("box:e2");
  top.catalogue_cells = {"box:face"};
  out.strat.add(top);

  out.top_chain.degree = 2;
  out.top_chain.add("box:face", Rational(1));
  return out;
}

DoubleSplitSquare double_split_square() {
  DoubleSplitSquare out;
  out.prefix = "dsq";
  SimplicialComplex K;
  K.ambient_dim = 2;
  K.points = {{R(0), R(0)}, {R(1), R(0)}, {R(1), R(1)}, {R(0), R(1)}, {R(1, 2), R(1, 2)}};
  K.add_simplex({0, 1, 4});
  K.add_simplex({1, 2, 4});
  K.add_simplex({2, 3, 4});
  K.add_simplex({0, 3, 4});
  out.K = K;
  K.populate_catalogue(out.cat, out.prefix);
  auto id = [&](std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return simplex_cell_id(out.prefix, v);
  };

  auto corner = [&](int v) {
    Stratum s;
    s.id = id({v});
    s.dim = 0;
    s.cell = s.id;
    s.catalogue_cells = {s.id};
    return s;
  };
  auto bedge = [&](int a, int b) {
    Stratum s;
    s.id = id({a, b});
    s.dim = 1;
    s.cell = s.id;
    s.adjacency = {id({a}), id({b})};
    s.catalogue_cells = {s.id};
    return s;
  };

  // whole-stratum cells for the coarse strata (the union of their pieces)
  const auto& P = K.points;
  out.cat.add(make_simplex_cell("dsq:cell:diag02", {P[0], P[2]}));
  out.cat.add(make_simplex_cell("dsq:cell:diag13", {P[1], P[3]}));
  out.cat.add(make_simplex_cell("dsq:cell:t012", {P[0], P[1], P[2]}));
  out.cat.add(make_simplex_cell("dsq:cell:t023", {P[0], P[2], P[3]}));
  out.cat.add(make_simplex_cell("dsq:cell:t123", {P[1], P[2], P[3]}));
  out.cat.add(make_simplex_cell("dsq:cell:t013", {P[0], P[1], P[3]}));

  // sigma_a: split by the diagonal 0-2 (which passes through the center 4)
  out.sigma_a.id = "dsq:a";
  out.sigma_a.ambient_dim = 2;
  for (int v = 0; v < 4; ++v) out.sigma_a.add(corner(v));
  for (auto [a, b] : std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 3}, {0, 3}})
    out.sigma_a.add(bedge(a, b));
  {
    Stratum diag;  // open diagonal (0,2) minus endpoints; center is interior
    diag.id = "dsq:a:diag";
    diag.dim = 1;
    diag.cell = "dsq:cell:diag02";
    diag.adjacency = {id({0}), id({2})};
    diag.catalogue_cells = {id({0, 4}), id({2, 4}), id({4})};
    out.sigma_a.add(diag);
    Stratum lowerT, upperT;
    lowerT.id = "dsq:a:lower";  // triangle 0-1-2
    lowerT.dim = 2;
    lowerT.cell = "dsq:cell:t012";
    lowerT.adjacency = {"dsq:a:diag", id({0, 1}), id({1, 2}), id({0}), id({1}), id({2})};
    lowerT.catalogue_cells = {id({0, 1, 4}), id({1, 2, 4}), id({1, 4})};
    out.sigma_a.add(lowerT);
    upperT.id = "dsq:a:upper";  // triangle 0-2-3
    upperT.dim = 2;
    upperT.cell = "dsq:cell:t023";
    upperT.adjacency = {"dsq:a:diag", id({2, 3}), id({0, 3}), id({0}), id({2}), id({3})};
    upperT.catalogue_cells = {id({2, 3, 4}), id({0, 3, 4}), id({3, 4})};
    out.sigma_a.add(upperT);
  }

  // sigma_b: split by the diagonal 1-3
  out.sigma_b.id = "dsq:b";
  out.sigma_b.ambient_dim = 2;
  for (int v = 0; v < 4; ++v) out.sigma_b.add(corner(v));
  for (auto [a, b] : std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 3}, {0, 3}})
    out.sigma_b.add(bedge(a, b));
  {
    Stratum diag;
    diag.id = "dsq:b:diag";
    diag.dim = 1;
    diag.cell = "dsq:cell:diag13";
    diag.adjacency = {id({1}), id({3})};
    diag.catalogue_cells = {id({1, 4}), id({3, 4}), id({4})};
    out.sigma_b.add(diag);
    Stratum left, right;
    right.id = "dsq:b:right";  // triangle 1-2-3
    right.dim = 2;
    right.cell = "dsq:cell:t123";
    right.adjacency = {"dsq:b:diag", id({1, 2}), id({2, 3}), id({1}), id({2}), id({3})};
    right.catalogue_cells = {id({1, 2, 4}), id({2, 3, 4}), id({2, 4})};
    out.sigma_b.add(right);
    left.id = "dsq:b:left";  // triangle 0-1-3
    left.dim = 2;
    left.cell = "dsq:cell:t013";
    left.adjacency = {"dsq:b:diag", id({0, 1}), id({0, 3}), id({0}), id({1}), id({3})};
    left.catalogue_cells = {id({0, 1, 4}), id({0, 3, 4}), id({0, 4})};
    out.sigma_b.add(left);
  }
  return out;
}

BuiltComplex fan_disk(int triangles) {
  // star-shaped rational polygon around the origin: directions ordered by
  // angle, radii wobbling between 2 and 3
  static const std::vector<std::pair<int, int>> dirs = {
      {5, 0},   {4, 1},   {3, 2},   {1, 1},   {2, 3},   {1, 4},   {0, 5},
      {-1, 4},  {-2, 3},  {-1, 1},  {-3, 2},  {-4, 1},  {-5, 0},  {-4, -1},
      {-3, -2}, {-1, -1}, {-2, -3}, {-1, -4}, {0, -5},  {1, -4},  {2, -3},
      {1, -1},  {3, -2},  {4, -1}};
  if (triangles < 3 || triangles > static_cast<int>(dirs.size()))
    throw Error("BadParameter", "fan_disk supports 3..24 triangles");
  SimplicialComplex K;
  K.ambient_dim = 2;
  K.points.push_back({R(0), R(0)});
  for (int i = 0; i < triangles; ++i) {
    // spread the chosen directions evenly over the full circle
    const auto& d = dirs[(i * dirs.size()) / triangles];
    Rational r = (i % 2 == 0) ? R(2) : R(5, 2);
    K.points.push_back({r * R(d.first), r * R(d.second)});
  }
  for (int i = 1; i <= triangles; ++i) {
    int j = i % triangles + 1;
    K.add_simplex({0, i, j});
  }
  return from_complex(std::move(K), "disk");
}

BuiltComplex polygon_circle() {
  SimplicialComplex K;
  K.ambient_dim = 2;
  K.points = {{R(2), R(0)}, {R(1), R(2)}, {R(-2), R(1)}, {R(-2), R(-1)}, {R(1), R(-2)}};
  for (size_t i = 0; i < K.points.size(); ++i)
    K.add_simplex({static_cast<int>(i), static_cast<int>((i + 1) % K.points.size())});
  return from_complex(std::move(K), "circ");
}

BuiltComplex octahedron() {
  SimplicialComplex K;
  K.ambient_dim = 3;
  K.points = {{R(1), R(0), R(0)},  {R(-1), R(0), R(0)}, {R(0), R(1), R(0)},
              {R(0), R(-1), R(0)}, {R(0), R(0), R(1)},  {R(0), R(0), R(-1)}};
  for (int x : {0, 1})
    for (int y : {2, 3})
      for (int z : {4, 5}) K.add_simplex({x, y, z});
  return from_complex(std::move(K), "oct");
}

BuiltComplex product_torus() {
  // product of two triangle boundaries in R^2 x R^2
  const std::vector<std::vector<Rational>> tri = {{R(2), R(0)}, {R(-1), R(1)}, {R(-1), R(-1)}};
  SimplicialComplex K;
  K.ambient_dim = 4;
  auto vid = [](int i, int j) { return 3 * i + j; };
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      K.points.push_back({tri[i][0], tri[i][1], tri[j][0], tri[j][1]});
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      int i1 = (i + 1) % 3, j1 = (j + 1) % 3;
      // quad (i,j)-(i1,j)-(i1,j1)-(i,j1) split along its diagonal
      K.add_simplex({vid(i, j), vid(i1, j), vid(i1, j1)});
      K.add_simplex({vid(i, j), vid(i1, j1), vid(i, j1)});
    }
  return from_complex(std::move(K), "torus");
}

BuiltComplex tetrahedron() {
  SimplicialComplex K;
  K.ambient_dim = 3;
  K.points = {{R(0), R(0), R(0)}, {R(1), R(0), R(0)}, {R(0), R(1), R(0)}, {R(0), R(0), R(1)}};
  K.add_simplex({0, 1, 2, 3});
  return from_complex(std::move(K), "tet");
}

BuiltComplex split_tetrahedron() {
  // split by the plane through edge (0,1) and the midpoint of edge (2,3)
  SimplicialComplex K;
  K.ambient_dim = 3;
  K.points = {{R(0), R(0), R(0)},
              {R(1), R(0), R(0)},
              {R(0), R(1), R(0)},
              {R(0), R(0), R(1)},
              {R(0), R(1, 2), R(1, 2)}};
  K.add_simplex({0, 1, 2, 4});
  K.add_simplex({0, 1, 3, 4});
  return from_complex(std::move(K), "stet");
}

BuiltComplex cone_square() {
  // square coned at its center; the stratification keeps only cone-shaped
  // strata (center, open seams, open sectors), as a cone retraction domain
  SimplicialComplex K;
  K.ambient_dim = 2;
  K.points = {{R(-1), R(-1)}, {R(1), R(-1)}, {R(1), R(1)}, {R(-1), R(1)}, {R(0), R(0)}};
  K.add_simplex({0, 1, 4});
  K.add_simplex({1, 2, 4});
  K.add_simplex({2, 3, 4});
  K.add_simplex({0, 3, 4});
  BuiltComplex out;
  out.K = K;
  out.prefix = "cone";
  K.populate_catalogue(out.cat, out.prefix);
  out.top_chain.degree = 2;
  for (const auto& s : K.simplices_of_dim(2))
    out.top_chain.add(simplex_cell_id(out.prefix, s), Rational(1));

  out.strat.id = "cone";
  out.strat.ambient_dim = 2;
  auto id = [&](std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return simplex_cell_id(out.prefix, v);
  };
  Stratum center;
  center.id = id({4});
  center.dim = 0;
  center.cell = center.id;
  center.catalogue_cells = {center.id};
  out.strat.add(center);
  for (int v = 0; v < 4; ++v) {
    Stratum seam;
    seam.id = id({v, 4});
    seam.dim = 1;
    seam.cell = seam.id;
    seam.adjacency = {id({4})};
    seam.catalogue_cells = {seam.id};
    out.strat.add(seam);
  }
  for (int v = 0; v < 4; ++v) {
    int w = (v + 1) % 4;
    Stratum sector;
    sector.id = id({v, w, 4});
    sector.dim = 2;
    sector.cell = sector.id;
    sector.adjacency = {id({v, 4}), id({w, 4}), id({4})};
    sector.catalogue_cells = {sector.id};
    out.strat.add(sector);
  }
  return out;
}

BuiltComplex half_plane_strip() {
  BuiltComplex out;
  out.prefix = "half";
  // open strip (0,1)x(0,1] as a box cell, over the open segment (0,1)x{0}
  out.cat.add(make_box_cell("half:strip", {R(0), R(0)}, {{R(1), R(0)}, {R(0), R(1)}}));
  out.cat.add(make_box_cell("half:axis", {R(0), R(0)}, {{R(1), R(0)}}));
  out.strat.id = "half";
  out.strat.ambient_dim = 2;
  Stratum axis;
  axis.id = "half:axis";
  axis.dim = 1;
  axis.cell = "half:axis";
  axis.catalogue_cells = {"half:axis"};
  out.strat.add(axis);
  Stratum strip;
  strip.id = "half:strip";
  strip.dim = 2;
  strip.cell = "half:strip";
  strip.adjacency = {"half:axis"};
  strip.catalogue_cells = {"half:strip"};
  out.strat.add(strip);
  return out;
}

BuiltComplex offset_square() {
  BuiltComplex out;
  out.prefix = "wall";
  out.cat.add(make_box_cell("wall:face", {R(1), R(0)}, {{R(1), R(0)}, {R(0), R(1)}}));
  out.strat.id = "wall";
  out.strat.ambient_dim = 2;
  Stratum s;
  s.id = "wall:face";
  s.dim = 2;
  s.cell = "wall:face";
  s.catalogue_cells = {"wall:face"};
  out.strat.add(s);
  out.top_chain.degree = 2;
  out.top_chain.add("wall:face", Rational(1));
  return out;
}

BuiltComplex triangle_band() {
  BuiltComplex out;
  out.prefix = "band";
  // origin, base edge y=0, hypotenuse y=x over x in (0,1), open band between
  out.cat.add(make_point_cell("band:origin", {R(0), R(0)}));
  out.cat.add(make_box_cell("band:lo", {R(0), R(0)}, {{R(1), R(0)}}));
  {
    // graph of theta_hi(x) = x
    ParametrizedCell hyp;
    hyp.id = "band:hi";
    hyp.domain = RefDomain::Box;
    hyp.dim = 1;
    hyp.ambient_dim = 2;
    PolyMap f;
    f.domain_dim = 1;
    f.comps = {Polynomial::variable(1, 0), Polynomial::variable(1, 0)};
    hyp.map = f;
    out.cat.add(hyp);
  }
  {
    // band cell: (x, y) = (u, u v), u, v in (0,1)
    ParametrizedCell band;
    band.id = "band:open";
    band.domain = RefDomain::Box;
    band.dim = 2;
    band.ambient_dim = 2;
    PolyMap f;
    f.domain_dim = 2;
    f.comps = {Polynomial::variable(2, 0),
               Polynomial::variable(2, 0) * Polynomial::variable(2, 1)};
    band.map = f;
    out.cat.add(band);
  }
  out.strat.id = "band";
  out.strat.ambient_dim = 2;
  Stratum origin;
  origin.id = "band:origin";
  origin.dim = 0;
  origin.cell = "band:origin";
  origin.catalogue_cells = {"band:origin"};
  out.strat.add(origin);
  for (const std::string idp : {"band:lo", "band:hi"}) {
    Stratum s;
    s.id = idp;
    s.dim = 1;
    s.cell = idp;
    s.adjacency = {"band:origin"};
    s.catalogue_cells = {idp};
    out.strat.add(s);
  }
  Stratum open_band;
  open_band.id = "band:open";
  open_band.dim = 2;
  open_band.cell = "band:open";
  open_band.adjacency = {"band:lo", "band:hi", "band:origin"};
  open_band.catalogue_cells = {"band:open"};
  out.strat.add(open_band);
  return out;
}

}  // namespace strataforms
