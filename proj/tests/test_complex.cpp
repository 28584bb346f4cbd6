#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "strataforms/builders.hpp"
#include "strataforms/complex.hpp"

using namespace strataforms;

namespace {
// random face-closed complex on up to `max_vertices` points in R^3
SimplicialComplex random_complex(std::mt19937_64& rng, int max_vertices, int max_simplices) {
  SimplicialComplex K;
  K.ambient_dim = 3;
  std::uniform_int_distribution<int> coord(-5, 5);
  int nv = 4 + static_cast<int>(rng() % (max_vertices - 3));
  for (int i = 0; i < nv; ++i)
    K.points.push_back({Rational(coord(rng)), Rational(coord(rng)), Rational(coord(rng))});
  int attempts = 3 + static_cast<int>(rng() % max_simplices);
  for (int a = 0; a < attempts; ++a) {
    int dim = 1 + static_cast<int>(rng() % 3);
    std::vector<int> v;
    while (static_cast<int>(v.size()) < dim + 1) {
      int c = static_cast<int>(rng() % nv);
      if (std::find(v.begin(), v.end(), c) == v.end()) v.push_back(c);
    }
    K.add_simplex(v);
    if (K.simplices.size() > 180) break;
  }
  return K;
}
}  // namespace

TEST_CASE("simplex orientation sign") {
  Simplex s{{2, 0, 1}};
  auto [canon, sign] = s.canonical();
  CHECK(canon.vertices == std::vector<int>{0, 1, 2});
  CHECK(sign == 1);  // (2,0,1) -> even permutation
  Simplex t{{1, 0, 2}};
  CHECK(t.canonical().second == -1);
  Simplex rep{{1, 1, 2}};
  CHECK(rep.canonical().second == 0);
}

TEST_CASE("boundary of a triangle and an edge") {
  auto sq = split_square();
  // triangle [v0,v1,v2]
  Chain c;
  c.degree = 2;
  c.add(simplex_cell_id("sq", {0, 1, 2}), Rational(1));
  Chain b = boundary(c, sq.cat);
  CHECK(b.terms.at(simplex_cell_id("sq", {1, 2})) == Rational(1));
  CHECK(b.terms.at(simplex_cell_id("sq", {0, 2})) == Rational(-1));
  CHECK(b.terms.at(simplex_cell_id("sq", {0, 1})) == Rational(1));

  Chain e;
  e.degree = 1;
  e.add(simplex_cell_id("sq", {0, 1}), Rational(1));
  Chain be = boundary(e, sq.cat);
  CHECK(be.terms.at(simplex_cell_id("sq", {1})) == Rational(1));
  CHECK(be.terms.at(simplex_cell_id("sq", {0})) == Rational(-1));
}

TEST_CASE("boundary of boundary vanishes on random chains") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 12; ++trial) {
    SimplicialComplex K = random_complex(rng, 12, 40);
    CHECK(K.simplices.size() <= 200);
    CellCatalogue cat;
    K.populate_catalogue(cat, "r");
    std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
    for (int k = 1; k <= K.max_dim(); ++k) {
      Chain c;
      c.degree = k;
      for (const auto& s : K.simplices_of_dim(k))
        c.add(simplex_cell_id("r", s), Rational(num(rng), den(rng)));
      Chain bb = boundary(boundary(c, cat), cat);
      CHECK(bb.is_zero());
    }
  }
}

TEST_CASE("missing face is reported") {
  CellCatalogue cat;
  ParametrizedCell cell;
  cell.id = "lonely";
  cell.domain = RefDomain::Simplex;
  cell.dim = 1;
  cell.ambient_dim = 1;
  cell.map.domain_dim = 1;
  cell.map.comps = {Polynomial::variable(1, 0)};
  cell.faces = {{"ghost0", 1}, {"ghost1", -1}};
  cat.add(cell);
  Chain c;
  c.degree = 1;
  c.add("lonely", Rational(1));
  CHECK_THROWS_WITH_AS(boundary(c, cat), doctest::Contains("ghost"), Error);
}

TEST_CASE("star of simplices") {
  // lone triangle: star of a vertex is the vertex, 2 edges, the triangle
  SimplicialComplex K;
  K.ambient_dim = 2;
  K.points = {{Rational(0), Rational(0)}, {Rational(1), Rational(0)}, {Rational(0), Rational(1)}};
  K.add_simplex({0, 1, 2});
  auto st = K.star({0});
  CHECK(st.size() == 4);
  // top simplex: star is itself
  CHECK(K.star({0, 1, 2}).size() == 1);
  CHECK_THROWS_AS(K.star({7}), Error);

  // interior vertex of a 6-triangle fan disk: 1 + 6 + 6 = 13
  auto disk = fan_disk(6);
  auto star0 = disk.K.star({0});
  // brute-force face-relation oracle
  int count = 0;
  for (const auto& t : disk.K.simplices)
    if (std::find(t.begin(), t.end(), 0) != t.end()) ++count;
  CHECK(static_cast<int>(star0.size()) == count);
  CHECK(star0.size() == 13);

  // every element of the star contains the simplex as a face
  for (const auto& t : star0)
    CHECK(std::find(t.begin(), t.end(), 0) != t.end());
}

TEST_CASE("cell audits: rank and face agreement") {
  auto sq = split_square();
  for (const auto& [cid, cell] : sq.cat.all()) {
    auto audit = audit_cell(cell, sq.cat, 6, 1e-9);
    CHECK(audit.rank_ok);
    CHECK(audit.faces_ok);
  }
  // a cell whose declared face does not sit on its facet
  CellCatalogue cat;
  ParametrizedCell wrong = sq.cat.get(simplex_cell_id("sq", {0, 1, 2}));
  wrong.id = "wrong";
  wrong.faces[0] = {simplex_cell_id("sq", {0, 1}), 1};  // facet 0 is really [1,2]
  cat.add(wrong);
  for (const auto& [cid, cell] : sq.cat.all()) cat.add(cell);
  auto audit = audit_cell(cat.get("wrong"), cat, 6, 1e-9);
  CHECK(!audit.faces_ok);

  // degenerate map: rank deficiency is flagged
  ParametrizedCell flat;
  flat.id = "flat";
  flat.domain = RefDomain::Box;
  flat.dim = 2;
  flat.ambient_dim = 2;
  flat.map.domain_dim = 2;
  flat.map.comps = {Polynomial::variable(2, 0), Polynomial::variable(2, 0)};
  cat.add(flat);
  CHECK(!audit_cell(cat.get("flat"), cat, 4, 1e-9).rank_ok);
}

TEST_CASE("boundary respects cell orientation flags") {
  auto sq = square_boxes();
  Chain c = sq.top_chain;
  Chain b = boundary(c, sq.cat);
  // counterclockwise: +e0 (bottom) +e1 (right) -e2 (top) -e3 (left)
  CHECK(b.terms.at("box:e0") == Rational(1));
  CHECK(b.terms.at("box:e1") == Rational(1));
  CHECK(b.terms.at("box:e2") == Rational(-1));
  CHECK(b.terms.at("box:e3") == Rational(-1));
  CHECK(boundary(b, sq.cat).is_zero());
}
