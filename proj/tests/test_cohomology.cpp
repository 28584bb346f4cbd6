#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "strataforms/builders.hpp"
#include "strataforms/cohomology.hpp"

using namespace strataforms;

namespace {
SimplicialComplex triangle_boundary() {
  SimplicialComplex K;
  K.ambient_dim = 2;
  K.points = {{Rational(0), Rational(0)}, {Rational(1), Rational(0)}, {Rational(0), Rational(1)}};
  K.add_simplex({0, 1});
  K.add_simplex({1, 2});
  K.add_simplex({0, 2});
  return K;
}

SimplicialComplex random_complex(std::mt19937_64& rng, int max_vertices, int attempts,
                                 int cap = 280) {
  SimplicialComplex K;
  K.ambient_dim = 3;
  std::uniform_int_distribution<int> coord(-9, 9);
  int nv = 3 + static_cast<int>(rng() % (max_vertices - 2));
  for (int i = 0; i < nv; ++i)
    K.points.push_back({Rational(coord(rng)), Rational(coord(rng)), Rational(coord(rng))});
  for (int a = 0; a < attempts; ++a) {
    int dim = 1 + static_cast<int>(rng() % 3);
    std::vector<int> v;
    while (static_cast<int>(v.size()) < dim + 1) {
      int c = static_cast<int>(rng() % nv);
      if (std::find(v.begin(), v.end(), c) == v.end()) v.push_back(c);
    }
    K.add_simplex(v);
    if (static_cast<int>(K.simplices.size()) > cap) break;
  }
  return K;
}

// independent Betti oracle: dense rational row-reduction ranks
BettiTable betti_oracle(const SimplicialComplex& K) {
  BettiTable t;
  int dmax = K.max_dim();
  std::vector<int> rank_d(dmax + 2, 0);
  for (int k = 1; k <= dmax; ++k) rank_d[k] = oracles::rank_gauss(K.boundary_matrix(k));
  for (int k = 0; k <= dmax; ++k)
    t.b.push_back(static_cast<int>(K.simplices_of_dim(k).size()) - rank_d[k] - rank_d[k + 1]);
  return t;
}
}  // namespace

TEST_CASE("coboundary on an edge and constants") {
  SimplicialComplex K = triangle_boundary();
  Cochain f;
  f.degree = 0;
  f.set({0}, Rational(1));  // indicator of v0
  Cochain df = coboundary(f, K);
  // (df)([0,1]) = f(1) - f(0) = -1
  CHECK(df({0, 1}) == Rational(-1));
  CHECK(df({0, 2}) == Rational(-1));
  CHECK(df({1, 2}) == Rational(0));

  Cochain c;
  c.degree = 0;
  for (int v : {0, 1, 2}) c.set({v}, Rational(7, 3));
  CHECK(coboundary(c, K).is_zero());
}

TEST_CASE("d of d vanishes on random cochains") {
  std::mt19937_64 rng(5);
  SimplicialComplex K = random_complex(rng, 10, 25, 60);
  std::uniform_int_distribution<int> val(-5, 5);
  for (int k = 0; k + 2 <= K.max_dim(); ++k) {
    Cochain f;
    f.degree = k;
    for (const auto& s : K.simplices_of_dim(k)) {
      int v = val(rng);
      if (v != 0) f.values[s] = Rational(v);
    }
    CHECK(coboundary(coboundary(f, K), K).is_zero());
  }
}

TEST_CASE("betti of standard spaces") {
  SimplicialComplex point;
  point.ambient_dim = 1;
  point.points = {{Rational(0)}};
  point.add_simplex({0});
  CHECK(betti(point).b == std::vector<int>{1});

  CHECK(betti(triangle_boundary()).b == std::vector<int>{1, 1});

  auto oct = octahedron();
  CHECK(betti(oct.K).b == std::vector<int>{1, 0, 1});

  auto torus = product_torus();
  CHECK(betti(torus.K).b == std::vector<int>{1, 2, 1});

  auto disk = fan_disk(20);
  CHECK(betti(disk.K).b == std::vector<int>{1, 0, 0});
}

TEST_CASE("betti agrees with the dense elimination oracle; Euler identity") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 12; ++trial) {
    SimplicialComplex K = random_complex(rng, 12, 60);
    BettiTable lib = betti(K);
    BettiTable orc = betti_oracle(K);
    CHECK(lib.b == orc.b);
    int chi_simplices = 0;
    for (int k = 0; k <= K.max_dim(); ++k)
      chi_simplices +=
          (k % 2 == 0 ? 1 : -1) * static_cast<int>(K.simplices_of_dim(k).size());
    CHECK(lib.euler_characteristic() == chi_simplices);
  }
}

TEST_CASE("solve_primitive: solvable, unsolvable, zero") {
  SimplicialComplex K = triangle_boundary();
  // oriented sum around the circle is closed but not exact
  Cochain gen;
  gen.degree = 1;
  gen.set({0, 1}, Rational(1));
  CHECK(coboundary(gen, K).is_zero());  // no 2-simplices
  CHECK(!solve_primitive(gen, K).has_value());

  // exact cochain: f = dg0 for random g0
  std::mt19937_64 rng(3);
  auto disk = fan_disk(8);
  std::uniform_int_distribution<int> val(-4, 4);
  for (int trial = 0; trial < 10; ++trial) {
    Cochain g0;
    g0.degree = 0;
    for (const auto& s : disk.K.simplices_of_dim(0)) {
      int v = val(rng);
      if (v != 0) g0.values[s] = Rational(v);
    }
    Cochain f = coboundary(g0, disk.K);
    auto g = solve_primitive(f, disk.K);
    REQUIRE(g.has_value());
    CHECK(coboundary(*g, disk.K) == f);
  }

  Cochain zero;
  zero.degree = 1;
  auto gz = solve_primitive(zero, K);
  REQUIRE(gz.has_value());
  CHECK(gz->is_zero());

  // a non-closed 1-cochain on the disk must be rejected
  Cochain bad;
  bad.degree = 1;
  bad.set(disk.K.simplices_of_dim(1).front(), Rational(1));
  if (!coboundary(bad, disk.K).is_zero()) CHECK_THROWS_AS(solve_primitive(bad, disk.K), Error);
}

TEST_CASE("solve_primitive composed with coboundary is a projection") {
  auto disk = fan_disk(6);
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> val(-3, 3);
  for (int trial = 0; trial < 6; ++trial) {
    Cochain g0;
    g0.degree = 0;
    for (const auto& s : disk.K.simplices_of_dim(0)) g0.values[s] = Rational(val(rng));
    Cochain dg = coboundary(g0, disk.K);
    auto g = solve_primitive(dg, disk.K);
    REQUIRE(g.has_value());
    CHECK(coboundary(*g, disk.K) == dg);
  }
}

TEST_CASE("split_functional: identity example, zero, random, rejections") {
  // V = R^2, phi1 = x, phi2 = y, f = x + y
  RatMatrix phi1 = {{Rational(1), Rational(0)}};
  RatMatrix phi2 = {{Rational(0), Rational(1)}};
  RatVector f = {Rational(1), Rational(1)};
  auto split = split_functional(2, phi1, phi2, f);
  CHECK(split.g1 == RatVector{Rational(1)});
  CHECK(split.g2 == RatVector{Rational(1)});

  // f = 0 -> g1 = 0, g2 = 0 reconstruction
  RatVector zero = {Rational(0), Rational(0)};
  auto zsplit = split_functional(2, phi1, phi2, zero);
  for (const auto& v : zsplit.g1) CHECK(v == 0);
  for (const auto& v : zsplit.g2) CHECK(v == 0);

  // random instances built to satisfy the kernel condition reconstruct exactly
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> val(-3, 3), den(1, 3);
  for (int trial = 0; trial < 25; ++trial) {
    int n = 5;
    int w1 = 2, w2 = 2;
    RatMatrix p1(w1, RatVector(n)), p2(w2, RatVector(n));
    do {
      for (auto& row : p1)
        for (auto& q : row) q = Rational(val(rng), den(rng));
    } while (rank_bareiss(p1) != w1);
    do {
      for (auto& row : p2)
        for (auto& q : row) q = Rational(val(rng), den(rng));
    } while (rank_bareiss(p2) != w2);
    RatVector g1(w1), g2(w2);
    for (auto& q : g1) q = Rational(val(rng), den(rng));
    for (auto& q : g2) q = Rational(val(rng), den(rng));
    RatVector fx(n, Rational(0));
    for (int i = 0; i < n; ++i) {
      for (int r = 0; r < w1; ++r) fx[i] += g1[r] * p1[r][i];
      for (int r = 0; r < w2; ++r) fx[i] += g2[r] * p2[r][i];
    }
    auto got = split_functional(n, p1, p2, fx);
    for (int i = 0; i < n; ++i) {
      Rational acc(0);
      for (int r = 0; r < w1; ++r) acc += got.g1[r] * p1[r][i];
      for (int r = 0; r < w2; ++r) acc += got.g2[r] * p2[r][i];
      CHECK(acc == fx[i]);
    }
  }

  // kernel-condition violation: ker phi1 ∩ ker phi2 = {x : x1=x2=0} in R^3;
  // f = e3* does not vanish there
  RatMatrix q1 = {{Rational(1), Rational(0), Rational(0)}};
  RatMatrix q2 = {{Rational(0), Rational(1), Rational(0)}};
  RatVector fbad = {Rational(0), Rational(0), Rational(1)};
  CHECK_THROWS_WITH_AS(split_functional(3, q1, q2, fbad), doctest::Contains("Kernel"), Error);

  // non-surjective phi rejected
  RatMatrix flat = {{Rational(1), Rational(0), Rational(0)},
                    {Rational(2), Rational(0), Rational(0)}};
  CHECK_THROWS_WITH_AS(split_functional(3, flat, q2, fbad), doctest::Contains("NotSurjective"),
                       Error);
}
