#include "strataforms/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <tuple>

namespace strataforms {

namespace {

// Golub-Welsch: nodes are eigenvalues of the Jacobi matrix of the recurrence,
// weights are mu0 times squared first eigenvector components.
void golub_welsch(const std::vector<double>& a, const std::vector<double>& b, double mu0,
                  std::vector<double>& x, std::vector<double>& w) {
  const int m = static_cast<int>(a.size());
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    J(i, i) = a[i];
    if (i + 1 < m) {
      J(i, i + 1) = b[i + 1];
      J(i + 1, i) = b[i + 1];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  x.resize(m);
  w.resize(m);
  for (int i = 0; i < m; ++i) {
    x[i] = es.eigenvalues()(i);
    double v0 = es.eigenvectors()(0, i);
    w[i] = mu0 * v0 * v0;
  }
}

}  // namespace

void gauss_legendre_01(int m, std::vector<double>& x, std::vector<double>& w) {
  std::vector<double> a(m, 0.0), b(m, 0.0);
  for (int k = 1; k < m; ++k) b[k] = k / std::sqrt(4.0 * k * k - 1.0);
  golub_welsch(a, b, 2.0, x, w);
  for (int i = 0; i < m; ++i) {
    x[i] = 0.5 * (x[i] + 1.0);
    w[i] *= 0.5;
  }
}

void gauss_jacobi_01(int m, int alpha, std::vector<double>& x, std::vector<double>& w) {
  if (alpha == 0) {
    gauss_legendre_01(m, x, w);
    return;
  }
  // weight (1-t)^alpha (1+t)^0 on [-1,1]
  const double A = alpha, B = 0.0;
  std::vector<double> a(m), b(m, 0.0);
  a[0] = (B - A) / (A + B + 2.0);
  double mu0 = std::pow(2.0, A + B + 1.0) * std::tgamma(A + 1.0) * std::tgamma(B + 1.0) /
               std::tgamma(A + B + 2.0);
  for (int k = 1; k < m; ++k) {
    double den = (2.0 * k + A + B) * (2.0 * k + A + B + 2.0);
    a[k] = (B * B - A * A) / den;
    double num;
    if (k == 1)
      num = 4.0 * (A + 1.0) * (B + 1.0) / ((A + B + 2.0) * (A + B + 2.0) * (A + B + 3.0));
    else
      num = 4.0 * k * (k + A) * (k + B) * (k + A + B) /
            ((2.0 * k + A + B) * (2.0 * k + A + B) * ((2.0 * k + A + B) * (2.0 * k + A + B) - 1.0));
    b[k] = std::sqrt(num);
  }
  golub_welsch(a, b, mu0, x, w);
  // map [-1,1] -> [0,1]: t = (x+1)/2, weight picks up (1/2)^(alpha+1)
  double scale = std::pow(0.5, A + B + 1.0);
  for (int i = 0; i < m; ++i) {
    x[i] = 0.5 * (x[i] + 1.0);
    w[i] *= scale;
  }
}

Rational monomial_ref_integral(RefDomain d, const std::vector<unsigned>& e) {
  if (d == RefDomain::Box) {
    Rational r(1);
    for (unsigned a : e) r /= Rational(a + 1);
    return r;
  }
  // simplex: prod(a_i!) / (k + sum a_i)!
  BigInt num(1);
  unsigned total = 0;
  for (unsigned a : e) {
    for (unsigned i = 2; i <= a; ++i) num *= i;
    total += a;
  }
  BigInt den(1);
  for (unsigned i = 2; i <= total + e.size(); ++i) den *= i;
  return Rational(num, den);
}

double QuadratureRule::apply(const Polynomial& integrand) const {
  if (integrand.nvars() != dim) throw Error("DimensionMismatch", "quadrature integrand arity");
  if (dim == 0) return integrand.eval(std::vector<double>{});
  double acc = 0;
  for (size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * integrand.eval(nodes[i]);
  return acc;
}

namespace {

QuadratureRule build_rule(RefDomain d, int dim, int order) {
  QuadratureRule rule;
  rule.domain = d;
  rule.dim = dim;
  rule.order = order;
  if (dim == 0) {
    rule.nodes.push_back({});
    rule.weights.push_back(1.0);
    return rule;
  }
  int m = order / 2 + 1;  // m-point Gauss factors: exact through degree 2m-1 >= order
  if (d == RefDomain::Box) {
    std::vector<double> x, w;
    gauss_legendre_01(m, x, w);
    std::vector<std::vector<double>> nodes = {{}};
    std::vector<double> weights = {1.0};
    for (int axis = 0; axis < dim; ++axis) {
      std::vector<std::vector<double>> nn;
      std::vector<double> ww;
      for (size_t i = 0; i < nodes.size(); ++i)
        for (int j = 0; j < m; ++j) {
          auto p = nodes[i];
          p.push_back(x[j]);
          nn.push_back(std::move(p));
          ww.push_back(weights[i] * w[j]);
        }
      nodes = std::move(nn);
      weights = std::move(ww);
    }
    rule.nodes = std::move(nodes);
    rule.weights = std::move(weights);
  } else {
    // conical product: u_1 = t_1, u_i = t_i * prod_{j<i} (1-t_j); the Jacobian
    // prod (1-t_i)^(dim-i) is absorbed into Gauss-Jacobi factors
    std::vector<std::vector<double>> xs(dim), ws(dim);
    for (int i = 0; i < dim; ++i) gauss_jacobi_01(m, dim - 1 - i, xs[i], ws[i]);
    std::vector<int> idx(dim, 0);
    while (true) {
      std::vector<double> t(dim), u(dim);
      double w = 1.0;
      for (int i = 0; i < dim; ++i) {
        t[i] = xs[i][idx[i]];
        w *= ws[i][idx[i]];
      }
      double shrink = 1.0;
      for (int i = 0; i < dim; ++i) {
        u[i] = t[i] * shrink;
        shrink *= (1.0 - t[i]);
      }
      rule.nodes.push_back(u);
      rule.weights.push_back(w);
      int i = dim - 1;
      while (i >= 0 && idx[i] == m - 1) {
        idx[i] = 0;
        --i;
      }
      if (i < 0) break;
      ++idx[i];
    }
  }
  // construction audit: weights sum to the reference volume, monomials exact
  double vol = 0;
  for (double w : rule.weights) vol += w;
  if (std::abs(vol - to_double(ref_volume(d, dim))) > 1e-10)
    throw Error("QuadratureAudit", "weight sum != reference volume");
  std::vector<unsigned> e(dim, 0);
  std::function<void(int, int)> scan = [&](int axis, int remaining) {
    if (axis == dim) {
      Polynomial mono(dim);
      mono.add_term(e, Rational(1));
      double got = rule.apply(mono);
      double want = to_double(monomial_ref_integral(d, e));
      if (std::abs(got - want) > 1e-10 * std::max(1.0, std::abs(want)))
        throw Error("QuadratureAudit", "monomial not integrated exactly at declared order");
      return;
    }
    for (int a = 0; a <= remaining; ++a) {
      e[axis] = static_cast<unsigned>(a);
      scan(axis + 1, remaining - a);
    }
    e[axis] = 0;
  };
  if (order <= 12) scan(0, order);  // full audit at moderate orders
  return rule;
}

std::map<std::tuple<int, int, int>, QuadratureRule> g_rule_cache;
std::mutex g_rule_mutex;

}  // namespace

const QuadratureRule& quadrature_rule(RefDomain d, int dim, int order) {
  std::lock_guard<std::mutex> lock(g_rule_mutex);
  auto key = std::make_tuple(static_cast<int>(d), dim, order);
  auto it = g_rule_cache.find(key);
  if (it == g_rule_cache.end()) it = g_rule_cache.emplace(key, build_rule(d, dim, order)).first;
  return it->second;
}

}  // namespace strataforms
