#include "strataforms/linalg.hpp"

#include <algorithm>

namespace strataforms {

namespace {
std::vector<std::vector<BigInt>> clear_denominators(const RatMatrix& a) {
  std::vector<std::vector<BigInt>> m;
  m.reserve(a.size());
  for (const auto& row : a) {
    BigInt l(1);
    for (const auto& q : row) l = lcm(l, denominator(q));
    std::vector<BigInt> irow;
    irow.reserve(row.size());
    for (const auto& q : row) irow.push_back(numerator(q) * (l / denominator(q)));
    m.push_back(std::move(irow));
  }
  return m;
}
}  // namespace

int rank_bareiss(const RatMatrix& a) {
  if (a.empty() || a[0].empty()) return 0;
  auto m = clear_denominators(a);
  const size_t rows = m.size(), cols = m[0].size();
  BigInt prev(1);
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t piv = r;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    if (piv != r) std::swap(m[piv], m[r]);
    for (size_t i = r + 1; i < rows; ++i) {
      for (size_t j = c + 1; j < cols; ++j)
        m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) / prev;
      m[i][c] = 0;
    }
    prev = m[r][c];
    ++r;
  }
  return static_cast<int>(r);
}

std::optional<RatVector> solve_linear(const RatMatrix& a, const RatVector& b) {
  const size_t rows = a.size();
  const size_t cols = rows == 0 ? 0 : a[0].size();
  if (b.size() != rows) throw Error("DimensionMismatch", "solve_linear rhs size");
  RatMatrix m = a;
  RatVector rhs = b;
  std::vector<int> pivot_col;  // pivot column of each eliminated row
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t piv = r;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    if (piv != r) {
      std::swap(m[piv], m[r]);
      std::swap(rhs[piv], rhs[r]);
    }
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational f = m[i][c] / m[r][c];
      for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
      rhs[i] -= f * rhs[r];
    }
    pivot_col.push_back(static_cast<int>(c));
    ++r;
  }
  for (size_t i = r; i < rows; ++i)
    if (rhs[i] != 0) return std::nullopt;
  RatVector x(cols, Rational(0));
  for (size_t i = 0; i < pivot_col.size(); ++i) x[pivot_col[i]] = rhs[i] / m[i][pivot_col[i]];
  return x;
}

std::vector<RatVector> nullspace(const RatMatrix& a) {
  const size_t rows = a.size();
  const size_t cols = rows == 0 ? 0 : a[0].size();
  RatMatrix m = a;
  std::vector<int> pivot_col;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t piv = r;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    if (piv != r) std::swap(m[piv], m[r]);
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational f = m[i][c] / m[r][c];
      for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivot_col.push_back(static_cast<int>(c));
    ++r;
  }
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivot_col) is_pivot[c] = true;
  std::vector<RatVector> basis;
  for (size_t free_c = 0; free_c < cols; ++free_c) {
    if (is_pivot[free_c]) continue;
    RatVector v(cols, Rational(0));
    v[free_c] = 1;
    for (size_t i = 0; i < pivot_col.size(); ++i)
      v[pivot_col[i]] = -m[i][free_c] / m[i][pivot_col[i]];
    basis.push_back(std::move(v));
  }
  return basis;
}

RatVector mat_vec(const RatMatrix& a, const RatVector& x) {
  RatVector y(a.size(), Rational(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != x.size()) throw Error("DimensionMismatch", "mat_vec");
    for (size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
  }
  return y;
}

RatMatrix transpose(const RatMatrix& a) {
  if (a.empty()) return {};
  RatMatrix t(a[0].size(), RatVector(a.size()));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  return t;
}

}  // namespace strataforms
