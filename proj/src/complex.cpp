#include "strataforms/complex.hpp"

#include <algorithm>
#include <sstream>

namespace strataforms {

std::pair<Simplex, int> Simplex::canonical() const {
  MultiIndex idx(vertices.begin(), vertices.end());
  MultiIndex sorted;
  int sign = sort_index_sign(idx, sorted);
  Simplex s;
  s.vertices.assign(sorted.begin(), sorted.end());
  return {s, sign};
}

void SimplicialComplex::add_simplex(const std::vector<int>& vertices) {
  std::vector<int> v = vertices;
  std::sort(v.begin(), v.end());
  if (std::adjacent_find(v.begin(), v.end()) != v.end())
    throw Error("DegenerateSimplex", "repeated vertex");
  for (int id : v)
    if (id < 0 || id >= static_cast<int>(points.size()))
      throw Error("MissingVertex", "vertex id out of range");
  if (simplices.count(v)) return;
  simplices.insert(v);
  if (v.size() > 1) {
    for (size_t i = 0; i < v.size(); ++i) {
      std::vector<int> face;
      for (size_t j = 0; j < v.size(); ++j)
        if (j != i) face.push_back(v[j]);
      add_simplex(face);
    }
  }
}

int SimplicialComplex::max_dim() const {
  int d = -1;
  for (const auto& s : simplices) d = std::max(d, static_cast<int>(s.size()) - 1);
  return d;
}

std::vector<std::vector<int>> SimplicialComplex::simplices_of_dim(int k) const {
  std::vector<std::vector<int>> out;
  for (const auto& s : simplices)
    if (static_cast<int>(s.size()) == k + 1) out.push_back(s);
  return out;
}

std::vector<std::vector<int>> SimplicialComplex::star(const std::vector<int>& s) const {
  std::vector<int> q = s;
  std::sort(q.begin(), q.end());
  if (!simplices.count(q)) throw Error("NotInComplex", "simplex not in complex");
  std::vector<std::vector<int>> out;
  for (const auto& t : simplices)
    if (std::includes(t.begin(), t.end(), q.begin(), q.end())) out.push_back(t);
  return out;
}

RatMatrix SimplicialComplex::boundary_matrix(int k) const {
  auto rows = simplices_of_dim(k - 1);
  auto cols = simplices_of_dim(k);
  std::map<std::vector<int>, int> row_index;
  for (size_t i = 0; i < rows.size(); ++i) row_index[rows[i]] = static_cast<int>(i);
  RatMatrix m(rows.size(), RatVector(cols.size(), Rational(0)));
  for (size_t c = 0; c < cols.size(); ++c) {
    const auto& s = cols[c];
    for (size_t i = 0; i < s.size(); ++i) {
      std::vector<int> face;
      for (size_t j = 0; j < s.size(); ++j)
        if (j != i) face.push_back(s[j]);
      m[row_index.at(face)][c] = (i % 2 == 0) ? 1 : -1;
    }
  }
  return m;
}

std::string simplex_cell_id(const std::string& prefix, const std::vector<int>& vertices) {
  std::ostringstream os;
  os << prefix << ":s[";
  for (size_t i = 0; i < vertices.size(); ++i) {
    if (i) os << ",";
    os << vertices[i];
  }
  os << "]";
  return os.str();
}

void SimplicialComplex::populate_catalogue(CellCatalogue& cat, const std::string& prefix) const {
  for (const auto& s : simplices) {
    int k = static_cast<int>(s.size()) - 1;
    ParametrizedCell cell;
    cell.id = simplex_cell_id(prefix, s);
    cell.domain = RefDomain::Simplex;
    cell.dim = k;
    cell.ambient_dim = ambient_dim;
    PolyMap f;
    f.domain_dim = k;
    const auto& base = points.at(s[0]);
    for (int c = 0; c < ambient_dim; ++c) {
      Polynomial p = Polynomial::constant(k, base.at(c));
      for (int j = 1; j <= k; ++j) {
        Rational delta = points.at(s[j]).at(c) - base.at(c);
        if (delta != 0) p = p + Polynomial::variable(k, j - 1) * delta;
      }
      f.comps.push_back(p);
    }
    cell.map = std::move(f);
    for (size_t i = 0; i < s.size() && k > 0; ++i) {
      std::vector<int> face;
      for (size_t j = 0; j < s.size(); ++j)
        if (j != i) face.push_back(s[j]);
      cell.faces.emplace_back(simplex_cell_id(prefix, face), (i % 2 == 0) ? 1 : -1);
    }
    cat.add(std::move(cell));
  }
}

void Chain::add(const std::string& cell, const Rational& c) {
  auto it = terms.find(cell);
  if (it == terms.end()) {
    if (c != 0) terms[cell] = c;
  } else {
    it->second += c;
    if (it->second == 0) terms.erase(it);
  }
}

Chain Chain::operator+(const Chain& o) const {
  Chain r = *this;
  for (const auto& [id, c] : o.terms) r.add(id, c);
  return r;
}

Chain Chain::operator-(const Chain& o) const { return *this + o * Rational(-1); }

Chain Chain::operator*(const Rational& c) const {
  Chain r;
  r.degree = degree;
  if (c == 0) return r;
  for (const auto& [id, k] : terms) r.terms[id] = k * c;
  return r;
}

Chain boundary(const Chain& c, const CellCatalogue& cat) {
  Chain out;
  out.degree = c.degree - 1;
  for (const auto& [id, coeff] : c.terms) {
    const auto& cell = cat.get(id);
    if (cell.dim != c.degree) throw Error("DegreeMismatch", "chain cell dimension");
    if (cell.dim == 0) continue;
    int expected = cell.domain == RefDomain::Simplex ? cell.dim + 1 : 2 * cell.dim;
    if (static_cast<int>(cell.faces.size()) != expected)
      throw Error("MissingFace", "cell " + id + " lacks registered faces");
    for (const auto& [fid, sign] : cell.faces) {
      if (!cat.has(fid)) throw Error("MissingFace", "face " + fid + " not registered");
      out.add(fid, coeff * Rational(sign) * Rational(cell.orientation));
    }
  }
  return out;
}

}  // namespace strataforms
