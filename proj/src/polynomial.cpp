#include "strataforms/polynomial.hpp"

#include <algorithm>
#include <sstream>

namespace strataforms {

Polynomial::Polynomial(int nvars, const Rational& c) : nvars_(nvars) {
  if (c != 0) terms_[Exponents(nvars, 0)] = c;
}

Polynomial Polynomial::variable(int nvars, int i) {
  Polynomial p(nvars);
  Exponents e(nvars, 0);
  e.at(i) = 1;
  p.terms_[e] = 1;
  return p;
}

bool Polynomial::is_constant() const {
  if (terms_.empty()) return true;
  return terms_.size() == 1 && terms_.begin()->first == Exponents(nvars_, 0);
}

Rational Polynomial::constant_value() const {
  if (terms_.empty()) return Rational(0);
  return terms_.begin()->second;
}

int Polynomial::total_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (unsigned x : e) s += static_cast<int>(x);
    d = std::max(d, s);
  }
  return d;
}

int Polynomial::degree_in(int i) const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, static_cast<int>(e.at(i)));
  return d;
}

void Polynomial::add_term(const Exponents& e, const Rational& c) {
  if (static_cast<int>(e.size()) != nvars_)
    throw Error("DimensionMismatch", "exponent arity != nvars");
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    if (c != 0) terms_[e] = c;
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial Polynomial::operator-() const {
  Polynomial r(nvars_);
  for (const auto& [e, c] : terms_) r.terms_[e] = -c;
  return r;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  if (nvars_ != o.nvars_) throw Error("DimensionMismatch", "polynomial arity mismatch");
  Polynomial r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (nvars_ != o.nvars_) throw Error("DimensionMismatch", "polynomial arity mismatch");
  Polynomial r(nvars_);
  for (const auto& [e1, c1] : terms_) {
    for (const auto& [e2, c2] : o.terms_) {
      Exponents e(nvars_);
      for (int i = 0; i < nvars_; ++i) e[i] = e1[i] + e2[i];
      r.add_term(e, c1 * c2);
    }
  }
  return r;
}

Polynomial Polynomial::operator*(const Rational& c) const {
  Polynomial r(nvars_);
  if (c == 0) return r;
  for (const auto& [e, k] : terms_) r.terms_[e] = k * c;
  return r;
}

Polynomial Polynomial::derivative(int i) const {
  Polynomial r(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e.at(i) == 0) continue;
    Exponents d = e;
    d[i] -= 1;
    r.add_term(d, c * Rational(e[i]));
  }
  return r;
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial r = constant(nvars_, 1);
  Polynomial base = *this;
  while (e > 0) {
    if (e & 1u) r = r * base;
    base = base * base;
    e >>= 1u;
  }
  return r;
}

Polynomial Polynomial::substitute(const std::vector<Polynomial>& subs) const {
  if (static_cast<int>(subs.size()) != nvars_)
    throw Error("DimensionMismatch", "substitution arity mismatch");
  int m = nvars_ == 0 ? 0 : subs.empty() ? 0 : subs[0].nvars();
  for (const auto& s : subs)
    if (s.nvars() != m) throw Error("DimensionMismatch", "substitution vars disagree");
  Polynomial r(m);
  // memoized powers of each substituted variable
  std::vector<std::vector<Polynomial>> pows(nvars_);
  for (int i = 0; i < nvars_; ++i) pows[i].push_back(Polynomial::constant(m, 1));
  for (const auto& [e, c] : terms_) {
    Polynomial term = Polynomial::constant(m, c);
    for (int i = 0; i < nvars_; ++i) {
      while (pows[i].size() <= e[i]) pows[i].push_back(pows[i].back() * subs[i]);
      if (e[i] > 0) term = term * pows[i][e[i]];
    }
    r = r + term;
  }
  return r;
}

Polynomial Polynomial::integrate_unit_drop(int i) const {
  Polynomial r(nvars_ - 1);
  for (const auto& [e, c] : terms_) {
    Exponents d;
    d.reserve(nvars_ - 1);
    for (int j = 0; j < nvars_; ++j)
      if (j != i) d.push_back(e[j]);
    r.add_term(d, c / Rational(e[i] + 1));
  }
  return r;
}

Polynomial Polynomial::extend(int extra) const {
  Polynomial r(nvars_ + extra);
  for (const auto& [e, c] : terms_) {
    Exponents d = e;
    d.resize(nvars_ + extra, 0);
    r.terms_[d] = c;
  }
  return r;
}

Rational Polynomial::eval(const std::vector<Rational>& x) const {
  if (static_cast<int>(x.size()) != nvars_) throw Error("DimensionMismatch", "eval arity");
  Rational acc(0);
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (int i = 0; i < nvars_; ++i)
      for (unsigned q = 0; q < e[i]; ++q) t *= x[i];
    acc += t;
  }
  return acc;
}

double Polynomial::eval(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != nvars_) throw Error("DimensionMismatch", "eval arity");
  double acc = 0;
  for (const auto& [e, c] : terms_) {
    double t = to_double(c);
    for (int i = 0; i < nvars_; ++i)
      for (unsigned q = 0; q < e[i]; ++q) t *= x[i];
    acc += t;
  }
  return acc;
}

std::string Polynomial::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << format_rational(c);
    for (int i = 0; i < nvars_; ++i) {
      if (e[i] == 0) continue;
      os << "*x" << i;
      if (e[i] > 1) os << "^" << e[i];
    }
  }
  return os.str();
}

}  // namespace strataforms
