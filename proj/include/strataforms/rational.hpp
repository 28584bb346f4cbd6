#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace strataforms {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Error with a stable machine-readable code ("MissingFace", "NotClosed", ...),
// used across all modules.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

inline double to_double(const Rational& q) { return static_cast<double>(q); }

// Parses "-3/4", "5", "0" into an exact rational.
inline Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(BigInt(s));
  BigInt num(s.substr(0, slash));
  BigInt den(s.substr(slash + 1));
  if (den == 0) throw Error("BadRational", "zero denominator in '" + s + "'");
  return Rational(num, den);
}

inline std::string format_rational(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

inline Rational rational_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

// Nearest rational with small denominator (continued fractions); used to turn
// quadrature values whose exact counterparts are rational back into exact
// numbers before rank computations.
inline Rational rationalize(double x, double tol = 1e-9, long long max_den = 10000000LL) {
  long long sign = x < 0 ? -1 : 1;
  double v = x < 0 ? -x : x;
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double frac = v;
  for (int it = 0; it < 64; ++it) {
    long long a = static_cast<long long>(frac);
    long long p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    double approx = static_cast<double>(p1) / static_cast<double>(q1);
    if (std::abs(approx - v) <= tol) break;
    double rem = frac - a;
    if (rem < 1e-15) break;
    frac = 1.0 / rem;
  }
  return Rational(BigInt(sign * p1), BigInt(q1 == 0 ? 1 : q1));
}

}  // namespace strataforms
