#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rotkit {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MalformedError : Error {
  using Error::Error;
};

inline Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;
  if ((a % b) != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

inline Int floor_rat(const Rat& x) {
  return floor_div(numerator(x), denominator(x));
}

inline Int ceil_rat(const Rat& x) { return -floor_rat(-x); }

// fractional part in [0,1)
inline Rat frac(const Rat& x) { return x - Rat(floor_rat(x)); }

inline Rat mod1(const Rat& x) { return frac(x); }

inline bool is_integer(const Rat& x) { return denominator(x) == 1; }

inline double to_double(const Rat& x) { return x.convert_to<double>(); }

// exact rational value of a finite double
inline Rat rat_from_double(double x) {
  if (!std::isfinite(x)) throw MalformedError("rat_from_double: non-finite");
  if (x == 0.0) return Rat(0);
  int exp = 0;
  double m = std::frexp(x, &exp);  // x = m * 2^exp, |m| in [1/2,1)
  Int num = static_cast<long long>(std::ldexp(m, 53));
  exp -= 53;
  Rat r(num);
  if (exp >= 0)
    r *= Rat(Int(1) << exp);
  else
    r /= Rat(Int(1) << (-exp));
  return r;
}

// largest multiple of 2^-bits that is <= x
inline Rat dyadic_floor(const Rat& x, unsigned bits) {
  Int scale = Int(1) << bits;
  return Rat(floor_rat(x * Rat(scale)), scale);
}

inline Rat dyadic_ceil(const Rat& x, unsigned bits) {
  Int scale = Int(1) << bits;
  return Rat(ceil_rat(x * Rat(scale)), scale);
}

inline std::string format_rat(const Rat& x) {
  std::string s = numerator(x).str();
  s += '/';
  s += denominator(x).str();
  return s;
}

inline Rat parse_rat(std::string_view s) {
  auto bad = [&] { return MalformedError("bad rational: '" + std::string(s) + "'"); };
  if (s.empty()) throw bad();
  size_t slash = s.find('/');
  auto parse_int = [&](std::string_view t) {
    if (t.empty()) throw bad();
    size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) throw bad();
    for (size_t j = i; j < t.size(); ++j)
      if (t[j] < '0' || t[j] > '9') throw bad();
    return Int(std::string(t));
  };
  if (slash == std::string_view::npos) return Rat(parse_int(s));
  Int num = parse_int(s.substr(0, slash));
  Int den = parse_int(s.substr(slash + 1));
  if (den == 0) throw bad();
  return Rat(num, den);
}

}  // namespace rotkit
