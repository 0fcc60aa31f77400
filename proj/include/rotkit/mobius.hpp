#pragma once

#include <cmath>
#include <limits>

#include "rotkit/rational.hpp"

namespace rotkit {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Real 2x2 matrix with positive determinant, acting on the boundary circle
// R/Z through the chart c(t) = tan(pi*(t - 1/2)), with t = 0 at infinity.
// The canonical lift comes from the decomposition M = R(phi_l) D R(phi_r):
// a rotation by psi moves t by -psi/pi, and D = diag(s1, s2) fixes 0 and 1/2.
struct Mobius {
  double a, b, c, d;
  double phi_l = 0, phi_r = 0, lam = 1;  // lam = s1/s2 >= 1

  Mobius(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {
    double det = a * d - b * c;
    if (!(det > 0)) throw MalformedError("mobius: determinant must be positive");
    double s = 1.0 / std::sqrt(det);
    a *= s;
    b *= s;
    c *= s;
    d *= s;
    double e = (a + d) / 2, f = (a - d) / 2;
    double g = (c + b) / 2, h = (c - b) / 2;
    double q = std::hypot(e, h), r = std::hypot(f, g);
    double s1 = q + r, s2 = q - r;
    double a2 = std::atan2(h, e);
    double a1 = (r <= s1 * 1e-300) ? 0.0 : std::atan2(g, f);
    phi_l = (a2 + a1) / 2;
    phi_r = (a2 - a1) / 2;
    lam = s1 / s2;
  }

  static Mobius identity() { return Mobius(1, 0, 0, 1); }

  Mobius inverse() const { return Mobius(d, -b, -c, a); }

  // action on R u {inf} in the chart coordinate
  double act(double v) const {
    if (std::isinf(v)) return c == 0 ? std::numeric_limits<double>::infinity() : a / c;
    double den = c * v + d;
    if (den == 0) return std::numeric_limits<double>::infinity();
    return (a * v + b) / den;
  }

  static double chart(double t) {
    double u = t - std::floor(t);
    if (u == 0) return std::numeric_limits<double>::infinity();
    return -std::cos(kPi * u) / std::sin(kPi * u);
  }

  static double chart_inv(double v) {
    if (std::isinf(v)) return 0;
    return 0.5 + std::atan(v) / kPi;
  }

  double base_lift(double x) const { return diag_lift(x - phi_r / kPi, lam) - phi_l / kPi; }

  double base_lift_inv(double y) const {
    return diag_lift(y + phi_l / kPi, 1.0 / lam) + phi_r / kPi;
  }

 private:
  // lift of diag(s1, s2) acting by v -> (s1/s2) v; fixes all half-integers
  static double diag_lift(double x, double ratio) {
    double m = std::floor(x);
    double t = x - m;
    if (t == 0) return x;
    double tp = std::atan2(std::sin(kPi * t), ratio * std::cos(kPi * t)) / kPi;
    return m + tp;
  }
};

}  // namespace rotkit
