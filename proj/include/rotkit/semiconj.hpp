#pragma once
// Semi-conjugacy machinery for circle actions of Z2 * Z3: degree-one monotone
// maps, interval-trapping certificates for the (1/2, 1/3, 0) class, path
// witnesses, the Markov-partition certificate for the (1/2, 2/3, 1/5) class,
// and the equivariant period-5 map theta extracted from its orbit data.
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "action.hpp"
#include "lift.hpp"
#include "pl_map.hpp"
#include "rational.hpp"
#include "word.hpp"

namespace rotkit {

struct SemiConjError : Error {
  using Error::Error;
};
struct NoSolutionError : SemiConjError {
  using SemiConjError::SemiConjError;
};
struct CertificateFailureError : SemiConjError {
  using SemiConjError::SemiConjError;
};
struct InequalityFailureError : SemiConjError {
  using SemiConjError::SemiConjError;
};
struct NormalizationFailureError : SemiConjError {
  using SemiConjError::SemiConjError;
};
struct WellDefinednessFailureError : SemiConjError {
  using SemiConjError::SemiConjError;
};
struct MonotonicityFailureError : SemiConjError {
  using SemiConjError::SemiConjError;
};
struct DensityFailureError : SemiConjError {
  using SemiConjError::SemiConjError;
};

// Nondecreasing degree-one PL map of the line: h(x+1) = h(x)+1, flat segments
// allowed.  Same breakpoint layout as PlMap, weaker monotonicity.
struct MonotoneMap {
  std::vector<std::pair<Rat, Rat>> pts;

  MonotoneMap() : pts{{Rat(0), Rat(0)}} {}
  explicit MonotoneMap(std::vector<std::pair<Rat, Rat>> p) : pts(std::move(p)) { validate(); }

  static MonotoneMap identity() { return MonotoneMap{}; }
  static MonotoneMap from_pl(const PlMap& f) { return MonotoneMap(f.pts); }

  void validate() const {
    if (pts.empty()) throw MalformedError("monotone: no breakpoints");
    for (size_t i = 0; i < pts.size(); ++i) {
      if (pts[i].first < 0 || pts[i].first >= 1)
        throw MalformedError("monotone: breakpoint x outside [0,1)");
      if (i > 0) {
        if (pts[i].first <= pts[i - 1].first)
          throw MalformedError("monotone: breakpoint x not strictly increasing");
        if (pts[i].second < pts[i - 1].second)
          throw MalformedError("monotone: breakpoint y decreasing");
      }
    }
    if (pts.back().second > pts.front().second + 1)
      throw MalformedError("monotone: y range exceeds one period");
  }

  Rat operator()(const Rat& x) const {
    Rat t = frac(x);
    Rat shift = x - t;
    size_t n = pts.size();
    size_t lo = 0, hi = n;
    while (lo < hi) {
      size_t mid = (lo + hi) / 2;
      if (pts[mid].first <= t)
        lo = mid + 1;
      else
        hi = mid;
    }
    Rat x0, y0, x1, y1;
    if (lo == 0) {
      x0 = pts[n - 1].first - 1;
      y0 = pts[n - 1].second - 1;
      x1 = pts[0].first;
      y1 = pts[0].second;
    } else {
      x0 = pts[lo - 1].first;
      y0 = pts[lo - 1].second;
      if (lo == n) {
        x1 = pts[0].first + 1;
        y1 = pts[0].second + 1;
      } else {
        x1 = pts[lo].first;
        y1 = pts[lo].second;
      }
    }
    if (x1 == x0 || y1 == y0) return y0 + shift;
    return y0 + (t - x0) * (y1 - y0) / (x1 - x0) + shift;
  }

  double eval(double x) const { return to_double((*this)(rat_from_double(x))); }
};

// A located point on the line; exact when produced by the exact backend.
struct LinePoint {
  double approx = 0;
  std::optional<Rat> exact;

  static LinePoint from_rat(const Rat& r) { return LinePoint{to_double(r), r}; }
  static LinePoint from_double(double d) { return LinePoint{d, std::nullopt}; }
};

// Closed arc [lo, hi] on the line with hi - lo < 1, read mod 1.
struct Arc {
  LinePoint lo, hi;
};

namespace detail {

template <class S>
struct NumOps;

template <>
struct NumOps<Rat> {
  static Rat eval(const Lift& f, const Rat& x) { return lift_eval_exact(f, x); }
  static bool le(const Rat& u, const Rat& v, double) { return u <= v; }
  static bool lt(const Rat& u, const Rat& v, double) { return u < v; }
  static bool eq(const Rat& u, const Rat& v, double) { return u == v; }
  static long whole_floor(const Rat& x) { return static_cast<long>(floor_rat(x)); }
  static double to_d(const Rat& x) { return to_double(x); }
  static Rat from_long(long n) { return Rat(n); }
  static LinePoint point(const Rat& x) { return LinePoint::from_rat(x); }
};

template <>
struct NumOps<double> {
  static double eval(const Lift& f, double x) { return lift_eval(f, x); }
  static bool le(double u, double v, double tol) { return u <= v + tol; }
  static bool lt(double u, double v, double tol) { return u < v + tol; }
  static bool eq(double u, double v, double tol) { return std::abs(u - v) <= tol; }
  static long whole_floor(double x) { return static_cast<long>(std::floor(x)); }
  static double to_d(double x) { return x; }
  static double from_long(long n) { return static_cast<double>(n); }
  static LinePoint point(double x) { return LinePoint::from_double(x); }
};

// First x in [0,1) with f(x) = x + c, by exact segment scan.
inline std::optional<Rat> solve_translation_exact(const Lift& f, const Rat& c) {
  std::vector<Rat> sols = pl_fixed_points(lift_to_pl(f), c);
  if (sols.empty()) return std::nullopt;
  return sols.front();
}

// Grid scan plus bisection (sign change) or grid zoom (tangential touch).
inline std::optional<double> solve_translation_float(const Lift& f, double c, double tol) {
  auto g = [&](double x) { return lift_eval(f, x) - x - c; };
  const int grid = 4096;
  double best_x = 0, best = std::abs(g(0));
  for (int i = 0; i <= grid; ++i) {
    double x = static_cast<double>(i) / grid;
    double gl = g(x), gr = g(x + 1.0 / grid);
    if (i < grid && ((gl < 0 && gr > 0) || (gl > 0 && gr < 0))) {
      double lo = x, hi = x + 1.0 / grid;
      for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        double mid = (lo + hi) / 2;
        ((g(lo) < 0) == (g(mid) < 0) ? lo : hi) = mid;
      }
      return (lo + hi) / 2;
    }
    if (std::abs(gl) < best) {
      best = std::abs(gl);
      best_x = x;
    }
  }
  // no crossing: zoom around the minimiser of |g| to catch a tangential zero
  double lo = best_x - 1.0 / grid, hi = best_x + 1.0 / grid;
  for (int it = 0; it < 60; ++it) {
    double step = (hi - lo) / 64;
    double bx = lo, bv = std::abs(g(lo));
    for (int i = 1; i <= 64; ++i) {
      double x = lo + step * i;
      if (double v = std::abs(g(x)); v < bv) {
        bv = v;
        bx = x;
      }
    }
    lo = bx - step;
    hi = bx + step;
    best_x = bx;
  }
  if (std::abs(g(best_x)) <= tol) return best_x;
  return std::nullopt;
}

// [u,v] inside [lo,hi] mod 1 (closed); when as_equality is set, endpoint equality.
template <class S>
bool arc_rel(const S& u, const S& v, const S& lo, const S& hi, double tol, bool as_equality) {
  using N = NumOps<S>;
  long m = N::whole_floor(u - lo);
  for (long dm : {0L, 1L, -1L}) {
    S uu = u - N::from_long(m + dm), vv = v - N::from_long(m + dm);
    bool ok = as_equality ? N::eq(uu, lo, tol) && N::eq(vv, hi, tol)
                          : N::le(lo, uu, tol) && N::le(vv, hi, tol);
    if (ok) return true;
  }
  return false;
}

}  // namespace detail

// x with (ab-lift)(x) = x + 1; exists iff the stored ab lift translates the
// rotation-number ladder by exactly one, i.e. the action is in the
// (1/2, 1/3, 0) class.
inline LinePoint find_x0_case1(const CircleAction& act) {
  Lift ab = act.apply(Word::parse("ab"));
  if (act.backend() == Backend::ExactPl) {
    if (auto x = detail::solve_translation_exact(ab, Rat(1))) return LinePoint::from_rat(*x);
  } else {
    if (auto x = detail::solve_translation_float(ab, 1.0, act.threshold()))
      return LinePoint::from_double(*x);
  }
  throw NoSolutionError("find_x0_case1: no point with (ab)(x) = x + 1; wrong class of action");
}

struct WordVerdict {
  Word word;
  std::string kind;  // Identity / PowerOfAlpha / PowerOfBeta / Hyperbolic
  Word canonical;    // trapped representative (hyperbolic only)
  Rat rot;           // certified rotation number of the image
  bool trapped = false;
};

struct Case1Certificate {
  Backend backend{};
  double threshold = 0;
  int max_syllables = 0;
  LinePoint x0;
  Arc interval_i, interval_j;
  std::vector<WordVerdict> verdicts;

  int hyperbolic_count() const {
    int n = 0;
    for (const auto& v : verdicts) n += v.trapped ? 1 : 0;
    return n;
  }
};

namespace detail {

template <class S>
Case1Certificate certify_case1_impl(const CircleAction& act, int max_syllables, S x0) {
  using N = NumOps<S>;
  const double tol = act.threshold();
  const Lift &la = act.lift_a(), &lb = act.lift_b();

  S ax0 = N::eval(la, x0), bx0 = N::eval(lb, x0), b2x0 = N::eval(lb, bx0);
  S x1 = x0 + N::from_long(1);
  // x0 < a(x0) = b(x0) < b^2(x0) < x0 + 1; forced by the relations, so a
  // violation means the input data (or its residual) is bad
  if (!(N::lt(x0, ax0, tol) && N::eq(ax0, bx0, tol) && N::lt(bx0, b2x0, tol) &&
        N::lt(b2x0, x1, tol)))
    throw CertificateFailureError("certify_case1: ordering chain at x0 violated");

  Case1Certificate cert;
  cert.backend = act.backend();
  cert.threshold = tol;
  cert.max_syllables = max_syllables;
  cert.x0 = N::point(x0);
  cert.interval_i = Arc{N::point(x0), N::point(bx0)};
  cert.interval_j = Arc{N::point(bx0), N::point(x1)};

  // a(J) = I and b^{+-1}(I) in J, read mod 1
  if (!arc_rel(N::eval(la, bx0), N::eval(la, x1), x0, bx0, tol, true))
    throw CertificateFailureError("certify_case1: a(J) = I violated");
  if (!arc_rel(N::eval(lb, x0), N::eval(lb, bx0), bx0, x1, tol, false))
    throw CertificateFailureError("certify_case1: b(I) in J violated");
  const Lift& lbi = act.lift_b_inv();
  if (!arc_rel(N::eval(lbi, x0), N::eval(lbi, bx0), bx0, x1, tol, false))
    throw CertificateFailureError("certify_case1: b^{-1}(I) in J violated");

  for (const Word& w : enumerate_words(max_syllables)) {
    ConjClass c = classify_conjugacy(w);
    WordVerdict v;
    v.word = w;
    v.kind = c.kind_name();
    switch (c.kind) {
      case ConjClass::Kind::Identity:
        v.rot = Rat(0);
        break;
      case ConjClass::Kind::PowerOfAlpha:
        v.rot = Rat(1, 2);
        break;
      case ConjClass::Kind::PowerOfBeta:
        v.rot = Rat(c.beta_exp, 3);
        break;
      case ConjClass::Kind::Hyperbolic: {
        v.canonical = c.canonical;
        Lift f = act.apply(c.canonical);
        if (!arc_rel(N::eval(f, x0), N::eval(f, bx0), x0, bx0, tol, false))
          throw CertificateFailureError("certify_case1: trapping failed for word " +
                                        c.canonical.str());
        v.rot = Rat(0);
        v.trapped = true;
        break;
      }
    }
    cert.verdicts.push_back(std::move(v));
  }
  return cert;
}

}  // namespace detail

// Interval-trapping certificate: every word conjugate into the trapped form
// maps the arc I into itself, which certifies rotation number zero; torsion
// classes carry their rotation number by definition.
inline Case1Certificate certify_case1(const CircleAction& act, int max_syllables = 8) {
  RotationTriple t = rotation_triple(act);
  RotationTriple want = RotationTriple::from_exact(Rat(1, 2), Rat(1, 3), Rat(0));
  if (!(t == want))
    throw CertificateFailureError("certify_case1: rotation triple is not (1/2, 1/3, 0)");
  LinePoint x0 = find_x0_case1(act);
  if (act.backend() == Backend::ExactPl)
    return detail::certify_case1_impl<Rat>(act, max_syllables, *x0.exact);
  return detail::certify_case1_impl<double>(act, max_syllables, x0.approx);
}

// Pointwise max over words and a sample grid of the circle distance between
// h(phi1(w)(x)) and phi2(w)(h(x)); zero iff h intertwines the two actions on
// the grid.  Exact when both actions live on the exact backend.
inline double check_semiconjugacy(const MonotoneMap& h, const CircleAction& phi1,
                                  const CircleAction& phi2, const std::vector<Word>& words,
                                  int samples = 64) {
  if (samples < 1) throw MalformedError("check_semiconjugacy: samples < 1");
  bool exact = phi1.backend() == Backend::ExactPl && phi2.backend() == Backend::ExactPl;
  double worst = 0;
  for (const Word& w : words) {
    Lift f1 = phi1.apply(w), f2 = phi2.apply(w);
    for (int i = 0; i < samples; ++i) {
      double r;
      if (exact) {
        Rat x(i, samples);
        Rat d = frac(h(lift_eval_exact(f1, x)) - lift_eval_exact(f2, h(x)));
        if (d > Rat(1, 2)) d = 1 - d;
        r = to_double(d);
      } else {
        double x = static_cast<double>(i) / samples;
        double d = h.eval(lift_eval(f1, x)) - lift_eval(f2, h.eval(x));
        r = std::abs(d - std::round(d));
      }
      worst = std::max(worst, r);
    }
  }
  return worst;
}

namespace detail {

// Conjugator g with g(b(x)) = g(x) + 1/3: linear seed on [0, b(0)], then
// propagated through the b-orbit of 0.
inline PlMap rotation_conjugator(const PlMap& b) {
  Rat t1 = b(Rat(0)), t2 = b(t1);
  if (!(Rat(0) < t1 && t1 < t2 && t2 < Rat(1)))
    throw NormalizationFailureError("normalize: b-orbit of 0 is not cyclically ordered");
  PlMap seed({{Rat(0), Rat(0)}, {t1, Rat(1, 3)}});
  PlMap binv = pl_inverse(b);
  PlMap h1 = pl_compose(seed, binv);             // g - 1/3 on [t1, t2]
  PlMap h2 = pl_compose(h1, binv);               // g - 2/3 on [t2, 1]
  std::vector<std::pair<Rat, Rat>> pts;
  auto add = [&pts](const Rat& x, const Rat& y) {
    if (pts.empty() || pts.back().first < x) pts.emplace_back(x, y);
  };
  add(Rat(0), Rat(0));
  for (const auto& [x, y] : seed.pts)
    if (Rat(0) < x && x < t1) add(x, y);
  add(t1, Rat(1, 3));
  for (const auto& [x, y] : h1.pts)
    if (t1 < x && x < t2) add(x, y + Rat(1, 3));
  add(t2, Rat(2, 3));
  for (const auto& [x, y] : h2.pts)
    if (t2 < x && x < Rat(1)) add(x, y + Rat(2, 3));
  return PlMap(pts);
}

}  // namespace detail

// Conjugate act so that b becomes the rigid rotation by 1/3 and the a-lift
// satisfies a(1/3) = 1; exact-backend only.
inline CircleAction normalize_case1(const CircleAction& act) {
  if (act.backend() != Backend::ExactPl)
    throw NormalizationFailureError("normalize: exact PL backend required");
  RotationTriple t = rotation_triple(act);
  if (!(t == RotationTriple::from_exact(Rat(1, 2), Rat(1, 3), Rat(0))))
    throw SemiConjError("normalize: rotation triple is not (1/2, 1/3, 0)");

  PlMap g = detail::rotation_conjugator(lift_to_pl(act.lift_b()));
  PlMap gi = pl_inverse(g);
  if (!pl_equal(pl_compose(pl_compose(g, lift_to_pl(act.lift_b())), gi),
                PlMap::rotation(Rat(1, 3))))
    throw NormalizationFailureError("normalize: conjugated b is not the rotation by 1/3");
  PlMap a1 = pl_compose(pl_compose(g, lift_to_pl(act.lift_a())), gi);

  // rotate so that the conjugated a-lift sends 1/3 to 1; the two offsets must
  // cancel exactly (wrapping them separately would smuggle in a deck shift)
  std::vector<Rat> ys = pl_fixed_points(a1, Rat(2, 3));
  if (ys.empty()) throw NormalizationFailureError("normalize: a has no point with a(y) = y + 2/3");
  Rat s = Rat(1, 3) - ys.front();
  PlMap a2 = pl_compose(pl_compose(PlMap::rotation(s), a1), PlMap::rotation(-s));
  return CircleAction(Lift::pl(a2), Lift::rotation(Rat(1, 3)), Rat(1, 2), Rat(1, 3),
                      act.threshold());
}

// Discretized path between two (1/2, 1/3, 0) actions: normalize both, then
// interpolate the free half [1/3, 1] of the a-lifts and rebuild the other
// half from the involution relation.  Every returned action re-verifies.
inline std::vector<CircleAction> path_witness(const CircleAction& phi0, const CircleAction& phi1,
                                              int steps = 16) {
  if (steps < 2) throw MalformedError("path_witness: steps < 2");
  CircleAction n0 = normalize_case1(phi0), n1 = normalize_case1(phi1);
  PlMap a0 = lift_to_pl(n0.lift_a()), a1 = lift_to_pl(n1.lift_a());

  // breakpoint skeleton of the interpolants on [1/3, 1]
  std::vector<Rat> xs{Rat(1, 3), Rat(1)};
  for (const PlMap* m : {&a0, &a1})
    for (const auto& [x, y] : m->pts)
      if (Rat(1, 3) < x && x < Rat(1)) xs.push_back(x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<CircleAction> path;
  path.reserve(steps);
  RotationTriple want = RotationTriple::from_exact(Rat(1, 2), Rat(1, 3), Rat(0));
  for (int i = 0; i < steps; ++i) {
    Rat t(i, steps - 1);
    std::vector<std::pair<Rat, Rat>> half;
    half.reserve(xs.size());
    for (const Rat& x : xs) half.emplace_back(x, (1 - t) * a0(x) + t * a1(x));
    // full period: the half determines the rest through a(a(x)) = x + 1, and
    // the mirrored points land in [1, 4/3), one period above their slot
    std::vector<std::pair<Rat, Rat>> pts;
    for (const auto& [x, y] : half)
      if (x < Rat(1)) pts.emplace_back(x, y);
    for (const auto& [x, y] : half)
      if (Rat(1) < y && y < Rat(4, 3)) pts.emplace_back(y - 1, x);
    pts.emplace_back(Rat(0), Rat(1, 3));  // image of the seam point
    std::sort(pts.begin(), pts.end());
    CircleAction step(Lift::pl(PlMap(pts)), Lift::rotation(Rat(1, 3)), Rat(1, 2), Rat(1, 3),
                      phi0.threshold());
    if (!(rotation_triple(step) == want))
      throw CertificateFailureError("path_witness: interpolant left the class");
    path.push_back(std::move(step));
  }
  return path;
}

struct IneqReport {
  Backend backend{};
  double threshold = 0;
  int window = 0;
  LinePoint x0;
  // worst-case slack of the three clauses; all must be positive
  double margin1 = 0, margin2 = 0, margin3 = 0;
};

namespace detail {

// Lift of phi(ab) translating by 1/5 at the ladder level, i.e. (a b)-lift - 1.
inline Lift case2_w(const CircleAction& act) {
  return lift_translate(act.apply(Word::parse("ab")), Rat(-1));
}

template <class S>
S case2_x0(const CircleAction& act, const Lift& w) {
  Lift w5 = lift_pow(w, 5);
  if constexpr (std::is_same_v<S, Rat>) {
    if (auto x = solve_translation_exact(w5, Rat(1))) return *x;
  } else {
    if (auto x = solve_translation_float(w5, 1.0, act.threshold())) return *x;
  }
  throw NoSolutionError("case2: no point with w^5(x) = x + 1");
}

// Orbit x_l = w^l(x0) for l in [lo, hi], using w^5 = T_1 along the orbit.
template <class S>
std::map<long, S> case2_orbit(const Lift& w, const S& x0, long lo, long hi) {
  using N = NumOps<S>;
  std::array<S, 5> base;
  base[0] = x0;
  for (int r = 1; r < 5; ++r) base[r] = N::eval(w, base[r - 1]);
  std::map<long, S> orbit;
  for (long l = lo; l <= hi; ++l) {
    long q = (l >= 0 ? l : l - 4) / 5;  // floor division
    orbit.emplace(l, base[l - 5 * q] + N::from_long(q));
  }
  return orbit;
}

template <class S>
IneqReport verify_lemma_ineq_impl(const CircleAction& act, int window, int samples) {
  using N = NumOps<S>;
  const double tol = act.threshold();
  const Lift &la = act.lift_a(), &lb = act.lift_b();
  Lift w = case2_w(act);

  IneqReport rep;
  rep.backend = act.backend();
  rep.threshold = tol;
  rep.window = window;

  // (1) a(x) < b(x) everywhere: the displacement difference is PL, so the
  // breakpoint partition is exhaustive on the exact backend; sampled otherwise
  double m1 = std::numeric_limits<double>::infinity();
  S m1_wit{};
  auto probe1 = [&](const S& x) {
    double d = N::to_d(N::eval(lb, x) - N::eval(la, x));
    if (d < m1) {
      m1 = d;
      m1_wit = x;
    }
  };
  if constexpr (std::is_same_v<S, Rat>) {
    for (const auto& [x, y] : lift_to_pl(la).pts) probe1(x);
    for (const auto& [x, y] : lift_to_pl(lb).pts) probe1(x);
  } else {
    for (int i = 0; i < samples; ++i) probe1(static_cast<double>(i) / samples);
  }
  rep.margin1 = m1;
  if (!(m1 > 0))
    throw InequalityFailureError("inequality (1) fails: a(x) >= b(x) at x = " +
                                 std::to_string(N::to_d(m1_wit)));

  // (2) w^2 a(x) < x + 1 everywhere
  Lift w2a = lift_compose(w, lift_compose(w, la));
  double m2 = std::numeric_limits<double>::infinity();
  S m2_wit{};
  auto probe2 = [&](const S& x) {
    double d = N::to_d(x + N::from_long(1) - N::eval(w2a, x));
    if (d < m2) {
      m2 = d;
      m2_wit = x;
    }
  };
  if constexpr (std::is_same_v<S, Rat>) {
    for (const auto& [x, y] : lift_to_pl(w2a).pts) probe2(x);
  } else {
    for (int i = 0; i < samples; ++i) probe2(static_cast<double>(i) / samples);
  }
  rep.margin2 = m2;
  if (!(m2 > 0))
    throw InequalityFailureError("inequality (2) fails: w^2 a(x) >= x + 1 at x = " +
                                 std::to_string(N::to_d(m2_wit)));

  // (3) x_l < b(x_{l+2}) - 1 < b^2(x_{l+4}) - 2 < x_{l+1} along the orbit
  S x0 = case2_x0<S>(act, w);
  rep.x0 = N::point(x0);
  auto orbit = case2_orbit(w, x0, -window - 1, window + 4);
  double m3 = std::numeric_limits<double>::infinity();
  for (long l = -window; l <= window; ++l) {
    S t0 = orbit.at(l);
    S t1 = N::eval(lb, orbit.at(l + 2)) - N::from_long(1);
    S t2 = N::eval(lb, N::eval(lb, orbit.at(l + 4))) - N::from_long(2);
    S t3 = orbit.at(l + 1);
    m3 = std::min({m3, N::to_d(t1 - t0), N::to_d(t2 - t1), N::to_d(t3 - t2)});
    if (!(N::lt(t0, t1, 0) && N::lt(t1, t2, 0) && N::lt(t2, t3, 0)))
      throw InequalityFailureError("inequality (3) fails at l = " + std::to_string(l));
  }
  rep.margin3 = m3;
  return rep;
}

}  // namespace detail

// The three order inequalities underlying the Markov partition of the
// (1/2, 2/3, 1/5) class.  Margins report the worst slack found.
inline IneqReport verify_lemma_ineq(const CircleAction& act, int window = 10,
                                    int samples = 10000) {
  RotationTriple t = rotation_triple(act);
  if (!(t == RotationTriple::from_exact(Rat(1, 2), Rat(2, 3), Rat(1, 5))))
    throw SemiConjError("verify_lemma_ineq: rotation triple is not (1/2, 2/3, 1/5)");
  if (act.backend() == Backend::ExactPl)
    return detail::verify_lemma_ineq_impl<Rat>(act, window, samples);
  return detail::verify_lemma_ineq_impl<double>(act, window, samples);
}

struct MarkovRow {
  long index = 0;
  // interval_i = (lo, mid], interval_j = (mid, hi]
  LinePoint lo, mid, hi;
};

struct MarkovCertificate {
  Backend backend{};
  double threshold = 0;
  int window = 0;
  LinePoint x0;
  std::vector<MarkovRow> rows;
  double interior_margin = 0;  // worst distance of the clause-(1) points from J boundaries
  double equality_residual = 0;  // worst residual of the clause-(2) equalities (0 when exact)
};

namespace detail {

template <class S>
MarkovCertificate build_markov_impl(const CircleAction& act, int window, const S& x0) {
  using N = NumOps<S>;
  const double tol = act.threshold();
  const Lift &la = act.lift_a(), &lb = act.lift_b(), &lbi = act.lift_b_inv();
  Lift w = case2_w(act);
  const long L = window;

  auto orbit = case2_orbit(w, x0, -L - 4, L + 8);
  auto x = [&orbit](long l) -> const S& { return orbit.at(l); };
  // J_l = (mid(l), x_{l+1}] with mid(l) = b(x_{l+2}) - 1; I_l = (x_l, mid(l)]
  std::map<long, S> mids;
  for (long l = -L - 4; l <= L + 5; ++l)
    mids.emplace(l, N::eval(lb, x(l + 2)) - N::from_long(1));
  auto mid = [&mids](long l) -> const S& { return mids.at(l); };

  MarkovCertificate cert;
  cert.backend = act.backend();
  cert.threshold = tol;
  cert.window = window;
  cert.x0 = N::point(x0);
  double interior = std::numeric_limits<double>::infinity();
  double residual = 0;
  auto fail = [](const std::string& clause, long l) {
    throw CertificateFailureError("build_markov: " + clause + " fails at l = " +
                                  std::to_string(l));
  };
  auto check_eq = [&](const S& u, const S& v, const char* clause, long l) {
    if (!N::eq(u, v, tol)) fail(clause, l);
    residual = std::max(residual, std::abs(N::to_d(u - v)));
  };

  for (long l = -L; l <= L; ++l) {
    // interval well-formedness: x_l < mid(l) < x_{l+1}
    if (!(N::lt(x(l), mid(l), 0) && N::lt(mid(l), x(l + 1), 0)))
      fail("interval ordering", l);
    cert.rows.push_back(MarkovRow{l, N::point(x(l)), N::point(mid(l)), N::point(x(l + 1))});

    // (1) b^{-1}(x_l) interior to J_{l-4}; (b a)(x_l) interior to J_{l+5}
    S u = N::eval(lbi, x(l));
    if (!(N::lt(mid(l - 4), u, 0) && N::lt(u, x(l - 3), 0))) fail("interior containment (1)", l);
    interior = std::min({interior, N::to_d(u - mid(l - 4)), N::to_d(x(l - 3) - u)});
    S v = N::eval(lb, N::eval(la, x(l)));
    if (!(N::lt(mid(l + 5), v, 0) && N::lt(v, x(l + 6), 0))) fail("interior containment (1)", l);
    interior = std::min({interior, N::to_d(v - mid(l + 5)), N::to_d(x(l + 6) - v)});

    // (2) a(J_l) = I_{l+3}; b(I_l) in J_{l+3}; b^{-1}(I_l) in J_{l-4}
    check_eq(N::eval(la, mid(l)), x(l + 3), "a(J) = I equality", l);
    check_eq(N::eval(la, x(l + 1)), mid(l + 3), "a(J) = I equality", l);
    if (!(N::le(mid(l + 3), N::eval(lb, x(l)), tol) &&
          N::le(N::eval(lb, mid(l)), x(l + 4), tol)))
      fail("b(I) in J inclusion", l);
    if (!(N::le(mid(l - 4), N::eval(lbi, x(l)), tol) &&
          N::le(N::eval(lbi, mid(l)), x(l - 3), tol)))
      fail("b^{-1}(I) in J inclusion", l);

    // endpoint identity a(x_l) = b(x_{l+4}) - 1 and translation compatibility
    check_eq(N::eval(la, x(l)), N::eval(lb, x(l + 4)) - N::from_long(1), "endpoint identity", l);
    if (l + 5 <= L) {
      check_eq(x(l + 5), x(l) + N::from_long(1), "translation compatibility", l);
      check_eq(mid(l + 5), mid(l) + N::from_long(1), "translation compatibility", l);
    }
  }
  cert.interior_margin = interior;
  cert.equality_residual = residual;
  return cert;
}

}  // namespace detail

// Markov-partition certificate along the w-orbit of x0, where w is the
// (1/5)-translating lift of phi(ab) and w^5(x0) = x0 + 1.
inline MarkovCertificate build_markov(const CircleAction& act, int window = 10) {
  IneqReport pre = verify_lemma_ineq(act, window);
  if (act.backend() == Backend::ExactPl)
    return detail::build_markov_impl<Rat>(act, window, *pre.x0.exact);
  return detail::build_markov_impl<double>(act, window, pre.x0.approx);
}

struct ThetaMap {
  Backend backend{};
  double threshold = 0;
  int max_syllables = 0;
  LinePoint x0;
  std::vector<std::pair<double, double>> table;  // merged orbit pairs, sorted
  std::optional<std::vector<std::pair<Rat, Rat>>> table_exact;
  MonotoneMap extension;
  double max_gap = 1;  // largest gap between adjacent table points
  int deck_step = 0;   // nearest j with theta(x0) - x0 close to j/5
  double wd_residual = 0, equiv_residual = 0, period5_residual = 0;
  int equiv_checked = 0, period5_checked = 0;
};

namespace detail {

template <class S>
ThetaMap build_theta_impl(const CircleAction& act, int max_syllables, double tol,
                          const Rat& max_gap, const S& x0) {
  using N = NumOps<S>;
  Lift w = case2_w(act);
  S x1 = N::eval(w, x0);

  ThetaMap theta;
  theta.backend = act.backend();
  theta.threshold = tol;
  theta.max_syllables = max_syllables;
  theta.x0 = N::point(x0);

  // orbit table: phi(w)(x0) -> phi(w)(ab-lift(x0)), folded into [0,1)
  std::vector<std::pair<S, S>> raw;
  raw.emplace_back(x0 - N::from_long(N::whole_floor(x0)),
                   x1 - N::from_long(N::whole_floor(x0)));
  for (const Word& word : enumerate_words(max_syllables)) {
    Lift f = act.apply(word);
    S p = N::eval(f, x0), q = N::eval(f, x1);
    long m = N::whole_floor(p);
    raw.emplace_back(p - N::from_long(m), q - N::from_long(m));
  }
  std::sort(raw.begin(), raw.end(),
            [](const auto& u, const auto& v) { return u.first < v.first; });

  // merge coincident orbit points; their images must coincide as well
  std::vector<std::pair<S, S>> table;
  double wd = 0;
  for (const auto& [p, q] : raw) {
    if (!table.empty() && N::eq(table.back().first, p, tol)) {
      if (!N::eq(table.back().second, q, tol))
        throw WellDefinednessFailureError(
            "build_theta: coincident orbit points with distinct images near x = " +
            std::to_string(N::to_d(p)));
      wd = std::max(wd, std::abs(N::to_d(q - table.back().second)));
      continue;
    }
    table.emplace_back(p, q);
  }
  theta.wd_residual = wd;

  // strict monotonicity, including the wrap-around pair
  for (size_t i = 0; i + 1 < table.size(); ++i)
    if (!N::lt(table[i].second, table[i + 1].second, tol))
      throw MonotonicityFailureError("build_theta: table not increasing near x = " +
                                     std::to_string(N::to_d(table[i + 1].first)));
  if (table.size() > 1 &&
      !N::lt(table.back().second, table.front().second + N::from_long(1), tol))
    throw MonotonicityFailureError("build_theta: table wrap-around not increasing");

  // density gate: the table must fill the circle below the requested gap
  double gap = table.size() > 1 ? 0.0 : 1.0;
  for (size_t i = 0; i + 1 < table.size(); ++i)
    gap = std::max(gap, N::to_d(table[i + 1].first - table[i].first));
  if (table.size() > 1)
    gap = std::max(gap, N::to_d(table.front().first + N::from_long(1) - table.back().first));
  theta.max_gap = gap;
  if (gap > to_double(max_gap))
    throw DensityFailureError("build_theta: orbit too sparse (max gap " + std::to_string(gap) +
                              "); raise max_syllables");

  // lookup of theta at an arbitrary orbit point, via the table mod 1
  auto lookup = [&](const S& u) -> std::optional<S> {
    S r = u - N::from_long(N::whole_floor(u));
    auto it = std::lower_bound(table.begin(), table.end(), r,
                               [](const auto& row, const S& key) { return row.first < key; });
    for (auto cand : {it, it == table.begin() ? table.end() : std::prev(it)}) {
      if (cand == table.end()) continue;
      if (N::eq(cand->first, r, tol))
        return cand->second + (u - r);
    }
    // wrap candidates: r near 0 matches the last point one period down, and
    // r near 1 matches the first point one period up
    if (!table.empty() && N::eq(table.back().first - N::from_long(1), r, tol))
      return table.back().second - N::from_long(1) + (u - r);
    if (!table.empty() && N::eq(table.front().first + N::from_long(1), r, tol))
      return table.front().second + N::from_long(1) + (u - r);
    return std::nullopt;
  };

  // equivariance on table points: theta(f(p)) = f(theta(p)) whenever f(p)
  // lands back in the table
  double equiv = 0;
  int n_equiv = 0;
  for (const char* gen : {"a", "b", "B"}) {
    Lift f = act.apply(Word::parse(gen));
    for (const auto& [p, q] : table) {
      if (auto th = lookup(N::eval(f, p))) {
        equiv = std::max(equiv, std::abs(N::to_d(*th - N::eval(f, q))));
        ++n_equiv;
      }
    }
  }
  theta.equiv_residual = equiv;
  theta.equiv_checked = n_equiv;

  // period five: chasing the table five times climbs exactly one deck
  double per5 = 0;
  int n_per5 = 0;
  for (const auto& [p, q] : table) {
    S y = p;
    bool complete = true;
    for (int step = 0; step < 5; ++step) {
      if (auto th = lookup(y)) {
        y = *th;
      } else {
        complete = false;
        break;
      }
    }
    if (complete) {
      per5 = std::max(per5, std::abs(N::to_d(y - p - N::from_long(1))));
      ++n_per5;
    }
  }
  theta.period5_residual = per5;
  theta.period5_checked = n_per5;
  theta.deck_step = static_cast<int>(std::lround(5 * N::to_d(x1 - x0)));

  // monotone PL extension through the table
  std::vector<std::pair<Rat, Rat>> pts;
  pts.reserve(table.size());
  for (const auto& [p, q] : table) {
    if constexpr (std::is_same_v<S, Rat>) {
      pts.emplace_back(p, q);
    } else {
      pts.emplace_back(rat_from_double(p), rat_from_double(q));
    }
  }
  for (const auto& [p, q] : table) theta.table.emplace_back(N::to_d(p), N::to_d(q));
  if constexpr (std::is_same_v<S, Rat>) theta.table_exact = pts;
  theta.extension = MonotoneMap(pts);
  return theta;
}

}  // namespace detail

// Tabulate the equivariant period-5 map on the orbit of x0 and extend it by
// monotone interpolation; residuals quantify how far the finite table is from
// the defining identities.
inline ThetaMap build_theta(const CircleAction& act, int max_syllables = 8,
                            double threshold = 1e-9, const Rat& max_gap = Rat(1, 8)) {
  MarkovCertificate pre = build_markov(act, 4);
  if (act.backend() == Backend::ExactPl)
    return detail::build_theta_impl<Rat>(act, max_syllables, threshold, max_gap,
                                         *pre.x0.exact);
  return detail::build_theta_impl<double>(act, max_syllables, threshold, max_gap,
                                          pre.x0.approx);
}

}  // namespace rotkit
