#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rotkit/enclosure.hpp"
#include "rotkit/lift.hpp"
#include "rotkit/mobius.hpp"
#include "rotkit/pl_map.hpp"
#include "rotkit/rational.hpp"
#include "rotkit/rng.hpp"
#include "rotkit/word.hpp"

namespace rotkit {

struct ActionError : Error {
  using Error::Error;
};

// no integer offset restores the group relations at the requested degree
struct NoLiftExistsError : ActionError {
  using ActionError::ActionError;
};

struct InvalidKError : ActionError {
  using ActionError::ActionError;
};

struct UnsupportedTripleError : ActionError {
  using ActionError::ActionError;
};

// a triple entry is only an enclosure, not a pinned rational
struct NonExactTripleError : ActionError {
  using ActionError::ActionError;
};

enum class Backend { ExactPl, MobiusFloat };

inline std::string backend_name(Backend b) {
  return b == Backend::ExactPl ? "pl" : "mobius";
}

// One rotation number: an exact rational mod 1 when detection pinned it, else
// a sound interval for the translation number of the evaluated lift.
struct TripleEntry {
  std::optional<Rat> exact;
  std::optional<Enclosure> bounds;

  bool is_exact() const { return exact.has_value(); }
};

struct RotationTriple {
  TripleEntry a, b, ab;

  bool all_exact() const { return a.is_exact() && b.is_exact() && ab.is_exact(); }

  static RotationTriple from_exact(Rat ra, Rat rb, Rat rab) {
    RotationTriple t;
    t.a.exact = std::move(ra);
    t.b.exact = std::move(rb);
    t.ab.exact = std::move(rab);
    return t;
  }

  friend bool operator==(const RotationTriple& s, const RotationTriple& t) {
    return s.all_exact() && t.all_exact() && *s.a.exact == *t.a.exact &&
           *s.b.exact == *t.b.exact && *s.ab.exact == *t.ab.exact;
  }
};

struct SemiConjClass {
  enum class Tag { FuchsianO23, FiveFoldLift, Unclassified };

  Tag tag = Tag::Unclassified;
  Rat rot_a, rot_b, rot_ab;  // the deciding triple

  std::string tag_name() const {
    switch (tag) {
      case Tag::FuchsianO23:
        return "FuchsianO23";
      case Tag::FiveFoldLift:
        return "FiveFoldLift";
      case Tag::Unclassified:
        return "Unclassified";
    }
    return {};
  }
};

// Action of <a, b | a^2 = b^3 = 1> on the circle by orientation-preserving
// homeomorphisms, stored as one lift per generator image (each commuting with
// x -> x+1) plus the declared translation numbers of those lifts.
// Construction verifies the relations a^2 = b^3 = 1 on the circle and the
// declared rotation numbers: exactly on the PL backend, to `threshold` on the
// Mobius backend. Instances are immutable and safe to share across threads.
class CircleAction {
 public:
  CircleAction(Lift la, Lift lb, Rat ra, Rat rb, double threshold = 1e-9)
      : lift_a_(std::move(la)),
        lift_b_(std::move(lb)),
        lift_b_inv_(lift_inverse(lift_b_)),
        rot_a_(std::move(ra)),
        rot_b_(std::move(rb)),
        threshold_(threshold) {
    verify();
  }

  const Lift& lift_a() const { return lift_a_; }
  const Lift& lift_b() const { return lift_b_; }
  const Lift& lift_b_inv() const { return lift_b_inv_; }
  const Rat& rot_a() const { return rot_a_; }
  const Rat& rot_b() const { return rot_b_; }
  double threshold() const { return threshold_; }

  Backend backend() const {
    return lift_is_exact(lift_a_) && lift_is_exact(lift_b_) ? Backend::ExactPl
                                                            : Backend::MobiusFloat;
  }

  // Lift of the image of w: token a -> lift_a, b -> lift_b, B -> lift_b^{-1},
  // folded right to left so adjacent exact or Mobius factors collapse.
  Lift apply(const Word& w) const {
    Lift acc = Lift::identity();
    const auto& syl = w.syllables();
    for (auto it = syl.rbegin(); it != syl.rend(); ++it) {
      const Lift& f = it->is_a ? lift_a_ : (it->exp == 1 ? lift_b_ : lift_b_inv_);
      acc = lift_compose(f, acc);
    }
    return acc;
  }

 private:
  void verify() const {
    if (rot_a_ < 0 || rot_a_ >= 1 || rot_b_ < 0 || rot_b_ >= 1)
      throw ActionError("action: declared rotation numbers must lie in [0,1)");
    if (!is_integer(rot_a_ * 2))
      throw ActionError("action: rot(a) must be a multiple of 1/2");
    if (!is_integer(rot_b_ * 3))
      throw ActionError("action: rot(b) must be a multiple of 1/3");
    check_relation(lift_a_, 2, rot_a_ * 2, "a^2");
    check_relation(lift_b_, 3, rot_b_ * 3, "b^3");
    check_detected(lift_a_, 2, rot_a_, "a");
    check_detected(lift_b_, 3, rot_b_, "b");
  }

  void check_relation(const Lift& f, int order, const Rat& shift, const char* what) const {
    Lift p = lift_pow(f, order);
    if (lift_is_exact(p)) {
      auto off = pl_translation_offset(lift_to_pl(p));
      if (!off || *off != shift)
        throw ActionError(std::string("action: ") + what +
                          " is not translation by " + format_rat(shift));
      return;
    }
    double target = to_double(shift);
    for (int i = 0; i < 64; ++i) {
      double x = i / 64.0;
      if (!(std::abs(lift_eval(p, x) - x - target) <= threshold_))
        throw ActionError(std::string("action: ") + what +
                          " misses translation by " + format_rat(shift));
    }
  }

  void check_detected(const Lift& f, long q_max, const Rat& declared, const char* what) const {
    auto d = detect_rational_rotation(f, q_max, threshold_);
    if (!d || d->value != declared)
      throw ActionError(std::string("action: detected rot(") + what +
                        ") disagrees with the declared " + format_rat(declared));
  }

  Lift lift_a_, lift_b_, lift_b_inv_;
  Rat rot_a_, rot_b_;
  double threshold_;
};

// ra and rb are the declared values; rab comes from rational detection on the
// lift of ab, falling back to an iteration enclosure of width <= 2/n_iters.
inline RotationTriple rotation_triple(const CircleAction& act, long q_max = 30,
                                      long n_iters = 10000) {
  RotationTriple t;
  t.a.exact = act.rot_a();
  t.b.exact = act.rot_b();
  Lift ab = act.apply(Word::parse("ab"));
  if (auto d = detect_rational_rotation(ab, q_max, act.threshold()))
    t.ab.exact = d->value;
  else
    t.ab.bounds = translation_number_enclosure(ab, n_iters);
  return t;
}

inline SemiConjClass classify_theorem1(const RotationTriple& t) {
  if (!t.all_exact())
    throw NonExactTripleError("classify: triple has an entry without an exact rational");
  SemiConjClass c;
  c.rot_a = *t.a.exact;
  c.rot_b = *t.b.exact;
  c.rot_ab = *t.ab.exact;
  if (c.rot_a == Rat(1, 2) && c.rot_b == Rat(1, 3) && c.rot_ab == 0)
    c.tag = SemiConjClass::Tag::FuchsianO23;
  else if (c.rot_a == Rat(1, 2) && c.rot_b == Rat(2, 3) && c.rot_ab == Rat(1, 5))
    c.tag = SemiConjClass::Tag::FiveFoldLift;
  else
    c.tag = SemiConjClass::Tag::Unclassified;
  return c;
}

// Projective action through PSL(2,R): a acts by v -> -1/v and b by
// v -> -(1+v)/v in the boundary chart. The a matrix is a quarter turn, so its
// base lift is x - 1/2 and sheet 1 raises rot~ to 1/2; the b matrix's base
// lift already advances by 1/3 per three steps (sheet 0).
inline CircleAction fuchsian_o23(double threshold = 1e-9) {
  Mobius alpha(0, -1, 1, 0);
  Mobius beta(1, 1, -1, 0);
  return CircleAction(Lift::mobius(alpha, 1), Lift::mobius(beta, 0), Rat(1, 2),
                      Rat(1, 3), threshold);
}

// Exact-PL action with the same rotation triple (1/2, 1/3, 0) as
// fuchsian_o23: b is the rigid rotation by 1/3, a is the PL involution
// through (0,1/3) and (1/3,1), and (ab) fixes 0 on the circle.
inline CircleAction fuchsian_pl_model(double threshold = 1e-9) {
  PlMap a_map{{{Rat(0), Rat(1, 3)}, {Rat(1, 3), Rat(1)}}};
  return CircleAction(Lift::pl(std::move(a_map)), Lift::rotation(Rat(1, 3)),
                      Rat(1, 2), Rat(1, 3), threshold);
}

namespace detail {

// Degree-k candidate lift of one generator: x -> (g~(kx)+j)/k. Whether the
// order-n relation survives on the circle depends only on j, because
// G_j^n = x + (n_shift + n*j)/k where n_shift = n * rot~(g~); the relation
// holds iff that exponent is an integer, i.e. n*j = -n_shift (mod k).
inline std::vector<long> rescale_offsets(const CircleAction& act, const Lift& g,
                                         int order, const Rat& rot, long k) {
  long shift = static_cast<long>(floor_rat(rot * order).convert_to<long>());
  std::vector<long> hits;
  for (long j = 0; j < k; ++j) {
    if ((shift + order * j) % k != 0) continue;
    // cross-check by actually composing the candidate
    Lift cand = Lift::rescale(g, k, j);
    Lift p = lift_pow(cand, order);
    if (lift_is_exact(p)) {
      auto off = pl_translation_offset(lift_to_pl(p));
      if (!off || !is_integer(*off)) continue;
    } else {
      long m = (shift + order * j) / k;
      bool ok = true;
      for (int i = 0; i < 16 && ok; ++i) {
        double x = i / 16.0;
        ok = std::abs(lift_eval(p, x) - x - static_cast<double>(m)) <= act.threshold();
      }
      if (!ok) continue;
    }
    hits.push_back(j);
  }
  return hits;
}

}  // namespace detail

// The degree-k lift: the action psi with p_k(psi(w)(x)) = w(p_k(x)) for the
// covering p_k(x) = kx mod 1, found by searching the k integer offsets per
// generator for the ones restoring a^2 = b^3 = 1 on the circle. For the
// standard triples exactly one offset pair survives when k = +-1 (mod 6) and
// none otherwise. Declared rotation numbers become (rot + j)/k.
inline CircleAction k_fold_lift(const CircleAction& act, long k) {
  if (k < 2) throw InvalidKError("k_fold_lift: k must be >= 2");
  auto pick = [&](const Lift& g, int order, const Rat& rot, const char* what) -> long {
    std::vector<long> hits = detail::rescale_offsets(act, g, order, rot, k);
    if (hits.empty())
      throw NoLiftExistsError(std::string("k_fold_lift: no degree-") +
                              std::to_string(k) + " lift of " + what +
                              " keeps its relation");
    if (hits.size() > 1)
      throw ActionError(std::string("k_fold_lift: lift of ") + what +
                        " is not unique at k=" + std::to_string(k));
    return hits.front();
  };
  long ja = pick(act.lift_a(), 2, act.rot_a(), "a");
  long jb = pick(act.lift_b(), 3, act.rot_b(), "b");
  Lift la = Lift::rescale(act.lift_a(), k, ja);
  Lift lb = Lift::rescale(act.lift_b(), k, jb);
  if (act.backend() == Backend::ExactPl) {
    la = Lift::pl(lift_to_pl(la));
    lb = Lift::pl(lift_to_pl(lb));
  }
  return CircleAction(std::move(la), std::move(lb), (act.rot_a() + ja) / k,
                      (act.rot_b() + jb) / k, act.threshold());
}

namespace detail {

struct Mat2 {
  double m[4];

  Mat2 mul(const Mat2& o) const {
    return Mat2{{m[0] * o.m[0] + m[1] * o.m[2], m[0] * o.m[1] + m[1] * o.m[3],
                 m[2] * o.m[0] + m[3] * o.m[2], m[2] * o.m[1] + m[3] * o.m[3]}};
  }
};

// rotation by angle psi about the point u + iv of the upper half-plane:
// conjugate R(psi) at i by the affine matrix sending i to u + iv
inline Mat2 elliptic_mat(double u, double v, double psi) {
  double c = std::cos(psi / 2), s = std::sin(psi / 2);
  double rv = std::sqrt(v);
  Mat2 ap{{rv, u / rv, 0, 1 / rv}};
  Mat2 rot{{c, s, -s, c}};
  Mat2 api{{1 / rv, -u / rv, 0, rv}};
  return ap.mul(rot).mul(api);
}

inline double dist_from_identity(const Mat2& p) {
  double sgn = p.m[0] + p.m[3] < 0 ? -1.0 : 1.0;
  return std::max(std::max(std::abs(sgn * p.m[0] - 1), std::abs(sgn * p.m[1])),
                  std::max(std::abs(sgn * p.m[2]), std::abs(sgn * p.m[3] - 1)));
}

}  // namespace detail

// Action of the (2,3,k) rotation triangle group: a rotates by pi about the
// vertex i, b by 2pi/3 about the vertex up the imaginary axis, and their
// product is (inverse to) the order-k rotation about the third vertex on the
// unit circle. Angles pi/2, pi/3, pi/k; side lengths from the right-triangle
// relations cosh(AB) = cos(pi/k)/sin(pi/3), cosh(AC) = cos(pi/3)/sin(pi/k).
// The rotation senses and the side of the third vertex are picked numerically
// so that a*b*c = +-identity, rot(b) = 1/3 and rot(ab) = (k-1)/k.
inline CircleAction triangle_action(long k, double threshold = 1e-9) {
  if (k < 7 || (k % 6 != 1 && k % 6 != 5))
    throw InvalidKError("triangle_action: k must be >= 7 and = +-1 (mod 6)");
  double ang_c = kPi / static_cast<double>(k);
  double d_ab = std::acosh(std::cos(ang_c) / std::sin(kPi / 3));
  double theta = std::asin(2 * std::sin(ang_c));  // third vertex e^{i theta}
  detail::Mat2 ma = detail::elliptic_mat(0, 1, kPi);
  for (int side : {1, -1}) {
    for (int sb : {1, -1}) {
      for (int sc : {1, -1}) {
        detail::Mat2 mb = detail::elliptic_mat(0, std::exp(d_ab), sb * 2 * kPi / 3);
        detail::Mat2 mc = detail::elliptic_mat(side * std::cos(theta), std::sin(theta),
                                               sc * 2 * kPi / static_cast<double>(k));
        if (detail::dist_from_identity(ma.mul(mb).mul(mc)) > 1e-6) continue;
        Mobius am(ma.m[0], ma.m[1], ma.m[2], ma.m[3]);
        Mobius bm(mb.m[0], mb.m[1], mb.m[2], mb.m[3]);
        double x = 0.1875;
        double da = am.base_lift(am.base_lift(x)) - x;
        double db = bm.base_lift(bm.base_lift(bm.base_lift(x))) - x;
        long na = std::lround(da), nb = std::lround(db);
        if (std::abs(da - na) > 1e-6 || std::abs(db - nb) > 1e-6) continue;
        if (na % 2 == 0 || ((nb % 3) + 3) % 3 != 1) continue;  // need rot 1/2, 1/3
        try {
          CircleAction act(Lift::mobius(am, (1 - na) / 2), Lift::mobius(bm, (1 - nb) / 3),
                           Rat(1, 2), Rat(1, 3), threshold);
          Lift ab = act.apply(Word::parse("ab"));
          auto d = detect_rational_rotation(ab, k, threshold);
          if (!d || d->value != Rat(k - 1, k)) continue;
          return act;
        } catch (const ActionError&) {
          continue;
        }
      }
    }
  }
  throw ActionError("triangle_action: no orientation matches the rotation data");
}

// Same circle maps as triangle_action(k) when k = 1 (mod 6); when k = -1 the
// generator b is sent to the inverse triangle rotation (lift shifted to keep
// rot~ in [0,1)). The triple is (1/2, 1/3, (k-1)/k) resp. (1/2, 2/3, 1/k); it
// matches the degree-k lift of fuchsian_o23 exactly when k = 7, whose triple
// on ab is frac((5k+1)/6k) resp. frac((7k+1)/6k).
inline CircleAction hat_phi(long k, double threshold = 1e-9) {
  CircleAction tri = triangle_action(k, threshold);
  if (k % 6 == 1) return tri;
  Lift bhat = lift_translate(lift_inverse(tri.lift_b()), Rat(1));
  return CircleAction(tri.lift_a(), std::move(bhat), Rat(1, 2), Rat(2, 3), threshold);
}

struct RandomActionParams {
  int breakpoints = 4;     // refinement vertices per free PL arc
  long denominator = 64;   // rational grid: coordinates are multiples of 1/denominator
};

namespace detail {

// nb distinct rationals with denominator den, strictly inside (lo, hi), sorted
inline std::vector<Rat> random_grid(Rng& rng, int nb, long den, const Rat& lo,
                                    const Rat& hi) {
  long nlo = static_cast<long>(floor_rat(lo * den).convert_to<long>()) + 1;
  long nhi = static_cast<long>(ceil_rat(hi * den).convert_to<long>()) - 1;
  if (nhi - nlo + 1 < nb)
    throw ActionError("random_action: denominator too small for the breakpoint count");
  std::vector<long> nums;
  while (static_cast<int>(nums.size()) < nb) {
    long v = rng.uniform(nlo, nhi);
    if (std::find(nums.begin(), nums.end(), v) == nums.end()) nums.push_back(v);
  }
  std::sort(nums.begin(), nums.end());
  std::vector<Rat> out;
  out.reserve(nums.size());
  for (long v : nums) out.emplace_back(v, den);
  return out;
}

// random PL involution lift with rot~ = 1/2: the arc [1/3, 1] -> [1, 4/3] is a
// random increasing PL interpolation and [0, 1/3] carries its reflection, so
// the square is exactly the unit translation
inline PlMap random_involution(Rng& rng, const RandomActionParams& par) {
  std::vector<Rat> xs = random_grid(rng, par.breakpoints, par.denominator, Rat(1, 3), Rat(1));
  std::vector<Rat> ys = random_grid(rng, par.breakpoints, 3 * par.denominator, Rat(1), Rat(4, 3));
  std::vector<std::pair<Rat, Rat>> pts;
  pts.emplace_back(Rat(0), Rat(1, 3));
  for (int i = 0; i < par.breakpoints; ++i) pts.emplace_back(ys[i] - 1, xs[i]);
  pts.emplace_back(Rat(1, 3), Rat(1));
  for (int i = 0; i < par.breakpoints; ++i) pts.emplace_back(xs[i], ys[i]);
  return PlMap{std::move(pts)};
}

// random degree-one PL lift fixing 0, used as an exact conjugator
inline PlMap random_conjugator(Rng& rng, const RandomActionParams& par) {
  std::vector<Rat> us = random_grid(rng, par.breakpoints, par.denominator, Rat(0), Rat(1));
  std::vector<Rat> ws = random_grid(rng, par.breakpoints, par.denominator, Rat(0), Rat(1));
  std::vector<std::pair<Rat, Rat>> pts;
  pts.emplace_back(Rat(0), Rat(0));
  for (int i = 0; i < par.breakpoints; ++i) pts.emplace_back(us[i], ws[i]);
  return PlMap{std::move(pts)};
}

}  // namespace detail

// Seed-deterministic exact-PL action with the requested rotation triple.
// (1/2,1/3,0): b is the rigid rotation by 1/3 and a a random PL involution
// with a(1/3) = 1. (1/2,2/3,1/5): the degree-5 lift of the PL model action,
// conjugated by a random rational PL homeomorphism, which stays inside the
// semi-conjugacy class. The triple is re-verified by detection before return.
inline CircleAction random_action(const RotationTriple& target, uint64_t seed,
                                  const RandomActionParams& params = {}) {
  if (params.breakpoints < 1) throw ActionError("random_action: need breakpoints >= 1");
  Rng rng(seed);
  std::optional<CircleAction> act;
  if (target == RotationTriple::from_exact(Rat(1, 2), Rat(1, 3), Rat(0)))
    act.emplace(Lift::pl(detail::random_involution(rng, params)),
                Lift::rotation(Rat(1, 3)), Rat(1, 2), Rat(1, 3));
  else if (target == RotationTriple::from_exact(Rat(1, 2), Rat(2, 3), Rat(1, 5))) {
    CircleAction base = k_fold_lift(fuchsian_pl_model(), 5);
    Lift h = Lift::pl(detail::random_conjugator(rng, params));
    Lift hi = lift_inverse(h);
    act.emplace(lift_compose(h, lift_compose(base.lift_a(), hi)),
                lift_compose(h, lift_compose(base.lift_b(), hi)), base.rot_a(),
                base.rot_b());
  } else {
    throw UnsupportedTripleError("random_action: triple is not one of the two targets");
  }
  if (!(rotation_triple(*act, 30, 100) == target))
    throw ActionError("random_action: constructed action missed the target triple");
  return *act;
}

}  // namespace rotkit
