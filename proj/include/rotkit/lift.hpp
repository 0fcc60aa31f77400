#pragma once

#include <cmath>
#include <memory>
#include <variant>
#include <vector>

#include "rotkit/mobius.hpp"
#include "rotkit/pl_map.hpp"
#include "rotkit/rational.hpp"

namespace rotkit {

struct InexactError : Error {
  using Error::Error;
};

struct Lift;

struct RotationLift {
  Rat t;
};

struct PlLift {
  PlMap map;
};

// F(x) = base_lift(x) + sheet
struct MobiusLift {
  Mobius map;
  long sheet = 0;
};

// F(x) = (inner(fold * x) + offset) / fold
struct RescaleLift {
  std::shared_ptr<const Lift> inner;
  long fold = 1;
  long offset = 0;
};

// F = factors[0] after factors[1] after ...
struct CompositeLift {
  std::vector<Lift> factors;
};

struct Lift {
  std::variant<RotationLift, PlLift, MobiusLift, RescaleLift, CompositeLift> node;

  static Lift identity() { return rotation(Rat(0)); }
  static Lift rotation(Rat t) { return Lift{RotationLift{std::move(t)}}; }
  static Lift pl(PlMap m) { return Lift{PlLift{std::move(m)}}; }
  static Lift mobius(Mobius m, long sheet) { return Lift{MobiusLift{m, sheet}}; }
  static Lift rescale(Lift inner, long fold, long offset) {
    if (fold < 1) throw MalformedError("rescale: fold must be >= 1");
    return Lift{RescaleLift{std::make_shared<Lift>(std::move(inner)), fold, offset}};
  }
  static Lift composite(std::vector<Lift> factors) {
    if (factors.empty()) return identity();
    if (factors.size() == 1) return factors.front();
    return Lift{CompositeLift{std::move(factors)}};
  }
};

namespace detail {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace detail

inline bool lift_is_exact(const Lift& f) {
  return std::visit(detail::overloaded{
                        [](const RotationLift&) { return true; },
                        [](const PlLift&) { return true; },
                        [](const MobiusLift&) { return false; },
                        [](const RescaleLift& r) { return lift_is_exact(*r.inner); },
                        [](const CompositeLift& c) {
                          for (const Lift& g : c.factors)
                            if (!lift_is_exact(g)) return false;
                          return true;
                        },
                    },
                    f.node);
}

inline Rat lift_eval_exact(const Lift& f, const Rat& x) {
  return std::visit(
      detail::overloaded{
          [&](const RotationLift& r) -> Rat { return x + r.t; },
          [&](const PlLift& p) -> Rat { return p.map(x); },
          [&](const MobiusLift&) -> Rat {
            throw InexactError("exact evaluation of a mobius lift");
          },
          [&](const RescaleLift& r) -> Rat {
            return (lift_eval_exact(*r.inner, x * r.fold) + r.offset) / r.fold;
          },
          [&](const CompositeLift& c) -> Rat {
            Rat y = x;
            for (auto it = c.factors.rbegin(); it != c.factors.rend(); ++it)
              y = lift_eval_exact(*it, y);
            return y;
          },
      },
      f.node);
}

inline double lift_eval(const Lift& f, double x) {
  return std::visit(detail::overloaded{
                        [&](const RotationLift& r) { return x + to_double(r.t); },
                        [&](const PlLift& p) { return to_double(p.map(rat_from_double(x))); },
                        [&](const MobiusLift& m) { return m.map.base_lift(x) + m.sheet; },
                        [&](const RescaleLift& r) {
                          return (lift_eval(*r.inner, x * r.fold) + r.offset) / r.fold;
                        },
                        [&](const CompositeLift& c) {
                          double y = x;
                          for (auto it = c.factors.rbegin(); it != c.factors.rend(); ++it)
                            y = lift_eval(*it, y);
                          return y;
                        },
                    },
                    f.node);
}

inline PlMap lift_to_pl(const Lift& f) {
  return std::visit(
      detail::overloaded{
          [&](const RotationLift& r) { return PlMap::rotation(r.t); },
          [&](const PlLift& p) { return p.map; },
          [&](const MobiusLift&) -> PlMap {
            throw InexactError("mobius lift has no exact piecewise-linear form");
          },
          [&](const RescaleLift& r) {
            PlMap inner = lift_to_pl(*r.inner);
            std::vector<std::pair<Rat, Rat>> pts;
            pts.reserve(inner.pts.size() * r.fold);
            for (long rep = 0; rep < r.fold; ++rep)
              for (const auto& [x, y] : inner.pts)
                pts.emplace_back((x + rep) / r.fold, (y + rep + r.offset) / r.fold);
            return PlMap(std::move(pts));
          },
          [&](const CompositeLift& c) {
            PlMap acc = PlMap::identity();
            for (auto it = c.factors.rbegin(); it != c.factors.rend(); ++it)
              acc = pl_compose(lift_to_pl(*it), acc);
            return acc;
          },
      },
      f.node);
}

inline Lift lift_inverse(const Lift& f);
inline Lift lift_compose(const Lift& f, const Lift& g);

inline Lift lift_translate(const Lift& f, const Rat& c) {
  if (c == 0) return f;
  return std::visit(detail::overloaded{
                        [&](const RotationLift& r) { return Lift::rotation(r.t + c); },
                        [&](const PlLift& p) { return Lift::pl(pl_translate(p.map, c)); },
                        [&](const MobiusLift& m) {
                          if (!is_integer(c))
                            throw InexactError("mobius lift translated by a non-integer");
                          return Lift::mobius(m.map, m.sheet + c.convert_to<long>());
                        },
                        [&](const RescaleLift&) { return lift_compose(Lift::rotation(c), f); },
                        [&](const CompositeLift&) { return lift_compose(Lift::rotation(c), f); },
                    },
                    f.node);
}

inline Lift lift_inverse(const Lift& f) {
  return std::visit(
      detail::overloaded{
          [&](const RotationLift& r) { return Lift::rotation(-r.t); },
          [&](const PlLift& p) { return Lift::pl(pl_inverse(p.map)); },
          [&](const MobiusLift& m) {
            Mobius mi = m.map.inverse();
            double delta = mi.base_lift(0.1875) - m.map.base_lift_inv(0.1875);
            long d = std::lround(delta);
            if (std::fabs(delta - d) > 1e-9)
              throw MalformedError("mobius inverse: sheet resolution failed");
            return Lift::mobius(mi, -m.sheet - d);
          },
          [&](const RescaleLift& r) {
            Lift inner = lift_compose(lift_inverse(*r.inner), Lift::rotation(Rat(-r.offset)));
            return Lift::rescale(std::move(inner), r.fold, 0);
          },
          [&](const CompositeLift& c) {
            std::vector<Lift> inv;
            inv.reserve(c.factors.size());
            for (auto it = c.factors.rbegin(); it != c.factors.rend(); ++it)
              inv.push_back(lift_inverse(*it));
            return Lift::composite(std::move(inv));
          },
      },
      f.node);
}

// composition prefers closed forms: rotations add, exact pairs flatten to a
// piecewise-linear map, mobius pairs multiply with a sheet correction;
// anything else becomes an explicit composite
inline Lift lift_compose(const Lift& f, const Lift& g) {
  if (const auto* rf = std::get_if<RotationLift>(&f.node)) {
    if (rf->t == 0) return g;
    if (const auto* rg = std::get_if<RotationLift>(&g.node))
      return Lift::rotation(rf->t + rg->t);
  }
  if (const auto* rg = std::get_if<RotationLift>(&g.node)) {
    if (rg->t == 0) return f;
  }
  if (const auto* mf = std::get_if<MobiusLift>(&f.node)) {
    if (const auto* mg = std::get_if<MobiusLift>(&g.node)) {
      const Mobius &a = mf->map, &b = mg->map;
      Mobius prod(a.a * b.a + a.b * b.c, a.a * b.b + a.b * b.d, a.c * b.a + a.d * b.c,
                  a.c * b.b + a.d * b.d);
      double x = 0.1875;
      double delta = a.base_lift(b.base_lift(x)) - prod.base_lift(x);
      long d = std::lround(delta);
      if (std::fabs(delta - d) > 1e-9)
        throw MalformedError("mobius composition: sheet resolution failed");
      return Lift::mobius(prod, mf->sheet + mg->sheet + d);
    }
  }
  if (lift_is_exact(f) && lift_is_exact(g))
    return Lift::pl(pl_compose(lift_to_pl(f), lift_to_pl(g)));
  std::vector<Lift> factors;
  auto splice = [&](const Lift& h) {
    if (const auto* c = std::get_if<CompositeLift>(&h.node))
      factors.insert(factors.end(), c->factors.begin(), c->factors.end());
    else
      factors.push_back(h);
  };
  splice(f);
  splice(g);
  return Lift::composite(std::move(factors));
}

inline Lift lift_pow(const Lift& f, long n) {
  if (n == 0) return Lift::identity();
  Lift base = n < 0 ? lift_inverse(f) : f;
  long m = n < 0 ? -n : n;
  Lift acc = base;
  for (long i = 1; i < m; ++i) acc = lift_compose(base, acc);
  return acc;
}

}  // namespace rotkit
