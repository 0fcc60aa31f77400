#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "rotkit/lift.hpp"

namespace rotkit {

struct Enclosure {
  Rat lo, hi;

  bool contains(const Rat& v) const { return lo <= v && v <= hi; }
  Rat width() const { return hi - lo; }
};

// Sound enclosure of the translation number from n iterations, sampled at
// x = j/samples and intersected. Exact lifts use outward-rounded dyadic
// iteration (escalating precision keeps the rounding envelope below 1/n),
// giving width <= 2/n. Inexact lifts iterate doubles with a roundoff margin.
inline Enclosure translation_number_enclosure(const Lift& f, long n, int samples = 1) {
  if (n < 1) throw MalformedError("enclosure: n must be >= 1");
  if (samples < 1) samples = 1;
  long steps = n + 1;
  bool first = true;
  Rat best_lo, best_hi;
  auto merge = [&](const Rat& lo, const Rat& hi) {
    if (first) {
      best_lo = lo;
      best_hi = hi;
      first = false;
    } else {
      if (lo > best_lo) best_lo = lo;
      if (hi < best_hi) best_hi = hi;
    }
  };
  if (lift_is_exact(f)) {
    PlMap p = lift_to_pl(f);
    Rat cap(1, n);
    for (int j = 0; j < samples; ++j) {
      Rat x(j, samples);
      bool done = false;
      for (unsigned bits : {192u, 768u, 3072u}) {
        Rat lo = x, hi = x;
        bool ok = true;
        for (long i = 0; i < steps; ++i) {
          lo = dyadic_floor(p(lo), bits);
          hi = dyadic_ceil(p(hi), bits);
          if (hi - lo > cap) {
            ok = false;
            break;
          }
        }
        if (ok) {
          merge((lo - x - 1) / steps, (hi - x + 1) / steps);
          done = true;
          break;
        }
      }
      if (!done) {
        Rat y = x;
        for (long i = 0; i < steps; ++i) y = p(y);
        merge((y - x - 1) / steps, (y - x + 1) / steps);
      }
    }
  } else {
    for (int j = 0; j < samples; ++j) {
      double x = static_cast<double>(j) / samples;
      double y = x;
      for (long i = 0; i < steps; ++i) y = lift_eval(f, y);
      double slop = 1e-12 * (1.0 + std::fabs(y));
      merge(rat_from_double((y - x - 1) / steps - slop),
            rat_from_double((y - x + 1) / steps + slop));
    }
  }
  if (best_lo > best_hi) throw Error("enclosure: sample intersection is empty");
  return Enclosure{best_lo, best_hi};
}

struct DetectedRotation {
  Rat value;         // rotation number p/q mod 1, reduced
  long period = 0;   // q with F^q(x) = x + p at the witness
  long translation = 0;
  Rat witness;       // periodic point (exact lifts: exact)
  double witness_approx = 0;
  double residual = 0;
  bool exact = false;
};

namespace detail {

inline std::optional<DetectedRotation> detect_exact(const Lift& f, long q_max) {
  PlMap p = lift_to_pl(f);
  PlMap g = PlMap::identity();
  for (long q = 1; q <= q_max; ++q) {
    g = pl_compose(p, g);
    auto [mn, mx] = pl_displacement_range(g);
    for (Int t = ceil_rat(mn); t <= floor_rat(mx); ++t) {
      auto roots = pl_fixed_points(g, Rat(t));
      if (roots.empty()) continue;
      DetectedRotation d;
      d.translation = t.convert_to<long>();
      d.period = q;
      d.value = mod1(Rat(d.translation, q));
      d.witness = roots.front();
      d.witness_approx = to_double(d.witness);
      d.residual = 0;
      d.exact = true;
      return d;
    }
  }
  return std::nullopt;
}

inline std::optional<DetectedRotation> detect_float(const Lift& f, long q_max,
                                                    double threshold) {
  constexpr int kGrid = 2048;
  std::vector<double> start(kGrid), cur(kGrid);
  for (int i = 0; i < kGrid; ++i) start[i] = cur[i] = static_cast<double>(i) / kGrid;
  auto iterate_q = [&](double x, long q) {
    for (long i = 0; i < q; ++i) x = lift_eval(f, x);
    return x;
  };
  for (long q = 1; q <= q_max; ++q) {
    for (double& x : cur) x = lift_eval(f, x);
    double mn = std::numeric_limits<double>::infinity(), mx = -mn;
    for (int i = 0; i < kGrid; ++i) {
      double d = cur[i] - start[i];
      mn = std::min(mn, d);
      mx = std::max(mx, d);
    }
    for (long t = static_cast<long>(std::ceil(mn - 1e-9));
         t <= static_cast<long>(std::floor(mx + 1e-9)); ++t) {
      auto g_at = [&](double x) { return iterate_q(x, q) - x - t; };
      double witness = std::numeric_limits<double>::quiet_NaN();
      double best = std::numeric_limits<double>::infinity();
      int best_i = 0;
      for (int i = 0; i < kGrid; ++i) {
        double gi = cur[i] - start[i] - t;
        double gj = cur[(i + 1) % kGrid] - start[(i + 1) % kGrid] - t;
        if (std::fabs(gi) < best) {
          best = std::fabs(gi);
          best_i = i;
        }
        if (gi == 0) {  // exact zero on the grid (e.g. a fixed sample point)
          witness = start[i];
          break;
        }
        if ((gi < 0) != (gj < 0)) {
          double lo = start[i], hi = start[i] + 1.0 / kGrid;
          double glo = gi;
          for (int it = 0; it < 80 && hi - lo > 1e-16; ++it) {
            double mid = (lo + hi) / 2, gm = g_at(mid);
            if (gm == 0) {
              lo = hi = mid;
              break;
            }
            if ((gm < 0) == (glo < 0)) {
              lo = mid;
              glo = gm;
            } else {
              hi = mid;
            }
          }
          witness = (lo + hi) / 2;
          break;
        }
      }
      if (std::isnan(witness)) {
        // no sign change: look for a tangency around the closest sample
        double lo = start[best_i] - 1.0 / kGrid, hi = start[best_i] + 1.0 / kGrid;
        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
          double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
          if (std::fabs(g_at(m1)) < std::fabs(g_at(m2)))
            hi = m2;
          else
            lo = m1;
        }
        witness = (lo + hi) / 2;
      }
      double res = std::fabs(g_at(witness));
      if (res <= threshold) {
        DetectedRotation d;
        d.translation = t;
        d.period = q;
        d.value = mod1(Rat(t, q));
        d.witness = rat_from_double(witness - std::floor(witness));
        d.witness_approx = witness - std::floor(witness);
        d.residual = res;
        d.exact = false;
        return d;
      }
    }
  }
  return std::nullopt;
}

}  // namespace detail

// first q <= q_max admitting a periodic point: F^q(x) = x + p. Exact lifts
// are scanned exactly; inexact lifts accept residuals below threshold.
inline std::optional<DetectedRotation> detect_rational_rotation(const Lift& f, long q_max,
                                                                double threshold = 1e-9) {
  if (q_max < 1) throw MalformedError("detect: q_max must be >= 1");
  if (lift_is_exact(f)) return detail::detect_exact(f, q_max);
  return detail::detect_float(f, q_max, threshold);
}

}  // namespace rotkit
