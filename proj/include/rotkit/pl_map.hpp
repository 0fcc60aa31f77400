#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "rotkit/rational.hpp"

namespace rotkit {

// Piecewise-linear increasing map F: R -> R with F(x+1) = F(x) + 1,
// stored as breakpoints (x_i, F(x_i)) with x_i strictly increasing in [0,1).
// Between breakpoints F interpolates linearly; the last segment wraps to
// (x_0 + 1, y_0 + 1).
struct PlMap {
  std::vector<std::pair<Rat, Rat>> pts;

  PlMap() = default;
  explicit PlMap(std::vector<std::pair<Rat, Rat>> p) : pts(std::move(p)) { validate(); }

  static PlMap identity() { return rotation(Rat(0)); }

  static PlMap rotation(const Rat& t) {
    PlMap m;
    m.pts.emplace_back(Rat(0), t);
    return m;
  }

  void validate() const {
    if (pts.empty()) throw MalformedError("pl: no breakpoints");
    for (size_t i = 0; i < pts.size(); ++i) {
      if (pts[i].first < 0 || pts[i].first >= 1)
        throw MalformedError("pl: breakpoint x outside [0,1)");
      if (i > 0) {
        if (pts[i].first <= pts[i - 1].first)
          throw MalformedError("pl: breakpoint x not strictly increasing");
        if (pts[i].second <= pts[i - 1].second)
          throw MalformedError("pl: breakpoint y not strictly increasing");
      }
    }
    if (pts.size() > 1 && pts.back().second >= pts.front().second + 1)
      throw MalformedError("pl: y range exceeds one period");
  }

  Rat operator()(const Rat& x) const {
    Rat t = frac(x);
    Rat shift = x - t;
    size_t n = pts.size();
    // last i with x_i <= t, or wrap to the segment ending at (x_0, y_0)
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
    if (x1 == x0) return y0 + shift;
    return y0 + (t - x0) * (y1 - y0) / (x1 - x0) + shift;
  }

  // solve F(x) = y
  Rat inverse_eval(const Rat& y) const {
    size_t n = pts.size();
    Rat k(floor_rat(y - pts[0].second));
    // y in [y_0 + k, y_0 + k + 1); find last i with y_i + k <= y
    Rat yy = y - k;
    size_t lo = 0, hi = n;
    while (lo < hi) {
      size_t mid = (lo + hi) / 2;
      if (pts[mid].second <= yy)
        lo = mid + 1;
      else
        hi = mid;
    }
    if (lo == 0) throw MalformedError("pl: inverse_eval bracket");
    Rat x0 = pts[lo - 1].first, y0 = pts[lo - 1].second;
    Rat x1, y1;
    if (lo == n) {
      x1 = pts[0].first + 1;
      y1 = pts[0].second + 1;
    } else {
      x1 = pts[lo].first;
      y1 = pts[lo].second;
    }
    if (y1 == y0) return x0 + k;
    return x0 + (yy - y0) * (x1 - x0) / (y1 - y0) + k;
  }
};

inline PlMap pl_inverse(const PlMap& f) {
  std::vector<std::pair<Rat, Rat>> pts;
  pts.reserve(f.pts.size());
  for (const auto& [x, y] : f.pts) {
    Rat m(floor_rat(y));
    pts.emplace_back(y - m, x - m);
  }
  std::sort(pts.begin(), pts.end());
  return PlMap(std::move(pts));
}

inline PlMap pl_translate(const PlMap& f, const Rat& c) {
  std::vector<std::pair<Rat, Rat>> pts = f.pts;
  for (auto& [x, y] : pts) y += c;
  return PlMap(std::move(pts));
}

// f after g
inline PlMap pl_compose(const PlMap& f, const PlMap& g) {
  std::vector<Rat> xs;
  xs.reserve(f.pts.size() + g.pts.size());
  for (const auto& [x, y] : g.pts) xs.push_back(x);
  for (const auto& [x, y] : f.pts) xs.push_back(frac(g.inverse_eval(x)));
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<std::pair<Rat, Rat>> pts;
  pts.reserve(xs.size());
  for (const Rat& x : xs) pts.emplace_back(x, f(g(x)));
  return PlMap(std::move(pts));
}

// c with F = x + c, if F is a translation
inline std::optional<Rat> pl_translation_offset(const PlMap& f) {
  Rat c = f.pts[0].second - f.pts[0].first;
  for (const auto& [x, y] : f.pts)
    if (y - x != c) return std::nullopt;
  return c;
}

// min and max of F(x) - x (attained at breakpoints)
inline std::pair<Rat, Rat> pl_displacement_range(const PlMap& f) {
  Rat mn = f.pts[0].second - f.pts[0].first;
  Rat mx = mn;
  for (const auto& [x, y] : f.pts) {
    Rat d = y - x;
    if (d < mn) mn = d;
    if (d > mx) mx = d;
  }
  return {mn, mx};
}

// all x in [0,1) with F(x) = x + p; on segments where F - x - p vanishes
// identically only the breakpoints are reported
inline std::vector<Rat> pl_fixed_points(const PlMap& f, const Rat& p) {
  auto [mn, mx] = pl_displacement_range(f);
  std::vector<Rat> out;
  if (p < mn || p > mx) return out;
  size_t n = f.pts.size();
  for (size_t i = 0; i < n; ++i) {
    Rat x0 = f.pts[i].first;
    Rat d0 = f.pts[i].second - x0 - p;
    Rat x1, d1;
    if (i + 1 == n) {
      x1 = f.pts[0].first + 1;
      d1 = f.pts[0].second - f.pts[0].first - p;
    } else {
      x1 = f.pts[i + 1].first;
      d1 = f.pts[i + 1].second - x1 - p;
    }
    if (d0 == 0) out.push_back(x0);
    if ((d0 < 0 && d1 > 0) || (d0 > 0 && d1 < 0)) {
      Rat xs = x0 - d0 * (x1 - x0) / (d1 - d0);
      out.push_back(frac(xs));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// maps agree on the union of their breakpoints iff they agree everywhere
inline bool pl_equal(const PlMap& f, const PlMap& g) {
  for (const auto& [x, y] : f.pts)
    if (g(x) != y) return false;
  for (const auto& [x, y] : g.pts)
    if (f(x) != y) return false;
  return true;
}

}  // namespace rotkit
