#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "rotkit/pl_map.hpp"
#include "rotkit/rational.hpp"

namespace testutil {

using rotkit::Int;
using rotkit::PlMap;
using rotkit::Rat;

// std::uniform_int_distribution is not pinned across standard libraries, so
// tests reduce raw mt19937_64 output themselves
struct TestRng {
  std::mt19937_64 eng;

  explicit TestRng(uint64_t seed) : eng(seed) {}

  uint64_t next() { return eng(); }

  long uniform(long lo, long hi) {  // inclusive
    return lo + static_cast<long>(next() % static_cast<uint64_t>(hi - lo + 1));
  }

  double unit_double() { return (next() >> 11) * 0x1.0p-53; }

  // rational k/den with k in [lo_num, hi_num]
  Rat rat(long den, long lo_num, long hi_num) { return Rat(uniform(lo_num, hi_num), den); }
};

// n distinct sorted rationals in (lo, hi), all with denominator den
inline std::vector<Rat> distinct_sorted_rats(TestRng& rng, int n, long den, const Rat& lo,
                                             const Rat& hi) {
  std::set<Rat> vals;
  int guard = 0;
  while (static_cast<int>(vals.size()) < n) {
    Rat r(rng.uniform(1, den - 1), den);
    Rat x = lo + r * (hi - lo);
    if (x > lo && x < hi) vals.insert(x);
    if (++guard > 100000) throw std::runtime_error("distinct_sorted_rats: exhausted");
  }
  return {vals.begin(), vals.end()};
}

// generic degree-one PL circle lift with values in [0,1) at the breakpoints
inline PlMap random_pl_lift(TestRng& rng, int nbreaks, long den) {
  std::vector<Rat> xs = distinct_sorted_rats(rng, nbreaks, den, Rat(-1, den), Rat(1));
  std::vector<Rat> ys = distinct_sorted_rats(rng, nbreaks, den, Rat(-1, den), Rat(1));
  std::vector<std::pair<Rat, Rat>> pts;
  for (int i = 0; i < nbreaks; ++i) pts.emplace_back(rotkit::frac(xs[i]), ys[i]);
  return PlMap(std::move(pts));
}

// PL lift with a planted periodic orbit: F^q(x0) = x0 + p, gcd(p, q) = 1.
// Returns the map and the planted point x0.
struct PlantedLift {
  PlMap map;
  Rat x0;
  long p;
  long q;
};

inline PlantedLift plant_periodic_lift(TestRng& rng, long p, long q, long den, int extra) {
  std::vector<Rat> t = distinct_sorted_rats(rng, static_cast<int>(q), den, Rat(-1, den), Rat(1));
  std::vector<std::pair<Rat, Rat>> pts;
  for (long i = 0; i < q; ++i) {
    long j = i + p;
    long carry = 0;
    while (j >= q) {
      j -= q;
      ++carry;
    }
    pts.emplace_back(t[i], t[j] + carry);
  }
  // refine with extra non-orbit breakpoints, preserving the orbit values
  PlMap base{std::vector<std::pair<Rat, Rat>>(pts)};
  for (int e = 0; e < extra; ++e) {
    Rat x(rng.uniform(0, 4 * den - 1), 4 * den);
    bool dup = false;
    for (auto& [bx, by] : pts)
      if (bx == x) dup = true;
    if (dup) continue;
    pts.emplace_back(x, base(x));
  }
  std::sort(pts.begin(), pts.end());
  return {PlMap(std::move(pts)), t[0], p, q};
}

}  // namespace testutil
