#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "rotkit/pl_map.hpp"

using namespace rotkit;
using testutil::TestRng;

static PlMap sample_map() {
  return PlMap({{Rat(0), Rat(1, 4)}, {Rat(1, 2), Rat(3, 4)}});
}

TEST_CASE("evaluation interpolates breakpoints") {
  PlMap f = sample_map();
  CHECK(f(Rat(0)) == Rat(1, 4));
  CHECK(f(Rat(1, 4)) == Rat(1, 2));
  CHECK(f(Rat(1, 2)) == Rat(3, 4));
  CHECK(f(Rat(3, 4)) == Rat(1));
  CHECK(f(Rat(1)) == Rat(5, 4));
  CHECK(f(Rat(-1, 2)) == Rat(-1, 4));
}

TEST_CASE("rotation and identity") {
  PlMap id = PlMap::identity();
  CHECK(id(Rat(5, 7)) == Rat(5, 7));
  PlMap r = PlMap::rotation(Rat(1, 3));
  CHECK(r(Rat(5, 7)) == Rat(5, 7) + Rat(1, 3));
  CHECK(pl_translation_offset(r) == Rat(1, 3));
  CHECK(pl_translation_offset(sample_map()) == Rat(1, 4));
  PlMap bent({{Rat(0), Rat(1, 8)}, {Rat(1, 2), Rat(3, 4)}});
  CHECK(!pl_translation_offset(bent).has_value());
}

TEST_CASE("commutes with unit translation") {
  TestRng rng(11);
  PlMap f = testutil::random_pl_lift(rng, 7, 64);
  for (int i = 0; i < 20; ++i) {
    Rat x = rng.rat(97, -200, 200);
    CHECK(f(x + 1) == f(x) + 1);
  }
}

TEST_CASE("strictly increasing") {
  TestRng rng(12);
  PlMap f = testutil::random_pl_lift(rng, 9, 128);
  Rat prev = f(Rat(-1, 7));
  for (int i = 1; i <= 40; ++i) {
    Rat x = Rat(-1, 7) + Rat(i, 17);
    Rat y = f(x);
    CHECK(y > prev);
    prev = y;
  }
}

TEST_CASE("validation rejects malformed breakpoints") {
  CHECK_THROWS_AS(PlMap(std::vector<std::pair<Rat, Rat>>{}), MalformedError);
  CHECK_THROWS_AS(PlMap({{Rat(1, 2), Rat(0)}, {Rat(1, 2), Rat(1, 4)}}), MalformedError);
  CHECK_THROWS_AS(PlMap({{Rat(0), Rat(1, 2)}, {Rat(1, 2), Rat(1, 4)}}), MalformedError);
  CHECK_THROWS_AS(PlMap({{Rat(0), Rat(0)}, {Rat(1, 2), Rat(3, 2)}}), MalformedError);
  CHECK_THROWS_AS(PlMap({{Rat(3, 2), Rat(0)}}), MalformedError);
}

TEST_CASE("inverse round trip") {
  TestRng rng(13);
  PlMap f = testutil::random_pl_lift(rng, 8, 64);
  PlMap g = pl_inverse(f);
  for (int i = 0; i < 25; ++i) {
    Rat x = rng.rat(101, -150, 150);
    CHECK(g(f(x)) == x);
    CHECK(f(g(x)) == x);
    CHECK(f.inverse_eval(f(x)) == x);
  }
  CHECK(pl_equal(pl_compose(f, g), PlMap::identity()));
  CHECK(pl_equal(pl_compose(g, f), PlMap::identity()));
}

TEST_CASE("composition matches pointwise evaluation") {
  TestRng rng(14);
  PlMap f = testutil::random_pl_lift(rng, 6, 32);
  PlMap g = testutil::random_pl_lift(rng, 5, 48);
  PlMap h = pl_compose(f, g);
  for (int i = 0; i < 40; ++i) {
    Rat x = rng.rat(113, -200, 200);
    CHECK(h(x) == f(g(x)));
  }
  PlMap r = PlMap::rotation(Rat(2, 5));
  CHECK(pl_translation_offset(pl_compose(r, r)).value() == Rat(4, 5));
}

TEST_CASE("displacement range brackets observed displacements") {
  TestRng rng(15);
  PlMap f = testutil::random_pl_lift(rng, 7, 64);
  auto [mn, mx] = pl_displacement_range(f);
  CHECK(mn <= mx);
  for (int i = 0; i < 60; ++i) {
    Rat x(i, 60);
    Rat d = f(x) - x;
    CHECK(d >= mn);
    CHECK(d <= mx);
  }
}

TEST_CASE("fixed points of a translation equation") {
  PlMap f = sample_map();
  // F(x) - x is 1/4 at 0, 1/4 at 1/2: constant 1/4, so F(x) = x has no roots
  CHECK(pl_fixed_points(f, Rat(0)).empty());
  CHECK(pl_fixed_points(f, Rat(1, 4)).size() == 2);  // whole circle, breakpoints reported

  // plant a crossing: F below identity on one side, above on the other
  PlMap g({{Rat(0), Rat(1, 8)}, {Rat(1, 4), Rat(1, 4)}, {Rat(1, 2), Rat(9, 16)}});
  auto roots = pl_fixed_points(g, Rat(0));
  REQUIRE(!roots.empty());
  for (const Rat& r : roots) CHECK(g(r) == r);
  CHECK(std::find(roots.begin(), roots.end(), Rat(1, 4)) != roots.end());
}

TEST_CASE("planted periodic orbit is recovered by iteration") {
  TestRng rng(16);
  for (auto [p, q] : std::vector<std::pair<long, long>>{{1, 1}, {1, 2}, {2, 5}, {3, 7}, {5, 8}}) {
    auto planted = testutil::plant_periodic_lift(rng, p, q, 64, 4);
    Rat x = planted.x0;
    for (long i = 0; i < q; ++i) x = planted.map(x);
    CHECK(x == planted.x0 + p);
  }
}

TEST_CASE("fixed point scan finds planted periodic points") {
  TestRng rng(17);
  auto planted = testutil::plant_periodic_lift(rng, 2, 5, 64, 3);
  PlMap g = PlMap::identity();
  for (int i = 0; i < 5; ++i) g = pl_compose(planted.map, g);
  auto roots = pl_fixed_points(g, Rat(2));
  REQUIRE(!roots.empty());
  bool found = false;
  for (const Rat& r : roots)
    if (r == planted.x0) found = true;
  CHECK(found);
  for (const Rat& r : roots) CHECK(g(r) == r + 2);
}

TEST_CASE("tangential roots at breakpoints are reported") {
  // displacement touches zero at x = 1/4 without sign change
  PlMap g({{Rat(0), Rat(1, 8)}, {Rat(1, 4), Rat(1, 4)}, {Rat(1, 2), Rat(5, 8)}});
  auto roots = pl_fixed_points(g, Rat(0));
  REQUIRE(roots.size() == 1);
  CHECK(roots[0] == Rat(1, 4));
}
