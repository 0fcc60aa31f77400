#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "helpers.hpp"
#include "rotkit/enclosure.hpp"
#include "rotkit/lift.hpp"

using namespace rotkit;
using testutil::TestRng;

TEST_CASE("exactness flags") {
  CHECK(lift_is_exact(Lift::rotation(Rat(1, 3))));
  CHECK(lift_is_exact(Lift::pl(PlMap::identity())));
  CHECK(!lift_is_exact(Lift::mobius(Mobius(0, -1, 1, 0), 1)));
  CHECK(lift_is_exact(Lift::rescale(Lift::rotation(Rat(1, 2)), 5, 2)));
  CHECK(!lift_is_exact(
      Lift::composite({Lift::rotation(Rat(1, 3)), Lift::mobius(Mobius(1, 1, -1, 0), 0)})));
  CHECK_THROWS_AS(lift_eval_exact(Lift::mobius(Mobius(0, -1, 1, 0), 1), Rat(0)), InexactError);
  CHECK_THROWS_AS(lift_to_pl(Lift::mobius(Mobius(0, -1, 1, 0), 1)), InexactError);
}

TEST_CASE("rescale evaluates the covering formula") {
  TestRng rng(41);
  PlMap base = testutil::random_pl_lift(rng, 6, 64);
  Lift inner = Lift::pl(base);
  Lift lifted = Lift::rescale(inner, 5, 2);
  for (int i = 0; i < 30; ++i) {
    Rat x = rng.rat(199, -300, 300);
    CHECK(lift_eval_exact(lifted, x) == (base(5 * x) + 2) / 5);
  }
  CHECK(lift_eval_exact(lifted, Rat(0)) == (base(Rat(0)) + 2) / 5);
  // the flattened form agrees
  PlMap flat = lift_to_pl(lifted);
  for (int i = 0; i < 30; ++i) {
    Rat x = rng.rat(211, -300, 300);
    CHECK(flat(x) == lift_eval_exact(lifted, x));
  }
}

TEST_CASE("composition flattens exact pairs") {
  TestRng rng(42);
  Lift f = Lift::pl(testutil::random_pl_lift(rng, 5, 32));
  Lift g = Lift::pl(testutil::random_pl_lift(rng, 7, 32));
  Lift h = lift_compose(f, g);
  CHECK(std::holds_alternative<PlLift>(h.node));
  for (int i = 0; i < 30; ++i) {
    Rat x = rng.rat(173, -200, 200);
    CHECK(lift_eval_exact(h, x) == lift_eval_exact(f, lift_eval_exact(g, x)));
  }
  Lift rr = lift_compose(Lift::rotation(Rat(1, 3)), Lift::rotation(Rat(1, 4)));
  CHECK(std::holds_alternative<RotationLift>(rr.node));
  CHECK(lift_eval_exact(rr, Rat(0)) == Rat(7, 12));
}

TEST_CASE("mobius compositions stay a single matrix") {
  Lift a = Lift::mobius(Mobius(0, -1, 1, 0), 1);
  Lift b = Lift::mobius(Mobius(1, 1, -1, 0), 0);
  Lift ab = lift_compose(a, b);
  CHECK(std::holds_alternative<MobiusLift>(ab.node));
  TestRng rng(43);
  for (int i = 0; i < 50; ++i) {
    double x = rng.unit_double() * 6 - 3;
    CHECK(lift_eval(ab, x) == Catch::Approx(lift_eval(a, lift_eval(b, x))).margin(1e-11));
  }
  // mixed exact and inexact factors become a composite
  Lift mixed = lift_compose(a, Lift::pl(PlMap::rotation(Rat(1, 7))));
  CHECK(std::holds_alternative<CompositeLift>(mixed.node));
  for (int i = 0; i < 20; ++i) {
    double x = rng.unit_double() * 4 - 2;
    CHECK(lift_eval(mixed, x) ==
          Catch::Approx(lift_eval(a, x + 1.0 / 7)).margin(1e-11));
  }
}

TEST_CASE("inverses round trip for every representation") {
  TestRng rng(44);
  std::vector<Lift> lifts;
  lifts.push_back(Lift::rotation(Rat(3, 7)));
  lifts.push_back(Lift::pl(testutil::random_pl_lift(rng, 6, 48)));
  lifts.push_back(Lift::rescale(Lift::pl(testutil::random_pl_lift(rng, 4, 32)), 5, 3));
  lifts.push_back(Lift::composite({Lift::rotation(Rat(1, 5)),
                                   Lift::pl(testutil::random_pl_lift(rng, 4, 32))}));
  for (const Lift& f : lifts) {
    Lift g = lift_inverse(f);
    for (int i = 0; i < 20; ++i) {
      Rat x = rng.rat(151, -150, 150);
      CHECK(lift_eval_exact(g, lift_eval_exact(f, x)) == x);
      CHECK(lift_eval_exact(f, lift_eval_exact(g, x)) == x);
    }
  }
  Lift m = Lift::mobius(Mobius(2, 1, 1, 1), -2);
  Lift mi = lift_inverse(m);
  CHECK(std::holds_alternative<MobiusLift>(mi.node));
  for (int i = 0; i < 40; ++i) {
    double x = rng.unit_double() * 8 - 4;
    CHECK(lift_eval(mi, lift_eval(m, x)) == Catch::Approx(x).margin(1e-10));
    CHECK(lift_eval(m, lift_eval(mi, x)) == Catch::Approx(x).margin(1e-10));
  }
}

TEST_CASE("translation") {
  Lift r = lift_translate(Lift::rotation(Rat(1, 3)), Rat(1, 6));
  CHECK(lift_eval_exact(r, Rat(0)) == Rat(1, 2));
  TestRng rng(45);
  Lift f = Lift::pl(testutil::random_pl_lift(rng, 5, 32));
  Lift ft = lift_translate(f, Rat(-7, 5));
  for (int i = 0; i < 20; ++i) {
    Rat x = rng.rat(97, -100, 100);
    CHECK(lift_eval_exact(ft, x) == lift_eval_exact(f, x) - Rat(7, 5));
  }
  Lift m = Lift::mobius(Mobius(1, 1, -1, 0), 0);
  Lift mt = lift_translate(m, Rat(-1));
  CHECK(std::holds_alternative<MobiusLift>(mt.node));
  CHECK(lift_eval(mt, 0.3) == Catch::Approx(lift_eval(m, 0.3) - 1).margin(1e-14));
  CHECK_THROWS_AS(lift_translate(m, Rat(1, 2)), InexactError);
}

TEST_CASE("powers") {
  Lift r = Lift::rotation(Rat(1, 5));
  CHECK(lift_eval_exact(lift_pow(r, 5), Rat(0)) == Rat(1));
  CHECK(lift_eval_exact(lift_pow(r, -2), Rat(0)) == Rat(-2, 5));
  CHECK(lift_eval_exact(lift_pow(r, 0), Rat(9, 11)) == Rat(9, 11));
  TestRng rng(46);
  Lift f = Lift::pl(testutil::random_pl_lift(rng, 4, 24));
  Lift f3 = lift_pow(f, 3);
  Rat x(5, 17);
  CHECK(lift_eval_exact(f3, x) ==
        lift_eval_exact(f, lift_eval_exact(f, lift_eval_exact(f, x))));
}

TEST_CASE("lifts commute with unit translation") {
  TestRng rng(47);
  std::vector<Lift> lifts;
  lifts.push_back(Lift::pl(testutil::random_pl_lift(rng, 8, 64)));
  lifts.push_back(Lift::rescale(Lift::pl(testutil::random_pl_lift(rng, 5, 32)), 7, 4));
  lifts.push_back(Lift::composite({Lift::rotation(Rat(2, 9)),
                                   Lift::pl(testutil::random_pl_lift(rng, 5, 32))}));
  for (const Lift& f : lifts) {
    for (int i = 0; i < 15; ++i) {
      Rat x = rng.rat(89, -90, 90);
      CHECK(lift_eval_exact(f, x + 1) == lift_eval_exact(f, x) + 1);
    }
  }
  Lift m = Lift::mobius(Mobius(3, 1, 2, 1), 4);
  for (int i = 0; i < 15; ++i) {
    double x = rng.unit_double() * 4 - 2;
    CHECK(lift_eval(m, x + 1) == Catch::Approx(lift_eval(m, x) + 1).margin(1e-12));
  }
}

TEST_CASE("translation number is a conjugation invariant") {
  TestRng rng(48);
  auto planted = testutil::plant_periodic_lift(rng, 2, 5, 48, 3);
  Lift f = Lift::pl(planted.map);
  Lift h = Lift::pl(testutil::random_pl_lift(rng, 6, 48));
  Lift conj = lift_compose(h, lift_compose(f, lift_inverse(h)));
  auto d1 = detect_rational_rotation(f, 10);
  auto d2 = detect_rational_rotation(conj, 10);
  REQUIRE(d1.has_value());
  REQUIRE(d2.has_value());
  CHECK(d1->value == d2->value);
  CHECK(d1->period == d2->period);
}
