#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>

#include "rotkit/io.hpp"
#include "helpers.hpp"

using namespace rotkit;

namespace {

// exact lifts: equality of evaluations on a rational grid
void check_same_exact(const Lift& f, const Lift& g) {
  for (long i = -3; i <= 9; ++i) {
    Rat x(i, 7);
    CHECK(lift_eval_exact(f, x) == lift_eval_exact(g, x));
  }
}

void check_same_float(const Lift& f, const Lift& g, double tol) {
  for (int i = 0; i < 23; ++i) {
    double x = i / 23.0;
    CHECK(std::abs(lift_eval(f, x) - lift_eval(g, x)) <= tol);
  }
}

}  // namespace

TEST_CASE("rationals and triples survive the JSON round trip") {
  for (const Rat& r : {Rat(0), Rat(1, 3), Rat(-22, 7), Rat(123456789, 1000003)})
    CHECK(rat_from_json(json_rat(r)) == r);
  CHECK_THROWS_AS(rat_from_json(Json(3.5)), IoError);
  CHECK_THROWS_AS(rat_from_json(Json("1/0")), MalformedError);

  RotationTriple t = rotation_triple(fuchsian_pl_model());
  Json j = json_triple(t);
  CHECK(j["a"]["exact"] == "1/2");
  CHECK(j["b"]["exact"] == "1/3");
  CHECK(j["ab"]["exact"] == "0/1");
}

TEST_CASE("every lift node kind round-trips through JSON") {
  Lift rot = Lift::rotation(Rat(5, 7));
  check_same_exact(rot, lift_from_json(json_lift(rot)));

  Lift pl = fuchsian_pl_model().lift_a();
  Lift pl2 = lift_from_json(json_lift(pl));
  CHECK(pl_equal(lift_to_pl(pl), lift_to_pl(pl2)));

  Lift mob = fuchsian_o23().lift_a();
  check_same_float(mob, lift_from_json(json_lift(mob)), 1e-12);

  // degree-5 lift produces rescale nodes; a composed word adds composites
  CircleAction five = k_fold_lift(fuchsian_pl_model(), 5);
  Lift resc = five.lift_a();
  check_same_exact(resc, lift_from_json(json_lift(resc)));
  Lift comp = five.apply(Word::parse("abaB"));
  check_same_exact(comp, lift_from_json(json_lift(comp)));

  Json bad;
  bad["type"] = "spline";
  CHECK_THROWS_AS(lift_from_json(bad), IoError);
  CHECK_THROWS_AS(lift_from_json(Json("x")), IoError);
}

TEST_CASE("action files round-trip and revalidate on load") {
  CircleAction model = fuchsian_pl_model();
  Json j = action_to_json(model);
  CHECK(j["schema"] == "rotkit/1");
  CHECK(j["backend"] == "pl");
  CircleAction back = action_from_json(j);
  CHECK(back.backend() == Backend::ExactPl);
  CHECK(pl_equal(lift_to_pl(back.lift_a()), lift_to_pl(model.lift_a())));
  CHECK(pl_equal(lift_to_pl(back.lift_b()), lift_to_pl(model.lift_b())));
  CHECK(rotation_triple(back) == rotation_triple(model));

  // deterministic bytes: dump, load, dump again
  std::string once = j.dump(2);
  CHECK(action_to_json(action_from_json(j)).dump(2) == once);

  CircleAction rnd =
      random_action(RotationTriple::from_exact(Rat(1, 2), Rat(1, 3), Rat(0)), 21);
  CircleAction rnd2 = action_from_json(action_to_json(rnd));
  CHECK(pl_equal(lift_to_pl(rnd2.lift_a()), lift_to_pl(rnd.lift_a())));

  CircleAction fuchs = fuchsian_o23();
  CircleAction fuchs2 = action_from_json(action_to_json(fuchs));
  CHECK(fuchs2.backend() == Backend::MobiusFloat);
  check_same_float(fuchs2.apply(Word::parse("ab")), fuchs.apply(Word::parse("ab")), 1e-9);

  // tampering is caught on load
  Json broken = action_to_json(model);
  broken["schema"] = "rotkit/0";
  CHECK_THROWS_AS(action_from_json(broken), IoError);
  broken = action_to_json(model);
  broken["rot_a"] = "1/3";
  CHECK_THROWS_AS(action_from_json(broken), Error);
  broken = action_to_json(model);
  broken["lift_a"]["breakpoints"][0][1] = "9/1";
  CHECK_THROWS_AS(action_from_json(broken), Error);
}

TEST_CASE("files on disk: save, load, and failure modes") {
  Json j = action_to_json(fuchsian_pl_model());
  std::string path = "io_test_action.json";
  save_json(path, j);
  Json back = load_json(path);
  CHECK(back == j);
  std::remove(path.c_str());

  CHECK_THROWS_AS(load_json("does_not_exist.json"), IoError);
  std::ofstream(path) << "{ not json";
  CHECK_THROWS_AS(load_json(path), IoError);
  std::remove(path.c_str());
}

TEST_CASE("certificate reports serialize deterministically") {
  CircleAction model = fuchsian_pl_model();
  Json c1 = json_case1(certify_case1(model, 4));
  CHECK(c1["kind"] == "case1_certificate");
  CHECK(c1["x0"]["exact"] == "0/1");
  CHECK(c1["hyperbolic_count"].get<int>() >= 6);
  CHECK(c1.dump() == json_case1(certify_case1(model, 4)).dump());

  CircleAction five = k_fold_lift(model, 5);
  Json ineq = json_ineq(verify_lemma_ineq(five, 4));
  CHECK(ineq["margin1"].get<double>() > 0);
  CHECK(ineq.dump() == json_ineq(verify_lemma_ineq(five, 4)).dump());

  Json mk = json_markov(build_markov(five, 4));
  CHECK(mk["rows"].size() == 9);
  CHECK(mk["equality_residual"].get<double>() == 0.0);

  Json th = json_theta(build_theta(five, 6));
  CHECK(th["deck_step"] == 1);
  CHECK(th["wd_residual"].get<double>() == 0.0);
  for (const Json& row : th["table"]) {
    Rat p = parse_rat(row[0].get<std::string>());
    Rat q = parse_rat(row[1].get<std::string>());
    CHECK(q - p == Rat(1, 5));
  }
  CHECK(th.dump() == json_theta(build_theta(five, 6)).dump());
}
