// rotkit command line: build actions, compute rotation triples, run the
// certificates, and emit machine-readable reports.
//
// Exit codes: 0 all verdicts pass, 1 certificate failure, 2 usage/parse error.

#include <chrono>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rotkit/io.hpp"

using namespace rotkit;

namespace {

struct ActionFlags {
  std::string in_file;
  bool fuchsian = false;
  long triangle_k = 0;
  long lift_k = 0;
  std::string backend = "mobius";
  double threshold = 1e-9;
};

void add_action_flags(CLI::App* cmd, ActionFlags& f) {
  cmd->add_option("--in", f.in_file, "action file (JSON, schema rotkit/1)");
  cmd->add_flag("--fuchsian", f.fuchsian, "the modular-group boundary action");
  cmd->add_option("--triangle", f.triangle_k, "finite rotation action of type (2,3,k)");
  cmd->add_option("--lift", f.lift_k, "replace the action by its degree-k lift");
  cmd->add_option("--backend", f.backend, "pl | mobius (default mobius)")
      ->check(CLI::IsMember({"pl", "mobius"}));
  cmd->add_option("--threshold", f.threshold, "residual tolerance for inexact checks")
      ->check(CLI::PositiveNumber);
}

CircleAction resolve_action(const ActionFlags& f) {
  std::optional<CircleAction> act;
  if (!f.in_file.empty()) act.emplace(action_from_json(load_json(f.in_file)));
  if (f.fuchsian) {
    if (act) throw IoError("give exactly one of --in, --fuchsian, --triangle");
    act.emplace(f.backend == "pl" ? fuchsian_pl_model(f.threshold)
                                  : fuchsian_o23(f.threshold));
  }
  if (f.triangle_k != 0) {
    if (act) throw IoError("give exactly one of --in, --fuchsian, --triangle");
    act.emplace(triangle_action(f.triangle_k, f.threshold));
  }
  if (!act) throw IoError("no action given: use --in, --fuchsian, or --triangle");
  if (f.lift_k != 0) act.emplace(k_fold_lift(*act, f.lift_k));
  return *act;
}

Json action_config(const ActionFlags& f) {
  Json j;
  if (!f.in_file.empty()) j["in"] = f.in_file;
  if (f.fuchsian) j["fuchsian"] = true;
  if (f.triangle_k != 0) j["triangle"] = f.triangle_k;
  if (f.lift_k != 0) j["lift"] = f.lift_k;
  j["backend"] = f.backend;
  j["threshold"] = f.threshold;
  return j;
}

struct Clock {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

// Envelope shared by every subcommand; wall_ms is informational and is the
// only nondeterministic field.
void emit(const std::string& command, const Json& config, const Json& payload,
          const Clock& clock, const std::string& out_file) {
  if (out_file.empty()) return;
  Json report;
  report["schema"] = "rotkit/1";
  report["kind"] = "report";
  report["command"] = command;
  report["config"] = config;
  report["payload"] = payload;
  report["wall_ms"] = clock.ms();
  save_json(out_file, report);
}

std::string entry_str(const TripleEntry& e) {
  if (e.exact) return format_rat(*e.exact);
  if (e.bounds) return "[" + format_rat(e.bounds->lo) + ", " + format_rat(e.bounds->hi) + "]";
  return "?";
}

double distance_from_identity(const Lift& f, int grid = 1024) {
  double worst = 0;
  for (int i = 0; i < grid; ++i) {
    double x = static_cast<double>(i) / grid;
    double d = lift_eval(f, x) - x;
    worst = std::max(worst, std::abs(d - std::llround(d)));
  }
  return worst;
}

Word power_word(const std::string& base, long k) {
  std::string s;
  for (long i = 0; i < k; ++i) s += base;
  return Word::parse(s);
}

int cmd_triple(const ActionFlags& flags, long q_max, long iters, const std::string& out) {
  Clock clock;
  CircleAction act = resolve_action(flags);
  RotationTriple t = rotation_triple(act, q_max, iters);
  std::string cls = "NonExact";
  if (t.all_exact()) cls = classify_theorem1(t).tag_name();
  std::printf("triple: a=%s b=%s ab=%s\n", entry_str(t.a).c_str(), entry_str(t.b).c_str(),
              entry_str(t.ab).c_str());
  std::printf("class: %s\n", cls.c_str());
  Json config = action_config(flags);
  config["q_max"] = q_max;
  config["iters"] = iters;
  Json payload;
  payload["triple"] = json_triple(t);
  payload["class"] = cls;
  emit("triple", config, payload, clock, out);
  return 0;
}

int cmd_certify(const ActionFlags& flags, int which_case, int max_syllables, int window,
                double theta_threshold, const std::string& max_gap, const std::string& out) {
  Clock clock;
  CircleAction act = resolve_action(flags);
  Json config = action_config(flags);
  config["case"] = which_case;
  Json payload;
  if (which_case == 1) {
    config["max_syllables"] = max_syllables;
    Case1Certificate cert = certify_case1(act, max_syllables);
    std::printf("certify case 1: PASS (%zu words, %d hyperbolic trapped)\n",
                cert.verdicts.size(), cert.hyperbolic_count());
    payload = json_case1(cert);
  } else {
    config["max_syllables"] = max_syllables;
    config["window"] = window;
    config["theta_threshold"] = theta_threshold;
    config["max_gap"] = max_gap;
    IneqReport ineq = verify_lemma_ineq(act, window);
    std::printf("inequalities: PASS (margins %.3g / %.3g / %.3g)\n", ineq.margin1,
                ineq.margin2, ineq.margin3);
    MarkovCertificate markov = build_markov(act, window);
    std::printf("markov: PASS (%zu rows, interior margin %.3g)\n", markov.rows.size(),
                markov.interior_margin);
    ThetaMap theta = build_theta(act, max_syllables, theta_threshold, parse_rat(max_gap));
    std::printf(
        "theta: PASS (%zu points, residuals wd=%.3g equiv=%.3g period5=%.3g)\n",
        theta.table.size(), theta.wd_residual, theta.equiv_residual,
        theta.period5_residual);
    payload["ineq"] = json_ineq(ineq);
    payload["markov"] = json_markov(markov);
    payload["theta"] = json_theta(theta);
  }
  emit("certify", config, payload, clock, out);
  return 0;
}

int cmd_counterexample(long k, const ActionFlags& flags, const std::string& out) {
  Clock clock;
  if (k < 7 || (k % 6 != 1 && k % 6 != 5))
    throw IoError("counterexample: k must be = +-1 (mod 6) and >= 7");
  CircleAction hat = hat_phi(k, flags.threshold);
  CircleAction lift = k_fold_lift(
      flags.backend == "pl" ? fuchsian_pl_model(flags.threshold) : fuchsian_o23(flags.threshold),
      k);
  RotationTriple th = rotation_triple(hat), tl = rotation_triple(lift);
  bool equal = th == tl;
  Word wk = power_word("ab", k);
  double hat_dist = distance_from_identity(hat.apply(wk));
  double lift_dist = distance_from_identity(lift.apply(wk));
  bool separated = hat_dist <= flags.threshold && lift_dist >= 0.01;
  std::printf("hat triple:  a=%s b=%s ab=%s\n", entry_str(th.a).c_str(),
              entry_str(th.b).c_str(), entry_str(th.ab).c_str());
  std::printf("lift triple: a=%s b=%s ab=%s\n", entry_str(tl.a).c_str(),
              entry_str(tl.b).c_str(), entry_str(tl.ab).c_str());
  std::printf("triples equal: %s\n", equal ? "yes" : "no");
  std::printf("(ab)^%ld: hat distance from identity %.3g, lift distance %.3g\n", k, hat_dist,
              lift_dist);
  std::printf("separation: %s\n", separated ? "DEMONSTRATED" : "NOT SHOWN");
  Json config = action_config(flags);
  config["k"] = k;
  Json payload;
  payload["hat_triple"] = json_triple(th);
  payload["lift_triple"] = json_triple(tl);
  payload["triples_equal"] = equal;
  payload["hat_identity_residual"] = hat_dist;
  payload["lift_identity_distance"] = lift_dist;
  payload["separated"] = separated;
  emit("counterexample", config, payload, clock, out);
  return separated ? 0 : 1;
}

int cmd_random(int which_case, uint64_t seed, int breakpoints, long denominator,
               const std::string& out) {
  Clock clock;
  RotationTriple target =
      which_case == 1 ? RotationTriple::from_exact(Rat(1, 2), Rat(1, 3), Rat(0))
                      : RotationTriple::from_exact(Rat(1, 2), Rat(2, 3), Rat(1, 5));
  RandomActionParams params;
  params.breakpoints = breakpoints;
  params.denominator = denominator;
  CircleAction act = random_action(target, seed, params);
  RotationTriple t = rotation_triple(act);
  std::printf("random action: case %d, seed %llu, triple a=%s b=%s ab=%s\n", which_case,
              static_cast<unsigned long long>(seed), entry_str(t.a).c_str(),
              entry_str(t.b).c_str(), entry_str(t.ab).c_str());
  if (!out.empty()) {
    save_json(out, action_to_json(act));
    std::printf("wrote action to %s\n", out.c_str());
  }
  return 0;
}

int cmd_path(const std::string& from_file, const std::string& to_file, int steps,
             const std::string& out) {
  Clock clock;
  CircleAction phi0 = action_from_json(load_json(from_file));
  CircleAction phi1 = action_from_json(load_json(to_file));
  std::vector<CircleAction> path = path_witness(phi0, phi1, steps);
  std::printf("path: %d steps, every interpolant verified in class (1/2, 1/3, 0)\n", steps);
  Json config;
  config["from"] = from_file;
  config["to"] = to_file;
  config["steps"] = steps;
  Json payload;
  payload["steps"] = steps;
  Json actions = Json::array();
  for (const CircleAction& step : path) actions.push_back(action_to_json(step));
  payload["actions"] = std::move(actions);
  emit("path", config, payload, clock, out);
  return 0;
}

int cmd_rot(const ActionFlags& flags, const std::string& word_text, long q_max, long iters,
            const std::string& out) {
  Clock clock;
  CircleAction act = resolve_action(flags);
  Word w = Word::parse(word_text);
  ConjClass cls = classify_conjugacy(w);
  Lift f = act.apply(w);
  Json payload;
  payload["word"] = w.str();
  payload["class"] = cls.kind_name();
  payload["canonical"] = cls.canonical.str();
  if (auto d = detect_rational_rotation(f, q_max, flags.threshold)) {
    std::printf("rot(%s) = %s (period %ld%s)\n", word_text.c_str(),
                format_rat(d->value).c_str(), d->period, d->exact ? ", exact" : "");
    payload["rot"] = format_rat(d->value);
    payload["period"] = d->period;
    payload["exact"] = d->exact;
  } else {
    Enclosure e = translation_number_enclosure(f, iters);
    std::printf("rot(%s) in [%s, %s]\n", word_text.c_str(), format_rat(e.lo).c_str(),
                format_rat(e.hi).c_str());
    payload["enclosure"] = json_enclosure(e);
  }
  Json config = action_config(flags);
  config["q_max"] = q_max;
  config["iters"] = iters;
  emit("rot", config, payload, clock, out);
  return 0;
}

// usage/parse errors exit 2; failed certificates and verdicts exit 1
int classify_failure(const Error& e) {
  if (dynamic_cast<const IoError*>(&e) || dynamic_cast<const MalformedError*>(&e) ||
      dynamic_cast<const ActionError*>(&e))
    return 2;
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rotkit: rotation numbers and semi-conjugacy certificates for actions of "
               "Z/2 * Z/3 on the circle"};
  app.require_subcommand(1);

  ActionFlags tf;
  long t_qmax = 30, t_iters = 10000;
  std::string t_out;
  CLI::App* triple = app.add_subcommand("triple", "rotation triple and its classification");
  add_action_flags(triple, tf);
  triple->add_option("--q-max", t_qmax, "largest period scanned for exact detection");
  triple->add_option("--iters", t_iters, "iterations for the fallback enclosure");
  triple->add_option("--out", t_out, "write a JSON report");

  ActionFlags cf;
  int c_case = 1, c_syll = 8, c_window = 10;
  double c_theta_threshold = 1e-6;
  std::string c_gap = "1/8", c_out;
  CLI::App* certify = app.add_subcommand("certify", "run the semi-conjugacy certificates");
  add_action_flags(certify, cf);
  certify->add_option("--case", c_case, "1: trapped intervals; 2: ladder + markov + theta")
      ->check(CLI::IsMember({1, 2}));
  certify->add_option("--max-syllables", c_syll, "word bound for certificates");
  certify->add_option("--window", c_window, "ladder window L");
  certify->add_option("--theta-threshold", c_theta_threshold,
                      "residual tolerance for the theta table");
  certify->add_option("--max-gap", c_gap, "orbit density gate (rational)");
  certify->add_option("--out", c_out, "write a JSON report");

  ActionFlags xf;
  long x_k = 7;
  std::string x_out;
  CLI::App* cx = app.add_subcommand(
      "counterexample", "same triple, different class: the degree-k comparison");
  add_action_flags(cx, xf);
  cx->add_option("--k", x_k, "degree, = +-1 (mod 6), >= 7");
  cx->add_option("--out", x_out, "write a JSON report");

  int r_case = 1, r_breaks = 4;
  long r_den = 64;
  uint64_t r_seed = 0;
  std::string r_out;
  CLI::App* random = app.add_subcommand("random", "seeded random member of a class");
  random->add_option("--case", r_case, "1: (1/2,1/3,0); 2: (1/2,2/3,1/5)")
      ->check(CLI::IsMember({1, 2}));
  random->add_option("--seed", r_seed, "64-bit seed")->required();
  random->add_option("--breakpoints", r_breaks, "free breakpoints per arc");
  random->add_option("--denominator", r_den, "rational grid denominator");
  random->add_option("--out", r_out, "write the action file");

  std::string p_from, p_to, p_out;
  int p_steps = 16;
  CLI::App* path = app.add_subcommand("path", "interpolating path inside class (1/2,1/3,0)");
  path->add_option("--from", p_from, "action file at t=0")->required();
  path->add_option("--to", p_to, "action file at t=1")->required();
  path->add_option("--steps", p_steps, "number of interpolants");
  path->add_option("--out", p_out, "write a JSON report");

  ActionFlags rf;
  std::string w_text, w_out;
  long w_qmax = 30, w_iters = 10000;
  CLI::App* rot = app.add_subcommand("rot", "rotation number of one word");
  add_action_flags(rot, rf);
  rot->add_option("word", w_text, "word over a, b, B")->required();
  rot->add_option("--q-max", w_qmax, "largest period scanned for exact detection");
  rot->add_option("--iters", w_iters, "iterations for the fallback enclosure");
  rot->add_option("--out", w_out, "write a JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (triple->parsed()) return cmd_triple(tf, t_qmax, t_iters, t_out);
    if (certify->parsed())
      return cmd_certify(cf, c_case, c_syll, c_window, c_theta_threshold, c_gap, c_out);
    if (cx->parsed()) return cmd_counterexample(x_k, xf, x_out);
    if (random->parsed()) return cmd_random(r_case, r_seed, r_breaks, r_den, r_out);
    if (path->parsed()) return cmd_path(p_from, p_to, p_steps, p_out);
    if (rot->parsed()) return cmd_rot(rf, w_text, w_qmax, w_iters, w_out);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return classify_failure(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
