#pragma once
// JSON serialization: lifts, actions, and certificate reports, schema
// "rotkit/1".  Exact rationals travel as "p/q" strings; floats as plain JSON
// numbers (round-tripping); insertion order is fixed so equal inputs dump to
// identical bytes.

#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rotkit/action.hpp"
#include "rotkit/semiconj.hpp"

namespace rotkit {

using Json = nlohmann::ordered_json;

struct IoError : Error {
  using Error::Error;
};

inline Json json_rat(const Rat& r) { return format_rat(r); }

inline Rat rat_from_json(const Json& j) {
  if (!j.is_string()) throw IoError("json: expected a rational string");
  return parse_rat(j.get<std::string>());
}

inline Json json_point(const LinePoint& p) {
  Json j;
  j["approx"] = p.approx;
  j["exact"] = p.exact ? Json(format_rat(*p.exact)) : Json(nullptr);
  return j;
}

inline Json json_arc(const Arc& a) {
  Json j;
  j["lo"] = json_point(a.lo);
  j["hi"] = json_point(a.hi);
  return j;
}

inline Json json_enclosure(const Enclosure& e) {
  Json j;
  j["lo"] = json_rat(e.lo);
  j["hi"] = json_rat(e.hi);
  return j;
}

inline Json json_triple_entry(const TripleEntry& t) {
  Json j;
  j["exact"] = t.exact ? Json(format_rat(*t.exact)) : Json(nullptr);
  if (t.bounds) j["enclosure"] = json_enclosure(*t.bounds);
  return j;
}

inline Json json_triple(const RotationTriple& t) {
  Json j;
  j["a"] = json_triple_entry(t.a);
  j["b"] = json_triple_entry(t.b);
  j["ab"] = json_triple_entry(t.ab);
  return j;
}

// ---- lifts ----------------------------------------------------------------

inline Json json_lift(const Lift& f) {
  return std::visit(
      [](const auto& node) -> Json {
        using T = std::decay_t<decltype(node)>;
        Json j;
        if constexpr (std::is_same_v<T, RotationLift>) {
          j["type"] = "rotation";
          j["offset"] = json_rat(node.t);
        } else if constexpr (std::is_same_v<T, PlLift>) {
          j["type"] = "pl";
          Json bp = Json::array();
          for (const auto& [x, y] : node.map.pts)
            bp.push_back(Json::array({format_rat(x), format_rat(y)}));
          j["breakpoints"] = std::move(bp);
        } else if constexpr (std::is_same_v<T, MobiusLift>) {
          j["type"] = "mobius";
          j["matrix"] = Json::array({node.map.a, node.map.b, node.map.c, node.map.d});
          j["sheet"] = node.sheet;
        } else if constexpr (std::is_same_v<T, RescaleLift>) {
          j["type"] = "rescale";
          j["fold"] = node.fold;
          j["offset"] = node.offset;
          j["inner"] = json_lift(*node.inner);
        } else {
          j["type"] = "composite";
          Json fs = Json::array();
          for (const Lift& g : node.factors) fs.push_back(json_lift(g));
          j["factors"] = std::move(fs);
        }
        return j;
      },
      f.node);
}

inline Lift lift_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("type"))
    throw IoError("json lift: missing 'type'");
  std::string type = j.at("type").get<std::string>();
  if (type == "rotation") return Lift::rotation(rat_from_json(j.at("offset")));
  if (type == "pl") {
    std::vector<std::pair<Rat, Rat>> pts;
    for (const Json& row : j.at("breakpoints")) {
      if (!row.is_array() || row.size() != 2)
        throw IoError("json lift: breakpoint must be an [x, y] pair");
      pts.emplace_back(rat_from_json(row[0]), rat_from_json(row[1]));
    }
    return Lift::pl(PlMap{std::move(pts)});
  }
  if (type == "mobius") {
    const Json& m = j.at("matrix");
    if (!m.is_array() || m.size() != 4) throw IoError("json lift: matrix must have 4 entries");
    return Lift::mobius(Mobius(m[0].get<double>(), m[1].get<double>(), m[2].get<double>(),
                               m[3].get<double>()),
                        j.at("sheet").get<long>());
  }
  if (type == "rescale")
    return Lift::rescale(lift_from_json(j.at("inner")), j.at("fold").get<long>(),
                         j.at("offset").get<long>());
  if (type == "composite") {
    std::vector<Lift> fs;
    for (const Json& g : j.at("factors")) fs.push_back(lift_from_json(g));
    return Lift::composite(std::move(fs));
  }
  throw IoError("json lift: unknown type '" + type + "'");
}

// ---- actions ---------------------------------------------------------------

inline Json action_to_json(const CircleAction& act) {
  Json j;
  j["schema"] = "rotkit/1";
  j["kind"] = "action";
  j["backend"] = backend_name(act.backend());
  j["rot_a"] = json_rat(act.rot_a());
  j["rot_b"] = json_rat(act.rot_b());
  j["threshold"] = act.threshold();
  j["lift_a"] = json_lift(act.lift_a());
  j["lift_b"] = json_lift(act.lift_b());
  return j;
}

// Rebuilds through the validating constructor, so the relations and declared
// rotation numbers are re-checked on load.
inline CircleAction action_from_json(const Json& j) {
  if (!j.is_object() || j.value("schema", "") != "rotkit/1")
    throw IoError("action: missing or unknown schema (want \"rotkit/1\")");
  if (j.value("kind", "") != "action") throw IoError("action: wrong kind");
  double threshold = j.value("threshold", 1e-9);
  if (!(threshold > 0)) throw IoError("action: threshold must be positive");
  return CircleAction(lift_from_json(j.at("lift_a")), lift_from_json(j.at("lift_b")),
                      rat_from_json(j.at("rot_a")), rat_from_json(j.at("rot_b")), threshold);
}

inline void save_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << j.dump(2) << '\n';
}

inline Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  Json j = Json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw IoError("invalid JSON in " + path);
  return j;
}

// ---- certificate reports ----------------------------------------------------

inline Json json_case1(const Case1Certificate& c) {
  Json j;
  j["kind"] = "case1_certificate";
  j["backend"] = backend_name(c.backend);
  j["threshold"] = c.threshold;
  j["max_syllables"] = c.max_syllables;
  j["x0"] = json_point(c.x0);
  j["interval_i"] = json_arc(c.interval_i);
  j["interval_j"] = json_arc(c.interval_j);
  j["hyperbolic_count"] = c.hyperbolic_count();
  Json vs = Json::array();
  for (const WordVerdict& v : c.verdicts) {
    Json row;
    row["word"] = v.word.str();
    row["kind"] = v.kind;
    if (v.trapped) row["canonical"] = v.canonical.str();
    row["rot"] = format_rat(v.rot);
    row["trapped"] = v.trapped;
    vs.push_back(std::move(row));
  }
  j["verdicts"] = std::move(vs);
  return j;
}

inline Json json_ineq(const IneqReport& r) {
  Json j;
  j["kind"] = "ineq_report";
  j["backend"] = backend_name(r.backend);
  j["threshold"] = r.threshold;
  j["window"] = r.window;
  j["x0"] = json_point(r.x0);
  j["margin1"] = r.margin1;
  j["margin2"] = r.margin2;
  j["margin3"] = r.margin3;
  return j;
}

inline Json json_markov(const MarkovCertificate& c) {
  Json j;
  j["kind"] = "markov_certificate";
  j["backend"] = backend_name(c.backend);
  j["threshold"] = c.threshold;
  j["window"] = c.window;
  j["x0"] = json_point(c.x0);
  j["interior_margin"] = c.interior_margin;
  j["equality_residual"] = c.equality_residual;
  Json rows = Json::array();
  for (const MarkovRow& r : c.rows) {
    Json row;
    row["index"] = r.index;
    row["lo"] = json_point(r.lo);
    row["mid"] = json_point(r.mid);
    row["hi"] = json_point(r.hi);
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j;
}

inline Json json_theta(const ThetaMap& t) {
  Json j;
  j["kind"] = "theta_map";
  j["backend"] = backend_name(t.backend);
  j["threshold"] = t.threshold;
  j["max_syllables"] = t.max_syllables;
  j["x0"] = json_point(t.x0);
  j["deck_step"] = t.deck_step;
  j["max_gap"] = t.max_gap;
  j["wd_residual"] = t.wd_residual;
  j["equiv_residual"] = t.equiv_residual;
  j["period5_residual"] = t.period5_residual;
  j["equiv_checked"] = t.equiv_checked;
  j["period5_checked"] = t.period5_checked;
  Json table = Json::array();
  if (t.table_exact) {
    for (const auto& [p, q] : *t.table_exact)
      table.push_back(Json::array({format_rat(p), format_rat(q)}));
  } else {
    for (const auto& [p, q] : t.table) table.push_back(Json::array({p, q}));
  }
  j["table"] = std::move(table);
  return j;
}

}  // namespace rotkit
