#pragma once

// JSON/CSV emission, IFS definition files and experiment configs.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "xda/contfrac.hpp"
#include "xda/errors.hpp"
#include "xda/exact.hpp"
#include "xda/extrinsic.hpp"
#include "xda/geometry.hpp"
#include "xda/ifs.hpp"
#include "xda/lattice.hpp"
#include "xda/rap.hpp"

namespace xda {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "1.0.0";
inline constexpr int kCsvSchema = 1;

// ---------------------------------------------------------------------------
// Scalars

// Integers are numbers when they fit 64 bits, strings otherwise.
inline Json to_json(const BigInt& v) {
  if (v.fits_slong_p()) return v.get_si();
  return v.get_str();
}
inline Json to_json(const BigRational& v) { return to_string(v); }
inline Json to_json(const QuadScalar& v) { return v.to_string(); }
/// Fixed-point decimal with `places` digits after the point, rounded down
/// or up so that enclosures stay sound.
inline std::string decimal(const BigRational& r, unsigned places, bool up) {
  const BigInt scale = ipow(10, places);
  const BigInt v = up ? ceil_of(r * BigRational(scale)) : floor_of(r * BigRational(scale));
  const BigInt a = abs(v);
  std::string digits = a.get_str();
  if (digits.size() <= places) digits.insert(0, places + 1 - digits.size(), '0');
  digits.insert(digits.size() - places, ".");
  return (v < 0 ? "-" : "") + digits;
}

/// Outward-rounded decimal enclosure [lo, hi].
inline Json to_json(const RationalInterval& v) {
  return Json::array({decimal(v.lo(), 12, false), decimal(v.hi(), 12, true)});
}

template <typename T>
Json to_json(const std::vector<T>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

/// Scalar spec in definition files: "rat:p/q", "quad:(a+b*sqrt(D))/c" or a
/// bare rational / quadratic form.
inline QuadScalar parse_scalar(const std::string& text) {
  if (text.rfind("rat:", 0) == 0) return QuadScalar(parse_rational(text.substr(4)));
  if (text.rfind("quad:", 0) == 0) return parse_quad(text.substr(5));
  return parse_quad(text);
}

inline QuadScalar scalar_of(const Json& j) {
  if (j.is_string()) return parse_scalar(j.get<std::string>());
  if (j.is_number_integer()) return QuadScalar(BigRational(j.get<long>()));
  throw InvalidInput("scalar must be a string spec or an integer");
}

inline Vec vec_of(const Json& j) {
  if (!j.is_array()) throw InvalidInput("expected an array of scalars");
  Vec v;
  for (const auto& e : j) v.push_back(scalar_of(e));
  return v;
}

// ---------------------------------------------------------------------------
// IFS definitions
//
// {"name": "...",
//  "maps": [{"ratio": "1/3", "rotation": {"cos": "1", "sin": "0", "reflect": false},
//            "translation": ["0", "0"]}, ...],
//  "open_set": {"polygon": [["0","0"], ...]} | {"interval": ["0", "1"]}}

inline IFSystem parse_system_json(const Json& j) {
  try {
    if (!j.contains("maps") || !j.contains("open_set")) throw InvalidInput("IFS needs 'maps' and 'open_set'");
    const Json& os = j.at("open_set");
    Polytope w;
    if (os.contains("interval")) {
      const Vec iv = vec_of(os.at("interval"));
      if (iv.size() != 2) throw InvalidInput("interval needs two endpoints");
      w = Polytope::interval(iv[0], iv[1]);
    } else if (os.contains("polygon")) {
      std::vector<Vec> vs;
      for (const auto& v : os.at("polygon")) vs.push_back(vec_of(v));
      w = Polytope::polygon(vs);
    } else {
      throw InvalidInput("open set must be an 'interval' or a 'polygon'");
    }
    std::vector<Similarity> maps;
    for (const auto& m : j.at("maps")) {
      const BigRational ratio = parse_rational(m.at("ratio").get<std::string>());
      const Vec t = vec_of(m.at("translation"));
      bool reflect = false;
      QuadScalar c(1), s(0);
      if (m.contains("rotation")) {
        const Json& r = m.at("rotation");
        if (r.contains("cos")) c = scalar_of(r.at("cos"));
        if (r.contains("sin")) s = scalar_of(r.at("sin"));
        reflect = r.value("reflect", false);
      }
      if (w.dim == 1) {
        if (!s.is_zero() || !(c == QuadScalar(1))) throw InvalidInput("1D maps take no rotation");
        if (t.size() != 1) throw InvalidInput("1D map needs one translation entry");
        maps.push_back(Similarity::linear1(ratio, reflect, t[0]));
      } else {
        if (t.size() != 2) throw InvalidInput("planar map needs two translation entries");
        maps.push_back(Similarity::planar(ratio, c, s, reflect, t));
      }
    }
    return IFSystem(j.value("name", std::string("custom")), std::move(maps), std::move(w));
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("malformed IFS definition: ") + e.what());
  }
}

/// "builtin:<name>" or a path to a JSON definition.
inline IFSystem load_system(const std::string& spec) {
  if (spec.rfind("builtin:", 0) == 0) return builtin_system(spec.substr(8));
  std::ifstream in(spec);
  if (!in) throw InvalidInput("cannot open system file '" + spec + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("malformed JSON in '" + spec + "': ") + e.what());
  }
  return parse_system_json(j);
}

inline Json system_to_json(const IFSystem& ifs) {
  Json maps = Json::array();
  for (const auto& u : ifs.maps()) {
    Json m;
    m["ratio"] = to_string(u.ratio);
    if (u.dim() == 2) {
      // orth = ratio-free matrix; recover cos, sin and the reflection flag.
      const bool refl = u.reflects();
      m["rotation"] = {{"cos", u.orth[0][0].to_string()}, {"sin", u.orth[1][0].to_string()}, {"reflect", refl}};
    } else if (u.reflects()) {
      m["rotation"] = {{"reflect", true}};
    }
    m["translation"] = to_json(u.translation);
    maps.push_back(m);
  }
  Json os;
  if (ifs.dim() == 1) {
    os["interval"] = to_json(ifs.open_set().vertices.empty() ? Vec{} : Vec{ifs.open_set().vertices.front()[0],
                                                                            ifs.open_set().vertices.back()[0]});
  } else {
    Json poly = Json::array();
    for (const auto& v : ifs.open_set().vertices) poly.push_back(to_json(v));
    os["polygon"] = poly;
  }
  return {{"name", ifs.name()}, {"maps", maps}, {"open_set", os}};
}

// ---------------------------------------------------------------------------
// Results

inline Json to_json(const ApproxVector& r) { return {{"p", to_json(r.p)}, {"q", to_json(r.q)}}; }

inline Json to_json(const GoodPair& g) {
  Json certs = Json::array();
  for (const auto& w : g.witness) {
    certs.push_back({{"vector", w.vector},
                     {"coord", w.coord},
                     {"bound", to_json(w.bound)},
                     {"exact", w.exact},
                     {"precision", w.precision}});
  }
  return {{"r0", to_json(g.r0)}, {"rInf", to_json(g.rinf)}, {"d", g.d}, {"height", to_json(g.height)},
          {"certificates", certs}};
}

inline Json to_json(const RAPCertificate& c) {
  Json ratios = Json::array();
  for (const auto& row : c.ratios) ratios.push_back(to_json(row));
  Json pts = Json::array();
  for (const auto& p : c.points) pts.push_back(to_json(p));
  return {{"points", pts}, {"increment", to_json(c.increment)}, {"C", to_json(c.C)}, {"ratios", ratios}};
}

inline Json to_json(const RapSearchResult& r) {
  Json j = {{"length", r.length}, {"exhausted", r.exhausted}, {"capped", r.capped}, {"nodes", r.nodes}};
  j["certificate"] = r.certificate ? to_json(*r.certificate) : Json();
  return j;
}

inline Json to_json(const OscResult& r) {
  Json j = {{"verified", r.verified}};
  if (!r.verified) {
    j["violation"] = r.violation;
    if (r.pair) j["maps"] = {r.pair->first + 1, r.pair->second + 1};
    if (r.witness) j["witness"] = to_json(*r.witness);
  }
  return j;
}

inline Json to_json(const MembershipVerdict& v, std::size_t alphabet) {
  Json j = {{"verdict", to_string(v.verdict)}, {"depth", v.depth}};
  if (v.verdict == Verdict::kIn) {
    j["prefix"] = word_string(v.prefix, alphabet);
    j["period"] = word_string(v.period, alphabet);
  }
  return j;
}

inline Json to_json(const CoverResult& c, std::size_t alphabet) {
  Json words = Json::array();
  for (std::size_t i = 0; i < c.words.size(); ++i) {
    words.push_back({{"word", word_string(c.words[i], alphabet)}, {"ratio", to_json(c.ratios[i])}});
  }
  return {{"diameter", to_json(c.diameter)}, {"gamma", to_json(c.gamma)}, {"count", c.words.size()},
          {"words", words}};
}

inline Json to_json(const PorosityTest& t) {
  Json j = {{"center", to_json(t.center)}, {"radius", to_json(t.radius)}, {"depth", t.depth},
            {"eps_found", to_json(t.eps_found)}};
  j["gap"] = t.gap ? Json::array({to_json(t.gap->lo), to_json(t.gap->hi)}) : Json();
  return j;
}

inline Json to_json(const PorosityResult& r) {
  Json tests = Json::array();
  for (const auto& t : r.tests) tests.push_back(to_json(t));
  Json j = {{"certified", r.certified}, {"epsilon", to_json(r.epsilon)}, {"best_epsilon", to_json(r.best_epsilon)},
            {"tests", tests}};
  j["counterexample"] = r.counterexample ? to_json(*r.counterexample) : Json();
  return j;
}

inline Json to_json(const SegmentScanResult& r) {
  Json segs = Json::array();
  for (const auto& s : r.segments) {
    segs.push_back({{"a", to_json(s.a)}, {"b", to_json(s.b)}, {"length", to_json(s.length)},
                    {"line", {{"point", to_json(s.line.point)}, {"direction", to_json(s.line.direction)}}}});
  }
  return {{"found", r.found()}, {"lines_scanned", r.lines_scanned}, {"segments", segs}};
}

inline Json to_json(const ScaleBucket& b) {
  Json j = {{"lo", to_json(b.lo)}, {"hi", to_json(b.hi)}};
  if (b.witness) {
    j["witness"] = *b.witness;
    j["min_quality"] = to_json(b.min_quality);
  } else {
    j["witness"] = Json();
  }
  return j;
}

inline Json to_json(const CantorSearchResult& r) {
  Json rows = Json::array();
  for (const auto& nr : r.per_n) {
    for (std::size_t k = 0; k < nr.rows.size(); ++k) {
      const CantorRow& c = nr.rows[k];
      rows.push_back({{"n", c.n}, {"a_n", to_json(c.a_n)}, {"b", to_json(c.b)}, {"p", to_json(c.p)},
                      {"q", to_json(c.q)}, {"membership", c.out ? "out" : "in"},
                      {"quality", to_json(c.quality)}, {"within_bound", c.within_bound},
                      {"best", nr.best && *nr.best == k}});
    }
  }
  return {{"bound", to_json(r.bound)}, {"all_intrinsic_events", r.all_intrinsic_events},
          {"convergents_out", r.convergents_out}, {"convergents_in", r.convergents_in},
          {"profile", to_json(r.profile)}, {"rows", rows}};
}

inline Json to_json(const GeneralSearchResult& r) {
  Json ws = Json::array();
  for (const auto& w : r.witnesses) {
    ws.push_back({{"min_q0", to_json(w.min_q0)}, {"index", w.index}, {"p", to_json(w.r.p)}, {"q", to_json(w.r.q)},
                  {"quality", to_json(w.quality)}, {"within_progression_bound", w.within_progression_bound},
                  {"provenance", "progression(" + w.pair.r0.to_string() + " + i " + w.pair.rinf.to_string() +
                                     ", i = " + std::to_string(w.index) + ")"}});
  }
  return {{"witnesses", ws}, {"window_exhausted", to_json(r.window_exhausted)},
          {"unknown_skipped", r.unknown_skipped}, {"profile", to_json(r.profile)}};
}

inline Json to_json(const CensusResult& r) {
  Json hits = Json::array();
  for (const auto& h : r.hits) {
    hits.push_back({{"p", to_json(h.p)}, {"q", to_json(h.q)}, {"intrinsic", h.intrinsic},
                    {"beyond_threshold", h.beyond_threshold}});
  }
  return {{"intrinsic", r.intrinsic}, {"extrinsic", r.extrinsic},
          {"extrinsic_beyond_threshold", r.extrinsic_beyond_threshold},
          {"intrinsic_from_pythagorean", r.intrinsic_from_pythagorean}, {"hits", hits}};
}

// ---------------------------------------------------------------------------
// CSV

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string csv_row(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(cells[i]);
  }
  return out + "\n";
}

// ---------------------------------------------------------------------------
// Experiment configs

struct ExperimentConfig {
  std::string command;
  std::vector<std::string> points;
  std::map<std::string, std::string> params;  // numeric parameters kept as exact text
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string output;  // empty: stdout

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

inline nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;  // std::map keys: canonical order
  j["command"] = c.command;
  j["points"] = c.points;
  j["params"] = c.params;
  j["seed"] = c.seed;
  j["format"] = c.format;
  j["output"] = c.output;
  return j;
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.empty()) throw InvalidInput("empty config");
  try {
    ExperimentConfig c;
    c.command = j.at("command").get<std::string>();
    if (c.command.empty()) throw InvalidInput("config has no command");
    if (j.contains("points")) c.points = j.at("points").get<std::vector<std::string>>();
    if (j.contains("params")) {
      for (const auto& [k, v] : j.at("params").items()) {
        c.params[k] = v.is_string() ? v.get<std::string>() : v.dump();
      }
    }
    c.seed = j.value("seed", std::uint64_t{0});
    c.format = j.value("format", std::string("json"));
    if (c.format != "json" && c.format != "csv") throw InvalidInput("format must be json or csv");
    c.output = j.value("output", std::string());
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed config: ") + e.what());
  }
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  if (ss.str().find_first_not_of(" \t\r\n") == std::string::npos) throw InvalidInput("empty config");
  try {
    return config_from_json(nlohmann::json::parse(ss.str()));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed config: ") + e.what());
  }
}

/// FNV-1a over the canonical (key-sorted, compact) dump.
inline std::string config_hash(const ExperimentConfig& c) {
  const std::string text = config_to_json(c).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

}  // namespace xda
