// xda: command-line front end for the extrinsic approximation toolkit.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "xda/xda.hpp"

namespace {

using namespace xda;

struct Common {
  std::string config;
  std::uint64_t seed = 0;
  unsigned workers = default_workers();
  std::string format = "json";
  std::string output;
};

// Everything a subcommand needs; unused fields keep their defaults.
struct Args {
  std::string point;
  std::string system;
  std::string set;
  std::size_t terms = 10;
  std::string min_q0 = "100";
  std::string cap = "1000000";
  std::string rho = "3/2";
  std::size_t imax = 16;
  std::string c = "2";
  std::size_t max_len = 64;
  std::uint64_t budget = 200000000;
  std::string center;
  std::string radius;
  std::size_t max_depth = 64;
  std::size_t max_states = 200000;
  std::string line_point;
  std::string line_dir;
  std::string eps = "1/10";
  std::string scales = "1/3,1/9,1/27";
  std::size_t samples = 5;
  std::size_t depth = 6;
  std::string min_len = "1/20";
  std::size_t n_min = 1;
  std::size_t n_max = 40;
  std::size_t window = 8;
  std::size_t n = 8;
  std::string qs = "100,1000,10000";
  std::string qmax = "10000";
  std::vector<int> only;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

BigInt parse_int(const std::string& s) {
  const BigRational r = parse_rational(s);
  if (r.get_den() != 1) throw InvalidInput("expected an integer, got '" + s + "'");
  return r.get_num();
}

Vec exact_vec(const std::string& spec) {
  const TargetPoint p = parse_point(spec);
  Vec v;
  for (const auto& c : p.coords()) {
    const auto e = c.exact();
    if (!e) throw InvalidInput("point '" + spec + "' must be exact (rat: or quad:)");
    v.push_back(*e);
  }
  return v;
}

std::vector<RationalVec> load_rational_set(const std::string& spec) {
  std::vector<RationalVec> pts;
  if (spec.rfind("builtin:cantor:", 0) == 0) {
    const BigInt depth = parse_int(spec.substr(15));
    if (depth < 0 || depth > 12) throw InvalidInput("Cantor depth must be in 0..12");
    for (auto& r : cantor_grid_members(depth.get_ui())) pts.push_back({r});
    return pts;
  }
  std::ifstream in(spec);
  if (!in) throw InvalidInput("cannot open point set '" + spec + "'");
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    RationalVec p;
    for (const auto& c : split(line, ',')) p.push_back(parse_rational(c));
    if (!pts.empty() && p.size() != pts[0].size()) throw InvalidInput("mixed dimensions in point set");
    pts.push_back(std::move(p));
  }
  return pts;
}

class Runner {
 public:
  Runner(const Common& common, const Args& args, const ExperimentConfig& cfg)
      : c_(common), a_(args), cfg_(cfg) {}

  int run(const std::string& cmd) {
    if (cmd == "cf") return cf();
    if (cmd == "goodpair") return goodpair();
    if (cmd == "progression") return progression();
    if (cmd == "rap-scan") return rap_scan();
    if (cmd == "osc-check") return osc_check();
    if (cmd == "cover") return cover_cmd();
    if (cmd == "member") return member();
    if (cmd == "porosity") return porosity();
    if (cmd == "segment-scan") return segment();
    if (cmd == "cantor-dirichlet") return cantor_dirichlet();
    if (cmd == "extrinsic") return extrinsic();
    if (cmd == "circle-census") return circle_census();
    if (cmd == "accept") return accept();
    throw InvalidInput("unknown command '" + cmd + "'");
  }

 private:
  const Common& c_;
  const Args& a_;
  const ExperimentConfig& cfg_;

  void require(const std::string& v, const char* name) const {
    if (v.empty()) throw InvalidInput(std::string("missing --") + name);
  }

  void json_only() const {
    if (c_.format != "json") throw InvalidInput("this command emits JSON only");
  }

  void emit(const std::string& text) const {
    if (c_.output.empty()) {
      std::cout << text;
      std::cout.flush();
      return;
    }
    std::ofstream out(c_.output, std::ios::binary);
    if (!out) throw InvalidInput("cannot write '" + c_.output + "'");
    out << text;
  }

  void emit_json(const std::string& module, Json result) const {
    Json j;
    j["version"] = kVersion;
    j["config_hash"] = config_hash(cfg_);
    j["command"] = cfg_.command;
    j["seed"] = c_.seed;
    j["module"] = module;
    j["result"] = std::move(result);
    emit(j.dump(2) + "\n");
  }

  std::string csv_header(const std::string& module) const {
    return "# xda " + std::string(kVersion) + " schema " + std::to_string(kCsvSchema) + " module " + module +
           " config_hash " + config_hash(cfg_) + " seed " + std::to_string(c_.seed) + "\n";
  }

  int cf() {
    json_only();
    require(a_.point, "point");
    const TargetPoint x = parse_point(a_.point);
    if (x.dim() != 1) throw InvalidInput("cf needs a scalar point");
    const CFExpansion e = expand(x[0], a_.terms);
    Json conv = Json::array();
    for (const auto& cv : convergents(e.partials)) conv.push_back({{"p", to_json(cv.p)}, {"q", to_json(cv.q)}});
    emit_json("contfrac", {{"partials", to_json(e.partials)},
                           {"convergents", conv},
                           {"certified_at", e.certified_at},
                           {"terminated", e.terminated}});
    return 0;
  }

  GoodPairOptions gp_options() const {
    GoodPairOptions o;
    o.rho = parse_rational(a_.rho);
    o.cap = parse_int(a_.cap);
    o.workers = c_.workers;
    return o;
  }

  int goodpair() {
    json_only();
    require(a_.point, "point");
    const TargetPoint x = parse_point(a_.point);
    const GoodPair g = good_pair_search(x, parse_int(a_.min_q0), gp_options());
    Json j = to_json(g);
    j["verified"] = verify_good_pair(x, g);
    emit_json("dirichlet-lattice", j);
    return 0;
  }

  int progression() {
    json_only();
    require(a_.point, "point");
    const TargetPoint x = parse_point(a_.point);
    const GoodPair g = good_pair_search(x, parse_int(a_.min_q0), gp_options());
    const Progression pr = make_progression(g, a_.imax);
    Json entries = Json::array();
    for (std::size_t i = 0; i < pr.entries.size(); ++i) {
      const ApproxVector& r = pr.entries[i];
      entries.push_back({{"i", i},
                         {"p", to_json(r.p)},
                         {"q", to_json(r.q)},
                         {"quality", to_json(quality(x, r.p, r.q))},
                         {"within_bound", progression_bound_certify(x, r, i)}});
    }
    emit_json("dirichlet-lattice", {{"pair", to_json(g)}, {"entries", entries}});
    return 0;
  }

  int rap_scan() {
    json_only();
    require(a_.set, "set");
    RapSearchOptions o;
    o.C = parse_rational(a_.c);
    o.max_len = a_.max_len;
    o.budget = a_.budget;
    o.workers = c_.workers;
    const RapSearchResult r = longest_rap(load_rational_set(a_.set), o);
    emit_json("rap", to_json(r));
    return r.exhausted ? 0 : static_cast<int>(ExitCode::kBudgetExhausted);
  }

  int osc_check() {
    json_only();
    require(a_.system, "system");
    const IFSystem ifs = load_system(a_.system);
    emit_json("ifs", {{"system", system_to_json(ifs)}, {"osc", to_json(check_osc(ifs))}});
    return 0;
  }

  int cover_cmd() {
    json_only();
    require(a_.system, "system");
    require(a_.center, "center");
    require(a_.radius, "radius");
    const IFSystem ifs = load_system(a_.system);
    const Vec ctr = exact_vec(a_.center);
    const QuadScalar r(parse_rational(a_.radius));
    Vec lo, hi;
    for (const auto& v : ctr) {
      lo.push_back(v - r);
      hi.push_back(v + r);
    }
    emit_json("ifs", to_json(cover(ifs, Polytope::box(lo, hi)), ifs.size()));
    return 0;
  }

  int member() {
    json_only();
    require(a_.system, "system");
    require(a_.point, "point");
    const IFSystem ifs = load_system(a_.system);
    const Vec x = exact_vec(a_.point);
    MembershipOptions o;
    o.max_depth = a_.max_depth;
    o.max_states = a_.max_states;
    const MembershipVerdict v = membership(ifs, x, o);
    Json j = to_json(v, ifs.size());
    if (v.verdict == Verdict::kIn) j["certificate_valid"] = verify_in(ifs, x, v.prefix, v.period);
    if (v.verdict == Verdict::kOut) j["certificate_valid"] = verify_out(ifs, x, v.depth);
    emit_json("ifs", j);
    return 0;
  }

  Line line_of(const IFSystem& ifs) const {
    if (a_.line_point.empty() && a_.line_dir.empty()) return default_line(ifs);
    require(a_.line_point, "line-point");
    require(a_.line_dir, "line-dir");
    return Line::through(exact_vec(a_.line_point), exact_vec(a_.line_dir));
  }

  int porosity() {
    json_only();
    require(a_.system, "system");
    const IFSystem ifs = load_system(a_.system);
    std::vector<BigRational> scales;
    for (const auto& s : split(a_.scales, ',')) scales.push_back(parse_rational(s));
    PorosityOptions o;
    o.samples = a_.samples;
    o.max_depth = a_.max_depth;
    emit_json("ifs", to_json(line_porosity(ifs, line_of(ifs), parse_rational(a_.eps), scales, o)));
    return 0;
  }

  int segment() {
    json_only();
    require(a_.system, "system");
    const IFSystem ifs = load_system(a_.system);
    emit_json("ifs", to_json(segment_scan(ifs, a_.depth, parse_rational(a_.min_len), c_.workers)));
    return 0;
  }

  int cantor_dirichlet() {
    require(a_.point, "point");
    const TargetPoint x = parse_point(a_.point);
    if (x.dim() != 1) throw InvalidInput("cantor-dirichlet needs a scalar point");
    const CantorSearchResult r = extrinsic_search_cantor(x[0], a_.n_min, a_.n_max, a_.window);
    if (c_.format == "json") {
      emit_json("extrinsic", to_json(r));
      return 0;
    }
    std::string out = csv_header("extrinsic");
    out += csv_row({"n", "a_n", "b", "p", "q", "membership", "quality_lo", "quality_hi", "within_bound", "best",
                    "provenance"});
    for (const auto& nr : r.per_n) {
      for (std::size_t k = 0; k < nr.rows.size(); ++k) {
        const CantorRow& row = nr.rows[k];
        out += csv_row({std::to_string(row.n), row.a_n.get_str(), row.b.get_str(), row.p.get_str(),
                        row.q.get_str(), row.out ? "out" : "in", decimal(row.quality.lo(), 12, false),
                        decimal(row.quality.hi(), 12, true), row.within_bound ? "1" : "0",
                        nr.best && *nr.best == k ? "1" : "0",
                        "semiconvergent(" + std::to_string(row.n) + "," + row.b.get_str() + ")"});
      }
    }
    emit(out);
    return 0;
  }

  int extrinsic() {
    require(a_.point, "point");
    require(a_.system, "system");
    const TargetPoint x = parse_point(a_.point);
    const Oracle oracle =
        a_.system == "builtin:cantor" ? Oracle(cantor_oracle) : ifs_oracle(load_system(a_.system));
    std::vector<BigInt> qs;
    for (const auto& s : split(a_.qs, ',')) qs.push_back(parse_int(s));
    const GeneralSearchResult r = extrinsic_search_general(x, oracle, a_.n, qs, gp_options());
    if (c_.format == "json") {
      emit_json("extrinsic", to_json(r));
    } else {
      std::string out = csv_header("extrinsic");
      out += csv_row({"min_q0", "i", "p", "q", "quality_lo", "quality_hi", "within_bound", "provenance"});
      for (const auto& w : r.witnesses) {
        std::string p;
        for (std::size_t j = 0; j < w.r.p.size(); ++j) p += (j ? " " : "") + w.r.p[j].get_str();
        out += csv_row({w.min_q0.get_str(), std::to_string(w.index), p, w.r.q.get_str(),
                        decimal(w.quality.lo(), 12, false), decimal(w.quality.hi(), 12, true),
                        w.within_progression_bound ? "1" : "0",
                        "progression(" + w.pair.r0.to_string() + "+i" + w.pair.rinf.to_string() + ")"});
      }
      emit(out);
    }
    return r.window_exhausted.empty() ? 0 : static_cast<int>(ExitCode::kBudgetExhausted);
  }

  int circle_census() {
    require(a_.point, "point");
    const CensusResult r = psi_census(parse_point(a_.point), parse_rational(a_.c), parse_int(a_.qmax));
    if (c_.format == "json") {
      emit_json("extrinsic", to_json(r));
      return 0;
    }
    std::string out = csv_header("extrinsic");
    out += csv_row({"p1", "p2", "q", "class", "beyond_threshold", "provenance"});
    for (const auto& h : r.hits) {
      out += csv_row({h.p[0].get_str(), h.p[1].get_str(), h.q.get_str(), h.intrinsic ? "intrinsic" : "extrinsic",
                      h.beyond_threshold ? "1" : "0", "census(q=" + h.q.get_str() + ")"});
    }
    emit(out);
    return 0;
  }

  int accept() {
    acceptance::Options o;
    o.workers = c_.workers;
    if (c_.seed != 0) o.seed = c_.seed;
    acceptance::Suite suite(o);
    std::vector<int> ids = a_.only;
    if (ids.empty()) {
      for (int i = 1; i <= acceptance::Suite::kCount; ++i) ids.push_back(i);
    }
    bool all = true;
    std::string out = c_.format == "csv" ? csv_header("acceptance") + csv_row({"id", "name", "passed", "seconds", "detail"})
                                         : std::string();
    Json rows = Json::array();
    for (int id : ids) {
      if (id < 1 || id > acceptance::Suite::kCount) throw InvalidInput("no criterion " + std::to_string(id));
      const acceptance::Outcome r = suite.run(id);
      all = all && r.passed;
      std::fprintf(stderr, "[%s] criterion %d: %s (%.2fs) %s\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                   r.seconds, r.detail.c_str());
      if (c_.format == "csv") {
        out += csv_row({std::to_string(r.id), r.name, r.passed ? "1" : "0", std::to_string(r.seconds), r.detail});
      } else {
        rows.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
      }
    }
    if (c_.format == "csv") {
      emit(out);
    } else {
      emit_json("acceptance", {{"passed", all}, {"criteria", rows}});
    }
    return all ? 0 : 1;
  }
};

// Flags a config file may set, by config parameter name.
const char* const kParamFlags[] = {"terms", "min-q0", "cap", "rho", "imax", "C", "c", "max-len", "budget",
                                   "center", "radius", "max-depth", "max-states", "line-point", "line-dir",
                                   "eps", "scales", "samples", "depth", "min-len", "n-min", "n-max", "window",
                                   "N", "Q", "qmax", "system", "set", "only"};

int main_impl(int argc, char** argv) {
  CLI::App app{"Extrinsic Diophantine approximation toolkit"};
  app.require_subcommand(1);
  Common common;
  Args args;
  app.set_version_flag("--version", std::string(kVersion));

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "JSON experiment config");
    sub->add_option("--seed", common.seed, "Seed recorded in the header (and used by randomized checks)");
    sub->add_option("--workers", common.workers, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", common.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--output", common.output, "Output file (default: stdout)");
  };
  auto sub = [&](const std::string& name, const std::string& desc) {
    CLI::App* s = app.add_subcommand(name, desc);
    add_common(s);
    return s;
  };

  CLI::App* s = sub("cf", "Continued fraction expansion");
  s->add_option("--point", args.point);
  s->add_option("--terms", args.terms);

  for (const char* name : {"goodpair", "progression"}) {
    s = sub(name, name == std::string("goodpair") ? "Good pair search" : "Progression r0 + i rInf");
    s->add_option("--point", args.point);
    s->add_option("--min-q0", args.min_q0);
    s->add_option("--cap", args.cap);
    s->add_option("--rho", args.rho);
    if (name == std::string("progression")) s->add_option("--imax", args.imax);
  }

  s = sub("rap-scan", "Longest roughly arithmetic progression in a finite set");
  s->add_option("--set", args.set, "builtin:cantor:<depth> or a file of rational points");
  s->add_option("--C", args.c);
  s->add_option("--max-len", args.max_len);
  s->add_option("--budget", args.budget);

  s = sub("osc-check", "Open set condition");
  s->add_option("--system", args.system);

  s = sub("cover", "Cylinder cover of a box");
  s->add_option("--system", args.system);
  s->add_option("--center", args.center);
  s->add_option("--radius", args.radius);

  s = sub("member", "Attractor membership");
  s->add_option("--system", args.system);
  s->add_option("--point", args.point);
  s->add_option("--max-depth", args.max_depth);
  s->add_option("--max-states", args.max_states);

  s = sub("porosity", "Porosity relative to a line");
  s->add_option("--system", args.system);
  s->add_option("--line-point", args.line_point);
  s->add_option("--line-dir", args.line_dir);
  s->add_option("--eps", args.eps);
  s->add_option("--scales", args.scales);
  s->add_option("--samples", args.samples);
  s->add_option("--max-depth", args.max_depth);

  s = sub("segment-scan", "Search for line segments in the hull union");
  s->add_option("--system", args.system);
  s->add_option("--depth", args.depth);
  s->add_option("--min-len", args.min_len);

  s = sub("cantor-dirichlet", "Semiconvergent extrinsic search on the Cantor set");
  s->add_option("--point", args.point);
  s->add_option("--n-min", args.n_min);
  s->add_option("--n-max", args.n_max);
  s->add_option("--window", args.window);

  s = sub("extrinsic", "Good-pair progression extrinsic search");
  s->add_option("--point", args.point);
  s->add_option("--system", args.system);
  s->add_option("--N", args.n);
  s->add_option("--Q", args.qs, "Comma-separated minimum denominators");
  s->add_option("--cap", args.cap);
  s->add_option("--rho", args.rho);

  s = sub("circle-census", "psi-approximation census on the unit circle");
  s->add_option("--point", args.point);
  s->add_option("--c", args.c);
  s->add_option("--qmax", args.qmax);

  s = sub("accept", "Run the acceptance suite");
  s->add_option("--only", args.only, "Criterion ids")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(ExitCode::kInvalidConfig);
  }

  CLI::App* chosen = app.get_subcommands().front();
  ExperimentConfig cfg;
  if (!common.config.empty()) {
    cfg = load_config(common.config);
    if (cfg.command != chosen->get_name()) {
      throw InvalidInput("config is for '" + cfg.command + "', not '" + chosen->get_name() + "'");
    }
    // Re-parse with the config's values as flags; explicit flags are not mixed in.
    std::vector<std::string> words = {argv[0], cfg.command};
    if (!cfg.points.empty()) {
      std::string joined;
      for (std::size_t i = 0; i < cfg.points.size(); ++i) joined += (i ? "," : "") + cfg.points[i];
      words.insert(words.end(), {"--point", joined});
    }
    for (const auto& [k, v] : cfg.params) {
      if (std::find(std::begin(kParamFlags), std::end(kParamFlags), k) == std::end(kParamFlags)) {
        throw InvalidInput("unknown config parameter '" + k + "'");
      }
      const std::string flag = k == "c" && cfg.command == "rap-scan" ? "C" : k;
      words.insert(words.end(), {"--" + flag, v});
    }
    words.insert(words.end(), {"--seed", std::to_string(cfg.seed), "--out", cfg.format});
    if (!cfg.output.empty()) words.insert(words.end(), {"--output", cfg.output});
    if (common.workers != default_workers()) words.insert(words.end(), {"--workers", std::to_string(common.workers)});
    common = Common{};
    args = Args{};
    std::vector<char*> ptrs;
    for (auto& w : words) ptrs.push_back(w.data());
    try {
      app.parse(static_cast<int>(ptrs.size()), ptrs.data());
    } catch (const CLI::ParseError& e) {
      std::cerr << "invalid config: " << e.what() << "\n";
      return static_cast<int>(ExitCode::kInvalidConfig);
    }
  } else {
    cfg.command = chosen->get_name();
    for (const CLI::Option* opt : chosen->get_options()) {
      if (opt->count() == 0) continue;
      const std::string name = opt->get_name(false, true);
      std::string key = name.rfind("--", 0) == 0 ? name.substr(2) : name;
      if (key == "config" || key == "seed" || key == "workers" || key == "out" || key == "output" ||
          key == "help") {
        continue;
      }
      const auto& res = opt->results();
      std::string value;
      for (std::size_t i = 0; i < res.size(); ++i) value += (i ? "," : "") + res[i];
      if (key == "point") {
        cfg.points = split(value, ',');
      } else {
        cfg.params[key] = value;
      }
    }
    cfg.seed = common.seed;
    cfg.format = common.format;
    cfg.output = common.output;
  }

  Runner runner(common, args, cfg);
  return runner.run(cfg.command);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return main_impl(argc, argv);
  } catch (const xda::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return static_cast<int>(xda::ExitCode::kInvariantViolation);
  }
}
