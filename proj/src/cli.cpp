#include "alt/cli.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "alt/axioms.hpp"
#include "alt/construct.hpp"
#include "alt/errors.hpp"
#include "alt/gossen.hpp"
#include "alt/sampling.hpp"
#include "alt/smooth.hpp"
#include "alt/zoo.hpp"

namespace alt::cli {
namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

constexpr double kAffineResidualLimit = 5e-3;

// Bad input detected before any computation; maps to exit code 2.
struct ConfigError : Error {
  using Error::Error;
};

struct Flags {
  std::string config;
  std::string oracle;
  std::string oracle_file;
  std::string out;
  std::vector<double> lower, upper, anchors, second_anchors, segment_start, segment_end, schedule;
  std::vector<int> pair;
  std::uint64_t seed = 0;
  std::size_t trials = 0, grid = 0, witness_cap = 0, debreu_trials = 0;
  double eps_eq = 0, tol_t = 0, b = 0, h = 0, alep_h = 0, threshold = 0;
  int depth = 0, dyadic_depth = 0;
  unsigned workers = 0;
  bool strict = false, full_interval = false, use_path = false;
  std::string source;
};

struct Resolved {
  json cfg;
  std::optional<AltOracle> oracle;
  std::optional<UtilitySpec> utility;
  BoxDomain domain;
  fs::path out;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json_file(const std::string& path) {
  try {
    return json::parse(slurp(path));
  } catch (const json::parse_error& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream o(path, std::ios::binary);
  if (!o) throw ConfigError("cannot write '" + path.string() + "'");
  o << text;
}

void write_report(const Resolved& r, const std::string& name, const std::string& command, const json& body) {
  const json doc = {{"command", command}, {"config", r.cfg}, {"report", body}};
  write_file(r.out / name, doc.dump(2) + "\n");
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// --- configuration ---------------------------------------------------------

void merge_config(json& cfg, const json& doc, const std::string& origin) {
  if (!doc.is_object()) throw ConfigError(origin + ": configuration must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!cfg.contains(key)) throw ConfigError(origin + ": unknown configuration key '" + key + "'");
    cfg[key] = value;
  }
}

template <class T>
T get(const json& cfg, const char* key) {
  try {
    return cfg.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("configuration key '") + key + "' has the wrong type");
  }
}

template <class T>
std::optional<T> get_opt(const json& cfg, const char* key) {
  if (cfg.at(key).is_null()) return std::nullopt;
  return get<T>(cfg, key);
}

void validate(const json& cfg) {
  auto positive = [&](const char* key) {
    const auto v = get_opt<double>(cfg, key);
    if (v && !(*v > 0.0)) throw ConfigError(std::string(key) + " must be > 0");
  };
  for (const char* k : {"eps_eq", "tol_t", "h", "alep_h", "b"}) positive(k);
  if (get<double>(cfg, "threshold") < 0.0) throw ConfigError("threshold must be >= 0");
  for (const char* k : {"trials", "debreu_trials", "grid", "workers"}) {
    if (get<long long>(cfg, k) < 1) throw ConfigError(std::string(k) + " must be >= 1");
  }
  const int depth = get<int>(cfg, "depth");
  if (depth < 0 || depth > 24) throw ConfigError("depth must be in [0, 24]");
  const int dd = get<int>(cfg, "dyadic_depth");
  if (dd < 1 || dd > 20) throw ConfigError("dyadic_depth must be in [1, 20]");
  for (const char* k : {"anchors", "second_anchors"}) {
    const auto a = get_opt<std::vector<double>>(cfg, k);
    if (a && (a->size() != 2 || !((*a)[0] >= 0.0 && (*a)[0] < (*a)[1] && (*a)[1] <= 1.0))) {
      throw ConfigError(std::string(k) + " must be two parameters 0 <= y < x <= 1");
    }
  }
  const auto src = get<std::string>(cfg, "source");
  if (src != "analytic" && src != "reconstruction") throw ConfigError("source must be 'analytic' or 'reconstruction'");
  if (src == "reconstruction" && depth < kMinAlepDepth) {
    throw ConfigError("alep on a reconstruction needs depth >= " + std::to_string(kMinAlepDepth));
  }
  const auto sched = get_opt<std::vector<double>>(cfg, "schedule");
  if (sched) {
    if (sched->size() < 2) throw ConfigError("schedule needs at least two steps");
    for (std::size_t i = 0; i < sched->size(); ++i) {
      if (!((*sched)[i] > 0.0) || (i > 0 && !((*sched)[i] < (*sched)[i - 1]))) {
        throw ConfigError("schedule must be positive and strictly decreasing");
      }
    }
  }
}

BoxDomain domain_from(const json& d, const char* what) {
  try {
    return BoxDomain(Point(d.at("lower").get<std::vector<double>>()), Point(d.at("upper").get<std::vector<double>>()));
  } catch (const json::exception&) {
    throw ConfigError(std::string(what) + " needs numeric 'lower' and 'upper' arrays");
  } catch (const Error& e) {
    throw ConfigError(std::string(what) + ": " + e.what());
  }
}

Resolved resolve(json cfg) {
  validate(cfg);
  Resolved r;
  const auto name = get_opt<std::string>(cfg, "oracle");
  const auto file = get_opt<std::string>(cfg, "oracle_file");
  if (name.has_value() == file.has_value()) throw ConfigError("give exactly one of --oracle or --oracle-file");

  std::optional<IntensitySpec> intensity;
  if (file) {
    if (!fs::exists(*file)) throw ConfigError("oracle file '" + *file + "' does not exist");
    try {
      r.utility = utility_from_json(parse_json_file(*file));
    } catch (const ParseError& e) {
      throw ConfigError(std::string("oracle file: ") + e.what());
    }
  } else if (auto u = find_utility(*name)) {
    r.utility = std::move(u);
  } else if (auto g = find_intensity(*name)) {
    intensity = std::move(g);
  } else {
    throw ConfigError("unknown oracle '" + *name + "' (see the catalog command)");
  }

  const std::size_t n = r.utility ? r.utility->dimension : intensity->dimension;
  r.domain = cfg.at("domain").is_null() ? (r.utility ? r.utility->domain : intensity->domain)
                                        : domain_from(cfg.at("domain"), "domain");
  if (r.domain.dimension() != n) {
    throw ConfigError("domain has dimension " + std::to_string(r.domain.dimension()) + " but the oracle has " +
                      std::to_string(n));
  }
  const auto eps = get_opt<double>(cfg, "eps_eq");
  r.oracle = r.utility ? make_difference_oracle(*r.utility, r.domain, eps)
                       : make_intensity_oracle(*intensity, r.domain, eps);

  const auto pair = get<std::vector<int>>(cfg, "pair");
  const bool pair_ok = pair.size() == 2 && pair[0] != pair[1] && pair[0] >= 1 && pair[1] >= 1 &&
                       pair[0] <= static_cast<int>(n) && pair[1] <= static_cast<int>(n);
  if (!pair_ok && get<std::string>(cfg, "command") == "alep") {
    throw ConfigError("pair must name two distinct coordinates in 1.." + std::to_string(n));
  }
  if (!cfg.at("segment").is_null()) {
    const Point a(get<std::vector<double>>(cfg.at("segment"), "start"));
    const Point b(get<std::vector<double>>(cfg.at("segment"), "end"));
    if (a.size() != n || b.size() != n) throw ConfigError("segment endpoints must match the oracle dimension");
    if (!r.domain.contains(a) || !r.domain.contains(b)) throw ConfigError("segment endpoints must lie in the domain");
  }

  // Echo the effective values, not the placeholders.
  cfg["domain"] = {{"lower", r.domain.lower().coords()}, {"upper", r.domain.upper().coords()}};
  cfg["eps_eq"] = r.oracle->equality_tolerance();
  r.out = get<std::string>(cfg, "out");
  r.cfg = std::move(cfg);
  std::error_code ec;
  fs::create_directories(r.out, ec);
  if (ec) throw ConfigError("cannot create output directory '" + r.out.string() + "': " + ec.message());
  return r;
}

unsigned workers_of(const Resolved& r) { return get<unsigned>(r.cfg, "workers"); }
std::size_t trials_of(const Resolved& r) { return get<std::size_t>(r.cfg, "trials"); }
std::uint64_t seed_of(const Resolved& r) { return get<std::uint64_t>(r.cfg, "seed"); }

ReconstructionOptions reconstruction_options(const Resolved& r, const std::vector<double>& anchors) {
  ReconstructionOptions o;
  o.depth = get<int>(r.cfg, "depth");
  o.tol_t = get<double>(r.cfg, "tol_t");
  o.anchors = Anchors{anchors[0], anchors[1]};
  if (!r.cfg.at("segment").is_null()) {
    o.reference = Segment(Point(get<std::vector<double>>(r.cfg["segment"], "start")),
                          Point(get<std::vector<double>>(r.cfg["segment"], "end")));
  } else if (get<bool>(r.cfg, "use_increasing_path")) {
    if (!r.utility || !r.utility->increasing_path) {
      throw ConfigError("--use-path: the oracle has no catalogued increasing path");
    }
    o.reference = r.utility->increasing_path;
  }
  return o;
}

// --- commands --------------------------------------------------------------

int cmd_verify(const Resolved& r, std::ostream& out) {
  const AltOracle& o = *r.oracle;
  const Sampler sampler(r.domain, seed_of(r));
  CheckOptions opts;
  opts.trials = trials_of(r);
  opts.workers = workers_of(r);
  opts.witness_cap = get<std::size_t>(r.cfg, "witness_cap");
  const std::vector<AxiomReport> reports = {check_oracle_contract(o, sampler, opts),
                                            check_consistency(o, sampler, opts),
                                            check_crossover(o, sampler, opts),
                                            check_second_consistency(o, sampler, opts),
                                            check_continuity_proxy(o, sampler, opts),
                                            check_monotonicity(o, sampler, opts)};
  bool all = true;
  json summary = json::object();
  for (const auto& rep : reports) {
    write_report(r, "verify_" + rep.axiom + ".json", "verify", to_json(rep));
    all = all && rep.passed();
    summary[rep.axiom] = rep.passed() ? (rep.proxy ? "pass (proxy)" : "pass") : "fail";
    out << rep.axiom << ": " << (rep.passed() ? "pass" : "FAIL") << (rep.proxy ? " (proxy)" : "") << "  violations="
        << rep.violation_count << "/" << rep.trials << (rep.note.empty() ? "" : "  note: " + rep.note) << "\n";
  }
  summary["passed"] = all;
  write_report(r, "verify_summary.json", "verify", summary);
  out << (all ? "all axioms pass" : "axiom violations found") << "\n";
  return all ? kPass : kFail;
}

int cmd_reconstruct(const Resolved& r, std::ostream& out) {
  const AltOracle& o = *r.oracle;
  const auto opts = reconstruction_options(r, get<std::vector<double>>(r.cfg, "anchors"));
  const auto recon = reconstruct(o, opts);
  const Sampler sampler(r.domain, seed_of(r));
  const auto rc = check_representation(recon, sampler, trials_of(r), workers_of(r));
  bool ok = rc.quad_mismatches == 0 && rc.pair_mismatches == 0;

  json body = {{"utility", recon.to_json()},
               {"representation",
                {{"quadruples", rc.quadruples},
                 {"quad_mismatches", rc.quad_mismatches},
                 {"quad_inside_dead_band", rc.quad_inside_band},
                 {"pairs", rc.pairs},
                 {"pair_mismatches", rc.pair_mismatches},
                 {"dead_band_quad", rc.dead_band_quad},
                 {"dead_band_pair", rc.dead_band_pair}}}};
  out << "ladder depth " << recon.depth() << ", " << recon.ladder().rung_count(recon.depth())
      << " rungs at the deepest level, " << recon.construction_calls() << " oracle calls\n";
  out << "representation mismatches: " << rc.quad_mismatches << " quadruples, " << rc.pair_mismatches
      << " pairs (of " << rc.quadruples << ")\n";

  if (const auto second = get_opt<std::vector<double>>(r.cfg, "second_anchors")) {
    const auto first = get<std::vector<double>>(r.cfg, "anchors");
    const auto fit = verify_affine_uniqueness(o, Anchors{first[0], first[1]}, Anchors{(*second)[0], (*second)[1]},
                                              opts, Sampler(r.domain, mix_seed(seed_of(r), 1)), trials_of(r));
    const bool fit_ok = fit.alpha > 0.0 && fit.max_residual < kAffineResidualLimit;
    ok = ok && fit_ok;
    body["affine_uniqueness"] = {{"alpha", fit.alpha},
                                 {"beta", fit.beta},
                                 {"max_residual", fit.max_residual},
                                 {"samples", fit.samples},
                                 {"residual_limit", kAffineResidualLimit},
                                 {"passed", fit_ok}};
    out << "affine fit: alpha=" << fit.alpha << " beta=" << fit.beta << " max residual=" << fit.max_residual
        << (fit_ok ? "" : "  (above limit)") << "\n";
  }
  body["passed"] = ok;
  write_report(r, "reconstruction.json", "reconstruct", body);

  std::string csv;
  for (std::size_t k = 0; k < r.domain.dimension(); ++k) csv += "x" + std::to_string(k + 1) + ",";
  csv += "value\n";
  for (const auto& p : grid_points(r.domain, get<std::size_t>(r.cfg, "grid"), 0.0)) {
    for (double v : p) csv += fmt(v) + ",";
    csv += fmt(recon(p)) + "\n";
  }
  write_file(r.out / "reconstruction_grid.csv", csv);
  return ok ? kPass : kFail;
}

int cmd_concavity(const Resolved& r, std::ostream& out) {
  const AltOracle& o = *r.oracle;
  const Sampler sampler(r.domain, seed_of(r));
  const bool strict = get<bool>(r.cfg, "strict");
  GossenOptions g;
  g.trials = trials_of(r);
  g.workers = workers_of(r);
  g.witness_cap = get<std::size_t>(r.cfg, "witness_cap");
  g.strict = strict;
  const auto pair_form = check_ggfl(o, sampler, g);
  const auto incr_form = check_ggfl_increments(o, sampler, g);
  auto law_ok = [&](const ConcavityVerdict& v) {
    return strict ? v.verdict == LawVerdict::HoldsStrictly : v.holds();
  };
  bool ok = law_ok(pair_form) && law_ok(incr_form);
  out << "generalized Gossen law (pairs): " << to_string(pair_form.verdict) << "  violations="
      << pair_form.violation_count << "/" << pair_form.trials << "\n";
  out << "generalized Gossen law (increments): " << to_string(incr_form.verdict) << "  violations="
      << incr_form.violation_count << "/" << incr_form.trials << "\n";
  if (!pair_form.witnesses.empty()) {
    const auto& w = pair_form.witnesses.front();
    out << "witness: x=" << to_string(w.x) << " y=" << to_string(w.y) << " z=" << to_string(w.z) << " -> "
        << w.reading << "\n";
  }

  json body = {{"ggfl", to_json(pair_form)}, {"ggfl_increments", to_json(incr_form)}};
  try {
    const auto recon = reconstruct(o, reconstruction_options(r, get<std::vector<double>>(r.cfg, "anchors")));
    MidpointOptions m;
    m.trials = g.trials;
    m.workers = g.workers;
    m.witness_cap = g.witness_cap;
    m.tol = 2.0 * recon.interpolation_budget();
    m.full_interval = get<bool>(r.cfg, "full_interval");
    m.dyadic_depth = get<int>(r.cfg, "dyadic_depth");
    const auto mc = check_midpoint_concavity([&](const Point& x) { return recon(x); }, sampler, m);
    body["reconstruction"] = to_json(mc);
    // The law on the oracle and concavity of the reconstruction must agree.
    const bool agree = pair_form.holds() == mc.holds();
    body["agree"] = agree;
    ok = ok && mc.holds();
    out << "reconstruction midpoint concavity: " << to_string(mc.verdict) << "  violations=" << mc.violation_count
        << "/" << mc.trials << (agree ? "" : "  (disagrees with the law)") << "\n";
  } catch (const PreconditionError& e) {
    body["reconstruction"] = nullptr;
    body["note"] = std::string("reconstruction skipped: ") + e.what();
    out << "reconstruction skipped: " << e.what() << "\n";
  }
  body["passed"] = ok;
  write_report(r, "concavity.json", "concavity", body);
  return ok ? kPass : kFail;
}

int cmd_smoothness(const Resolved& r, std::ostream& out) {
  const AltOracle& o = *r.oracle;
  const double c_lo = r.domain.diagonal_scale_min();
  const double c_hi = r.domain.diagonal_scale_max();
  double b = 0.0;
  if (const auto given = get_opt<double>(r.cfg, "b")) {
    b = *given;
  } else {
    // b = 1 as in the unit diagonal, unless the default schedule would leave the box.
    b = (1.0 - 1.0 / 16.0 >= c_lo && 1.0 + 1.0 / 16.0 <= c_hi) ? 1.0 : 0.5 * (c_lo + c_hi);
  }
  LineSmoothnessOptions lo;
  if (const auto s = get_opt<std::vector<double>>(r.cfg, "schedule")) lo.schedule = *s;
  const double a_max = lo.schedule.empty() ? b / 16.0 : lo.schedule.front();
  if (!(b - a_max >= c_lo && b + a_max <= c_hi && a_max < b)) {
    throw ConfigError("b=" + fmt(b) + " leaves no room for the step schedule on the diagonal inside the domain");
  }
  const auto line = line_smoothness_limit(o, b, lo);

  DebreuOptions d;
  d.trials = get<std::size_t>(r.cfg, "debreu_trials");
  d.workers = workers_of(r);
  d.h = get<double>(r.cfg, "h");
  d.witness_cap = get<std::size_t>(r.cfg, "witness_cap");
  const auto proxy = debreu_smoothness_proxy(o, Sampler(r.domain, seed_of(r)), d);

  const bool ok = line.verdict == LineVerdict::LineSmooth && proxy.passed();
  write_report(r, "smoothness.json", "smoothness",
               {{"line_smoothness", to_json(line)}, {"debreu_proxy", to_json(proxy)}, {"passed", ok}});
  write_file(r.out / "smoothness_quotients.csv", to_csv(line));
  out << "line smoothness at b=" << b << ": limit of (b-f(a,b))/a = " << line.limit << " +- " << line.uncertainty
      << "  -> " << to_string(line.verdict) << "\n";
  out << "calibration smoothness proxy: " << (proxy.passed() ? "pass" : "FAIL") << "  rough samples "
      << proxy.rough_samples << "/" << proxy.trials << "\n";
  return ok ? kPass : kFail;
}

int cmd_alep(const Resolved& r, std::ostream& out) {
  const auto pair = get<std::vector<int>>(r.cfg, "pair");
  const auto points = grid_points(r.domain, get<std::size_t>(r.cfg, "grid"));
  AlepOptions a;
  a.h = get<double>(r.cfg, "alep_h");
  a.threshold = get<double>(r.cfg, "threshold");
  std::vector<AlepClassification> rows;
  const auto i = static_cast<std::size_t>(pair[0] - 1);
  const auto j = static_cast<std::size_t>(pair[1] - 1);
  if (get<std::string>(r.cfg, "source") == "analytic") {
    if (!r.utility) throw ConfigError("alep needs a utility: this oracle only has an intensity function");
    rows = alep_classify(r.utility->value, r.domain, points, i, j, a);
  } else {
    const auto recon = reconstruct(*r.oracle, reconstruction_options(r, get<std::vector<double>>(r.cfg, "anchors")));
    rows = alep_classify(recon, points, i, j, a);
  }
  std::map<std::string, std::size_t> counts;
  json items = json::array();
  for (const auto& c : rows) {
    ++counts[std::string(to_string(c.label))];
    items.push_back(to_json(c));
  }
  const bool ok = counts["indeterminate"] == 0;
  write_report(r, "alep.json", "alep", {{"classifications", items}, {"counts", counts}, {"passed", ok}});
  write_file(r.out / "alep.csv", to_csv(rows));
  for (const auto& [label, n] : counts) {
    if (n > 0) out << label << ": " << n << "/" << rows.size() << "\n";
  }
  return ok ? kPass : kFail;
}

int cmd_catalog(std::ostream& out) {
  json u = json::array(), g = json::array();
  for (const auto& s : catalog()) u.push_back(describe(s));
  for (const auto& s : intensity_catalog()) g.push_back(describe(s));
  out << json{{"utilities", u}, {"intensities", g}}.dump(2) << "\n";
  return kPass;
}

}  // namespace

json default_config() {
  return {{"command", nullptr},
          {"oracle", nullptr},
          {"oracle_file", nullptr},
          {"domain", nullptr},
          {"seed", 1},
          {"trials", 1000},
          {"eps_eq", nullptr},
          {"tol_t", 1e-12},
          {"depth", 10},
          {"out", "altkit-out"},
          {"workers", default_workers()},
          {"witness_cap", 10},
          {"strict", false},
          {"full_interval", false},
          {"dyadic_depth", 6},
          {"b", nullptr},
          {"schedule", nullptr},
          {"h", 1e-4},
          {"debreu_trials", 64},
          {"grid", 11},
          {"anchors", {0.0, 1.0}},
          {"second_anchors", nullptr},
          {"segment", nullptr},
          {"use_increasing_path", false},
          {"pair", {1, 2}},
          {"alep_h", 1e-3},
          {"threshold", 1e-6},
          {"source", "analytic"}};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Intensity-comparison toolkit: axiom checks, utility reconstruction, concavity and smoothness"};
  app.require_subcommand(1);
  Flags f;
  std::map<std::string, std::vector<CLI::Option*>> given;
  auto count = [&](const std::string& key) {
    std::size_t c = 0;
    for (auto* o : given[key]) c += o->count();
    return c;
  };

  auto common = [&](CLI::App* sub) {
    given["config"].push_back(
        sub->add_option("--config", f.config, "JSON run configuration")->check(CLI::ExistingFile));
    given["oracle"].push_back(sub->add_option("--oracle", f.oracle, "catalog oracle name"));
    given["oracle_file"].push_back(sub->add_option("--oracle-file", f.oracle_file, "JSON expression utility"));
    given["lower"].push_back(sub->add_option("--lower", f.lower, "domain lower corner"));
    given["upper"].push_back(sub->add_option("--upper", f.upper, "domain upper corner"));
    given["seed"].push_back(sub->add_option("--seed", f.seed, "sampling seed"));
    given["trials"].push_back(sub->add_option("--trials", f.trials, "samples per check"));
    given["eps_eq"].push_back(sub->add_option("--eps-eq", f.eps_eq, "oracle equality tolerance"));
    given["tol_t"].push_back(sub->add_option("--tol-t", f.tol_t, "bisection tolerance on segment parameters"));
    given["depth"].push_back(sub->add_option("--depth", f.depth, "ladder depth K"));
    given["out"].push_back(sub->add_option("--out", f.out, "output directory"));
    given["workers"].push_back(sub->add_option("--workers", f.workers, "worker threads"));
    given["witness_cap"].push_back(sub->add_option("--witness-cap", f.witness_cap, "witnesses kept per report"));
    given["anchors"].push_back(sub->add_option("--anchors", f.anchors, "reference parameters of value 0 and 1")
                           ->expected(2));
    given["segment_start"].push_back(
        sub->add_option("--segment-start", f.segment_start, "custom reference path start"));
    given["segment_end"].push_back(sub->add_option("--segment-end", f.segment_end, "custom reference path end"));
    given["use_increasing_path"].push_back(
        sub->add_flag("--use-path", f.use_path, "reconstruct along the catalogued path"));
  };

  auto* verify = app.add_subcommand("verify", "check the axioms on sampled tuples");
  auto* recon = app.add_subcommand("reconstruct", "build the dyadic ladder and reconstructed utility");
  auto* conc = app.add_subcommand("concavity", "generalized Gossen law and midpoint concavity");
  auto* smooth = app.add_subcommand("smoothness", "line smoothness and the calibration smoothness proxy");
  auto* alep = app.add_subcommand("alep", "substitute / complement classification on a grid");
  app.add_subcommand("catalog", "list built-in oracles");
  for (auto* sub : {verify, recon, conc, smooth, alep}) common(sub);

  given["second_anchors"].push_back(
      recon->add_option("--second-anchors", f.second_anchors, "anchors for the affine check")->expected(2));
  given["grid"].push_back(recon->add_option("--grid", f.grid, "grid points per axis for the CSV table"));
  given["strict"].push_back(conc->add_flag("--strict", f.strict, "require the strict law"));
  given["full_interval"].push_back(
      conc->add_flag("--full", f.full_interval, "dyadic sweep instead of the midpoint only"));
  given["dyadic_depth"].push_back(conc->add_option("--dyadic-depth", f.dyadic_depth, "sweep depth for --full"));
  given["b"].push_back(smooth->add_option("--b", f.b, "diagonal scale b"));
  given["schedule"].push_back(smooth->add_option("--schedule", f.schedule, "decreasing step sizes a_k"));
  given["h"].push_back(smooth->add_option("--step", f.h, "proxy step, fraction of the largest extent"));
  given["debreu_trials"].push_back(smooth->add_option("--debreu-trials", f.debreu_trials, "proxy sample count"));
  given["pair"].push_back(alep->add_option("--pair", f.pair, "coordinate pair, 1-based")->expected(2));
  given["alep_grid"].push_back(alep->add_option("--grid", f.grid, "grid points per axis"));
  given["alep_h"].push_back(alep->add_option("--step", f.alep_h, "finite-difference step"));
  given["threshold"].push_back(alep->add_option("--threshold", f.threshold, "dead band around zero"));
  given["source"].push_back(alep->add_option("--source", f.source, "analytic | reconstruction"));

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kConfigError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  if (command == "catalog") return cmd_catalog(out);

  try {
    json cfg = default_config();
    if (!f.config.empty()) merge_config(cfg, parse_json_file(f.config), f.config);
    auto set = [&](const std::string& flag, const char* key, const json& value) {
      if (count(flag) > 0) cfg[key] = value;
    };
    cfg["command"] = command;
    set("oracle", "oracle", f.oracle);
    set("oracle_file", "oracle_file", f.oracle_file);
    set("seed", "seed", f.seed);
    set("trials", "trials", f.trials);
    set("eps_eq", "eps_eq", f.eps_eq);
    set("tol_t", "tol_t", f.tol_t);
    set("depth", "depth", f.depth);
    set("out", "out", f.out);
    set("workers", "workers", f.workers);
    set("witness_cap", "witness_cap", f.witness_cap);
    set("anchors", "anchors", f.anchors);
    set("use_increasing_path", "use_increasing_path", f.use_path);
    set("second_anchors", "second_anchors", f.second_anchors);
    set("grid", "grid", f.grid);
    set("alep_grid", "grid", f.grid);
    set("strict", "strict", f.strict);
    set("full_interval", "full_interval", f.full_interval);
    set("dyadic_depth", "dyadic_depth", f.dyadic_depth);
    set("b", "b", f.b);
    set("schedule", "schedule", f.schedule);
    set("h", "h", f.h);
    set("debreu_trials", "debreu_trials", f.debreu_trials);
    set("pair", "pair", f.pair);
    set("alep_h", "alep_h", f.alep_h);
    set("threshold", "threshold", f.threshold);
    set("source", "source", f.source);
    if (count("lower") > 0 || count("upper") > 0) {
      if (count("lower") == 0 || count("upper") == 0) {
        throw ConfigError("--lower and --upper must be given together");
      }
      cfg["domain"] = {{"lower", f.lower}, {"upper", f.upper}};
    }
    if (count("segment_start") > 0 || count("segment_end") > 0) {
      if (count("segment_start") == 0 || count("segment_end") == 0) {
        throw ConfigError("--segment-start and --segment-end must be given together");
      }
      cfg["segment"] = {{"start", f.segment_start}, {"end", f.segment_end}};
    }

    const Resolved r = resolve(std::move(cfg));
    try {
      if (command == "verify") return cmd_verify(r, out);
      if (command == "reconstruct") return cmd_reconstruct(r, out);
      if (command == "concavity") return cmd_concavity(r, out);
      if (command == "smoothness") return cmd_smoothness(r, out);
      if (command == "alep") return cmd_alep(r, out);
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return kFail;
    }
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const Error& e) {
    err << "configuration error: " << e.what() << "\n";
    return kConfigError;
  }
  return kConfigError;
}

}  // namespace alt::cli
