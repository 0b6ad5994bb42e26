#include "alt/axioms.hpp"

#include <array>
#include <cmath>
#include <functional>

#include "alt/construct.hpp"
#include "alt/errors.hpp"

namespace alt {
namespace {

std::string out(Intensity r) { return std::string(to_string(r)); }

nlohmann::json point_json(const Point& p) { return nlohmann::json(p.coords()); }

void require_trials(const CheckOptions& opts, const char* who) {
  if (opts.trials < 1) throw PreconditionError(std::string(who) + ": trials must be >= 1");
}

void require_region(const AltOracle& oracle, const Sampler& sampler, const char* who) {
  if (!oracle.domain().contains(sampler.region())) {
    throw DomainError(std::string(who) + ": sampler region is not inside the oracle domain");
  }
}

struct TrialOutcome {
  bool applicable = false;
  std::optional<Witness> witness;
};

// Evaluates `trial(index, rng)` for every sample and folds the outcomes in
// index order, so the report does not depend on the worker count.
AxiomReport run_trials(std::string axiom, const Sampler& sampler, const CheckOptions& opts,
                       const std::function<TrialOutcome(std::size_t, std::mt19937_64&)>& trial) {
  std::vector<TrialOutcome> outcomes(opts.trials);
  parallel_for(opts.trials, opts.workers, [&](std::size_t i) {
    auto rng = sampler.stream(i);
    outcomes[i] = trial(i, rng);
  });

  AxiomReport report;
  report.axiom = std::move(axiom);
  report.trials = opts.trials;
  report.seed = sampler.seed();
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    auto& o = outcomes[i];
    if (o.applicable) ++report.evaluated;
    if (o.witness) {
      ++report.violation_count;
      if (report.violations.size() < opts.witness_cap) {
        o.witness->sample = i;
        report.violations.push_back(std::move(*o.witness));
      }
    }
  }
  return report;
}

// Searches for w with [z,w] = [x,y], trying the main diagonal in both
// directions, then a few random chords.
std::optional<Point> solve_for_tail(const AltOracle& o, const Point& x, const Point& y, const Point& z,
                                    std::mt19937_64& rng, const BoxDomain& region) {
  const CrossingTarget target{CrossingKind::Tail, z, x, y};
  const Segment diag = main_diagonal(o.domain());
  std::vector<Segment> candidates{Segment(diag.end(), diag.start()), diag};
  for (int k = 0; k < 4; ++k) candidates.emplace_back(region.uniform(rng), region.uniform(rng));
  for (const auto& seg : candidates) {
    // The solver wants p in D = {[x,y] >= [z,w]} and q in U = {[z,w] >= [x,y]}.
    if (!at_least(o.compare(x, y, z, seg.start())) || !at_least(o.compare(z, seg.end(), x, y))) continue;
    try {
      return solve_crossing(o, seg, target, 1e-12);
    } catch (const BracketError&) {
      continue;
    }
  }
  return std::nullopt;
}

}  // namespace

nlohmann::json to_json(const AxiomReport& r) {
  nlohmann::json v = nlohmann::json::array();
  for (const auto& w : r.violations) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : w.points) pts.push_back(point_json(p));
    v.push_back({{"sample", w.sample}, {"points", pts}, {"oracle_outputs", w.outputs}});
  }
  return {{"axiom", r.axiom},
          {"trials", r.trials},
          {"seed", r.seed},
          {"verdict", r.passed() ? "pass" : "fail"},
          {"evaluated", r.evaluated},
          {"violation_count", r.violation_count},
          {"violations", v},
          {"proxy", r.proxy},
          {"note", r.note},
          {"parameters", r.parameters}};
}

AxiomReport axiom_report_from_json(const nlohmann::json& j) {
  AxiomReport r;
  r.axiom = j.at("axiom").get<std::string>();
  r.trials = j.at("trials").get<std::size_t>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.evaluated = j.value("evaluated", std::size_t{0});
  r.violation_count = j.at("violation_count").get<std::size_t>();
  r.proxy = j.value("proxy", false);
  r.note = j.value("note", std::string{});
  r.parameters = j.value("parameters", nlohmann::json::object());
  for (const auto& w : j.at("violations")) {
    Witness wit;
    wit.sample = w.value("sample", std::size_t{0});
    for (const auto& p : w.at("points")) wit.points.emplace_back(p.get<std::vector<double>>());
    wit.outputs = w.at("oracle_outputs").get<std::vector<std::string>>();
    r.violations.push_back(std::move(wit));
  }
  return r;
}

std::optional<Witness> probe_oracle_contract(const AltOracle& o, const Point& x, const Point& y, const Point& z,
                                             const Point& w) {
  const Intensity r = o.compare(x, y, z, w);
  const Intensity swapped = o.compare(z, w, x, y);
  const Intensity self = o.compare(x, y, x, y);
  if (swapped == reverse(r) && self == Intensity::Equal) return std::nullopt;
  return Witness{0, {x, y, z, w}, {out(r), out(swapped), out(self)}};
}

std::optional<Witness> probe_consistency(const AltOracle& o, const Point& x, const Point& y, const Point& z) {
  // x >~ y <=> [x,z] >= [y,z], in both orientations.
  const Intensity pxy = o.compare(x, y, y, y);
  const Intensity rxz = o.compare(x, z, y, z);
  const Intensity pyx = o.compare(y, x, x, x);
  const Intensity ryz = o.compare(y, z, x, z);
  if (at_least(pxy) == at_least(rxz) && at_least(pyx) == at_least(ryz)) return std::nullopt;
  return Witness{0, {x, y, z}, {out(pxy), out(rxz), out(pyx), out(ryz)}};
}

std::optional<Witness> probe_crossover(const AltOracle& o, const Point& x, const Point& y, const Point& z,
                                       const Point& w) {
  // [x,y] = [z,w] <=> [x,z] = [y,w]
  const Intensity a = o.compare(x, y, z, w);
  const Intensity b = o.compare(x, z, y, w);
  if ((a == Intensity::Equal) == (b == Intensity::Equal)) return std::nullopt;
  return Witness{0, {x, y, z, w}, {out(a), out(b)}};
}

std::optional<Witness> probe_second_consistency(const AltOracle& o, const Point& x, const Point& y, const Point& z) {
  // x >~ y <=> [z,y] >= [z,x], in both orientations.
  const Intensity pxy = o.compare(x, y, y, y);
  const Intensity rzy = o.compare(z, y, z, x);
  const Intensity pyx = o.compare(y, x, x, x);
  const Intensity rzx = o.compare(z, x, z, y);
  if (at_least(pxy) == at_least(rzy) && at_least(pyx) == at_least(rzx)) return std::nullopt;
  return Witness{0, {x, y, z}, {out(pxy), out(rzy), out(pyx), out(rzx)}};
}

std::optional<Witness> probe_monotonicity(const AltOracle& o, const Point& x, const Point& y) {
  if (!strictly_dominates(x, y)) return std::nullopt;
  const Intensity r = o.compare(x, y, y, y);
  if (r == Intensity::Greater) return std::nullopt;
  return Witness{0, {x, y}, {out(r)}};
}

std::optional<Witness> probe_continuity(const AltOracle& o, const std::vector<Point>& quad, std::mt19937_64& rng,
                                        const ContinuityOptions& copts) {
  if (quad.size() != 4) throw PreconditionError("probe_continuity: need exactly four points");
  const Intensity base = o.compare(quad[0], quad[1], quad[2], quad[3]);
  if (base != Intensity::Greater) return std::nullopt;

  const BoxDomain& dom = o.domain();
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<Point> moved = quad;
  Intensity moved_out = base;
  double radius = copts.delta;
  for (std::size_t level = 0; level < copts.levels; ++level, radius *= 0.5) {
    bool stable = true;
    for (std::size_t m = 0; m < copts.perturbations && stable; ++m) {
      for (std::size_t k = 0; k < 4; ++k) {
        std::vector<double> c(quad[k].begin(), quad[k].end());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] += radius * dom.extent(i) * unit(rng);
        moved[k] = dom.clamp(Point(std::move(c)));
      }
      moved_out = o.compare(moved[0], moved[1], moved[2], moved[3]);
      if (moved_out != Intensity::Greater) stable = false;
    }
    if (stable) return std::nullopt;
  }
  std::vector<Point> pts = quad;
  pts.insert(pts.end(), moved.begin(), moved.end());
  return Witness{0, std::move(pts), {out(base), out(moved_out)}};
}

AxiomReport check_oracle_contract(const AltOracle& oracle, const Sampler& sampler, const CheckOptions& opts) {
  require_trials(opts, "check_oracle_contract");
  require_region(oracle, sampler, "check_oracle_contract");
  return run_trials("oracle_contract", sampler, opts, [&](std::size_t, std::mt19937_64& rng) {
    const Point x = sampler.draw(rng), y = sampler.draw(rng), z = sampler.draw(rng), w = sampler.draw(rng);
    return TrialOutcome{true, probe_oracle_contract(oracle, x, y, z, w)};
  });
}

AxiomReport check_consistency(const AltOracle& oracle, const Sampler& sampler, const CheckOptions& opts) {
  require_trials(opts, "check_consistency");
  require_region(oracle, sampler, "check_consistency");
  return run_trials("consistency", sampler, opts, [&](std::size_t, std::mt19937_64& rng) {
    const Point x = sampler.draw(rng), y = sampler.draw(rng), z = sampler.draw(rng);
    return TrialOutcome{true, probe_consistency(oracle, x, y, z)};
  });
}

AxiomReport check_crossover(const AltOracle& oracle, const Sampler& sampler, const CheckOptions& opts) {
  require_trials(opts, "check_crossover");
  require_region(oracle, sampler, "check_crossover");
  std::vector<char> manufactured(opts.trials, 0);
  auto report = run_trials("crossover", sampler, opts, [&](std::size_t i, std::mt19937_64& rng) {
    const Point x = sampler.draw(rng), y = sampler.draw(rng), z = sampler.draw(rng);
    TrialOutcome t{true, std::nullopt};
    if (auto w = solve_for_tail(oracle, x, y, z, rng, sampler.region())) {
      manufactured[i] = 1;
      t.witness = probe_crossover(oracle, x, y, z, *w);
      if (t.witness) return t;
    }
    // Converse direction: manufacture [x,z] = [y,w'] and re-bracket.
    if (auto w = solve_for_tail(oracle, x, z, y, rng, sampler.region())) {
      manufactured[i] = 1;
      t.witness = probe_crossover(oracle, x, y, z, *w);
      if (t.witness) return t;
    }
    t.witness = probe_crossover(oracle, x, y, x, y);
    return t;
  });
  std::size_t made = 0;
  for (char m : manufactured) made += m;
  report.parameters["equal_quadruples_manufactured"] = made;
  if (made == 0) report.note = "sampling failure: no Equal quadruple could be manufactured; only degenerate probes ran";
  return report;
}

AxiomReport check_second_consistency(const AltOracle& oracle, const Sampler& sampler, const CheckOptions& opts) {
  require_trials(opts, "check_second_consistency");
  require_region(oracle, sampler, "check_second_consistency");
  return run_trials("second_consistency", sampler, opts, [&](std::size_t, std::mt19937_64& rng) {
    const Point x = sampler.draw(rng), y = sampler.draw(rng), z = sampler.draw(rng);
    return TrialOutcome{true, probe_second_consistency(oracle, x, y, z)};
  });
}

AxiomReport check_continuity_proxy(const AltOracle& oracle, const Sampler& sampler, const CheckOptions& opts,
                                   const ContinuityOptions& copts) {
  require_trials(opts, "check_continuity_proxy");
  require_region(oracle, sampler, "check_continuity_proxy");
  if (!(copts.delta > 0.0) || copts.delta > 0.5) {
    throw PreconditionError("check_continuity_proxy: delta must be in (0, 0.5]");
  }
  if (copts.levels < 1 || copts.perturbations < 1) {
    throw PreconditionError("check_continuity_proxy: need at least one level and one perturbation");
  }
  auto report = run_trials("continuity_proxy", sampler, opts, [&](std::size_t, std::mt19937_64& rng) {
    std::vector<Point> q{sampler.draw(rng), sampler.draw(rng), sampler.draw(rng), sampler.draw(rng)};
    const Intensity r = oracle.compare(q[0], q[1], q[2], q[3]);
    if (r == Intensity::Equal) return TrialOutcome{};
    if (r == Intensity::Less) {
      std::swap(q[0], q[2]);
      std::swap(q[1], q[3]);
    }
    return TrialOutcome{true, probe_continuity(oracle, q, rng, copts)};
  });
  report.proxy = true;
  report.note = "necessary-condition proxy for closedness; not a proof";
  report.parameters = {{"delta", copts.delta},
                       {"levels", copts.levels},
                       {"perturbations", copts.perturbations},
                       {"finest_radius", copts.delta * std::ldexp(1.0, -static_cast<int>(copts.levels - 1))}};
  return report;
}

AxiomReport check_monotonicity(const AltOracle& oracle, const Sampler& sampler, const CheckOptions& opts) {
  require_trials(opts, "check_monotonicity");
  require_region(oracle, sampler, "check_monotonicity");
  return run_trials("monotonicity", sampler, opts, [&](std::size_t, std::mt19937_64& rng) {
    const Point a = sampler.draw(rng), b = sampler.draw(rng);
    std::vector<double> hi(a.size()), lo(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      hi[i] = std::max(a[i], b[i]);
      lo[i] = std::min(a[i], b[i]);
    }
    const Point x(std::move(hi)), y(std::move(lo));
    if (!strictly_dominates(x, y)) return TrialOutcome{};
    return TrialOutcome{true, probe_monotonicity(oracle, x, y)};
  });
}

bool replay_witness(const AltOracle& o, const AxiomReport& report, const Witness& w) {
  const auto& p = w.points;
  if (report.axiom == "oracle_contract" && p.size() == 4) {
    return probe_oracle_contract(o, p[0], p[1], p[2], p[3]).has_value();
  }
  if (report.axiom == "consistency" && p.size() == 3) return probe_consistency(o, p[0], p[1], p[2]).has_value();
  if (report.axiom == "second_consistency" && p.size() == 3) {
    return probe_second_consistency(o, p[0], p[1], p[2]).has_value();
  }
  if (report.axiom == "crossover" && p.size() == 4) return probe_crossover(o, p[0], p[1], p[2], p[3]).has_value();
  if (report.axiom == "monotonicity" && p.size() == 2) return probe_monotonicity(o, p[0], p[1]).has_value();
  if (report.axiom == "continuity_proxy" && p.size() == 8) {
    const double finest = report.parameters.value("finest_radius", 0.0);
    double dist = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
      for (std::size_t i = 0; i < p[k].size(); ++i) {
        dist = std::max(dist, std::abs(p[k][i] - p[k + 4][i]) / o.domain().extent(i));
      }
    }
    return o.compare(p[0], p[1], p[2], p[3]) == Intensity::Greater &&
           o.compare(p[4], p[5], p[6], p[7]) != Intensity::Greater && dist <= finest * (1.0 + 1e-12);
  }
  return false;
}

}  // namespace alt
