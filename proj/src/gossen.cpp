#include "alt/gossen.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "alt/construct.hpp"
#include "alt/errors.hpp"

namespace alt {
namespace {

double euclidean(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

struct Sample {
  bool evaluated = false;
  bool violation = false;
  bool strict_eligible = false;
  bool strict_failure = false;
  MidpointWitness witness;
};

// Folds per-sample outcomes in index order so the verdict does not depend on
// the worker count.
void fold(ConcavityVerdict& v, std::vector<Sample>& samples, std::size_t cap) {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    auto& s = samples[i];
    s.witness.sample = i;
    v.evaluated += s.evaluated;
    if (s.violation) {
      ++v.violation_count;
      if (v.witnesses.size() < cap) v.witnesses.push_back(s.witness);
    }
    if (s.strict_eligible) {
      ++v.strict_evaluated;
      if (s.strict_failure) {
        ++v.strict_failures;
        if (!v.strict_counterexample) v.strict_counterexample = s.witness;
      }
    }
  }
  if (v.violation_count > 0) {
    v.verdict = LawVerdict::Fails;
  } else if (v.strict_requested && v.strict_evaluated > 0 && v.strict_failures == 0) {
    v.verdict = LawVerdict::HoldsStrictly;
  } else {
    v.verdict = LawVerdict::Holds;
  }
}

void require_region(const AltOracle& oracle, const Sampler& sampler, const char* who) {
  if (!oracle.domain().contains(sampler.region())) {
    throw DomainError(std::string(who) + ": sampler region is not inside the oracle domain");
  }
}

// Evaluates one instance: x, the far point y, and the midpoint z.
Sample ggfl_sample(const AltOracle& oracle, const Point& x, const Point& y, const Point& z, double floor) {
  Sample s;
  s.evaluated = true;
  const Intensity r = oracle.compare(z, x, y, z);
  s.witness = MidpointWitness{0, x, y, z, 0.5, std::string(to_string(r)), 0.0};
  s.violation = r == Intensity::Less;
  if (euclidean(x, y) >= floor) {
    s.strict_eligible = true;
    s.strict_failure = r != Intensity::Greater;
  }
  return s;
}

ConcavityVerdict start_verdict(const std::string& check, const Sampler& sampler, std::size_t trials, bool strict) {
  ConcavityVerdict v;
  v.check = check;
  v.trials = trials;
  v.seed = sampler.seed();
  v.strict_requested = strict;
  return v;
}

}  // namespace

std::string_view to_string(LawVerdict v) {
  switch (v) {
    case LawVerdict::Holds: return "holds";
    case LawVerdict::HoldsStrictly: return "holds-strictly";
    case LawVerdict::Fails: return "fails";
  }
  return "fails";
}

Intensity probe_ggfl(const AltOracle& oracle, const Point& x, const Point& y) {
  const Point z = midpoint(x, y);
  return oracle.compare(z, x, y, z);
}

Intensity probe_ggfl_increments(const AltOracle& oracle, const Point& x, const std::vector<double>& v) {
  std::vector<double> a(x.size()), b(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    a[i] = x[i] + v[i];
    b[i] = x[i] + 2.0 * v[i];
  }
  const Point xv(std::move(a)), x2v(std::move(b));
  return oracle.compare(xv, x, x2v, xv);
}

ConcavityVerdict check_ggfl(const AltOracle& oracle, const Sampler& sampler, const GossenOptions& opts) {
  if (opts.trials < 1) throw PreconditionError("check_ggfl: trials must be >= 1");
  require_region(oracle, sampler, "check_ggfl");
  const double floor = opts.strict_floor * sampler.region().diagonal_length();
  std::vector<Sample> samples(opts.trials);
  parallel_for(opts.trials, opts.workers, [&](std::size_t i) {
    auto rng = sampler.stream(i);
    const Point x = sampler.draw(rng);
    const Point y = sampler.draw(rng);
    samples[i] = ggfl_sample(oracle, x, y, midpoint(x, y), floor);
  });
  auto v = start_verdict("ggfl", sampler, opts.trials, opts.strict);
  v.tolerance = oracle.equality_tolerance();
  v.parameters = {{"parameterization", "pair"}, {"strict_floor", floor}};
  fold(v, samples, opts.witness_cap);
  return v;
}

ConcavityVerdict check_ggfl_increments(const AltOracle& oracle, const Sampler& sampler, const GossenOptions& opts) {
  if (opts.trials < 1) throw PreconditionError("check_ggfl_increments: trials must be >= 1");
  require_region(oracle, sampler, "check_ggfl_increments");
  const BoxDomain& box = sampler.region();
  const std::size_t n = box.dimension();
  const double floor = opts.strict_floor * box.diagonal_length();
  std::vector<Sample> samples(opts.trials);
  parallel_for(opts.trials, opts.workers, [&](std::size_t i) {
    auto rng = sampler.stream(i);
    const Point x = sampler.draw(rng);
    // Random direction, then the largest scale keeping x + 2v in the box,
    // then a uniform fraction of it.
    std::normal_distribution<double> gauss;
    std::vector<double> dir(n);
    for (auto& d : dir) d = gauss(rng) * box.max_extent();
    double reach = INFINITY;
    for (std::size_t j = 0; j < n; ++j) {
      if (dir[j] > 0) reach = std::min(reach, (box.faces()[j].hi - x[j]) / (2.0 * dir[j]));
      if (dir[j] < 0) reach = std::min(reach, (box.faces()[j].lo - x[j]) / (2.0 * dir[j]));
    }
    if (!std::isfinite(reach)) reach = 0.0;
    const double scale = reach * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    std::vector<double> xv(n), x2v(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double v = dir[j] * scale;
      xv[j] = x[j] + v;
      x2v[j] = x[j] + 2.0 * v;
    }
    samples[i] = ggfl_sample(oracle, x, box.clamp(Point(x2v)), box.clamp(Point(xv)), floor);
  });
  auto v = start_verdict("ggfl_increments", sampler, opts.trials, opts.strict);
  v.tolerance = oracle.equality_tolerance();
  v.parameters = {{"parameterization", "increment"}, {"strict_floor", floor}};
  fold(v, samples, opts.witness_cap);
  return v;
}

ConcavityVerdict check_midpoint_concavity(const std::function<double(const Point&)>& u, const Sampler& sampler,
                                          const MidpointOptions& opts) {
  if (opts.trials < 1) throw PreconditionError("check_midpoint_concavity: trials must be >= 1");
  if (opts.full_interval && (opts.dyadic_depth < 1 || opts.dyadic_depth > 20)) {
    throw PreconditionError("check_midpoint_concavity: dyadic depth must be in [1, 20]");
  }
  const int depth = opts.full_interval ? opts.dyadic_depth : 1;
  const int steps = 1 << depth;
  const double floor = opts.strict_floor * sampler.region().diagonal_length();
  std::vector<Sample> samples(opts.trials);
  parallel_for(opts.trials, opts.workers, [&](std::size_t i) {
    auto rng = sampler.stream(i);
    const Point x = sampler.draw(rng);
    const Point y = sampler.draw(rng);
    const double ux = u(x);
    const double uy = u(y);
    Sample s;
    s.evaluated = true;
    s.strict_eligible = euclidean(x, y) >= floor;
    double worst = INFINITY;
    for (int m = 1; m < steps; ++m) {
      const double t = std::ldexp(static_cast<double>(m), -depth);
      const Point z = lerp(x, y, t);
      const double margin = u(z) - ((1.0 - t) * ux + t * uy);
      if (margin < worst) {
        worst = margin;
        s.witness = MidpointWitness{0, x, y, z, t, "", margin};
      }
    }
    s.violation = worst < -opts.tol;
    s.strict_failure = s.strict_eligible && !(worst > opts.tol);
    samples[i] = std::move(s);
  });
  auto v = start_verdict("midpoint_concavity", sampler, opts.trials, opts.strict);
  v.tolerance = opts.tol;
  v.dyadic_depth = depth;
  v.parameters = {{"full_interval", opts.full_interval}, {"strict_floor", floor}};
  fold(v, samples, opts.witness_cap);
  return v;
}

nlohmann::json to_json(const ConcavityVerdict& v) {
  auto witness = [](const MidpointWitness& w) {
    nlohmann::json j = {{"sample", w.sample}, {"x", w.x.coords()}, {"y", w.y.coords()}, {"z", w.z.coords()},
                        {"t", w.t}};
    if (!w.reading.empty()) {
      j["oracle_output"] = w.reading;
    } else {
      j["margin"] = w.margin;
    }
    return j;
  };
  nlohmann::json ws = nlohmann::json::array();
  for (const auto& w : v.witnesses) ws.push_back(witness(w));
  nlohmann::json j = {{"check", v.check},
                      {"verdict", std::string(to_string(v.verdict))},
                      {"trials", v.trials},
                      {"seed", v.seed},
                      {"evaluated", v.evaluated},
                      {"violation_count", v.violation_count},
                      {"witnesses", ws},
                      {"strict_requested", v.strict_requested},
                      {"strict_evaluated", v.strict_evaluated},
                      {"strict_failures", v.strict_failures},
                      {"dyadic_depth", v.dyadic_depth},
                      {"tolerance", v.tolerance},
                      {"parameters", v.parameters}};
  if (v.strict_counterexample) j["strict_counterexample"] = witness(*v.strict_counterexample);
  return j;
}

nlohmann::json to_json(const RoundTripReport& r) {
  return {{"fixture", r.fixture},
          {"tag", std::string(to_string(r.tag))},
          {"ggfl", to_json(r.ggfl)},
          {"reconstruction", to_json(r.reconstruction)},
          {"ggfl_agrees", r.ggfl_agrees},
          {"reconstruction_agrees", r.reconstruction_agrees},
          {"agree", r.agree()},
          {"disagreements", r.disagreements}};
}

RoundTripReport concavity_roundtrip(const UtilitySpec& spec, const BoxDomain& domain, const RoundTripOptions& opts) {
  if (spec.concavity == Concavity::Unknown) {
    throw PreconditionError("concavity_roundtrip: fixture '" + spec.name + "' has no concavity tag");
  }
  const AltOracle oracle = make_difference_oracle(spec, domain);
  const Sampler sampler(domain, opts.seed);

  RoundTripReport r;
  r.fixture = spec.name;
  r.tag = spec.concavity;

  GossenOptions g;
  g.trials = opts.trials;
  g.workers = opts.workers;
  r.ggfl = check_ggfl(oracle, sampler, g);

  ReconstructionOptions ro;
  ro.depth = opts.depth;
  ro.tol_t = opts.tol_t;
  if (!spec.monotone) ro.reference = spec.increasing_path;
  const auto recon = reconstruct(oracle, ro);

  MidpointOptions m;
  m.trials = opts.trials;
  m.workers = opts.workers;
  m.tol = 2.0 * recon.interpolation_budget();
  r.reconstruction = check_midpoint_concavity([&](const Point& x) { return recon(x); }, sampler, m);

  const std::string tag(to_string(spec.concavity));
  switch (spec.concavity) {
    case Concavity::StrictlyConcave:
      r.ggfl_agrees = r.ggfl.verdict == LawVerdict::HoldsStrictly;
      r.reconstruction_agrees = r.reconstruction.holds();
      break;
    case Concavity::Concave:
      r.ggfl_agrees = r.ggfl.holds();
      r.reconstruction_agrees = r.reconstruction.holds();
      break;
    default:
      r.ggfl_agrees = !r.ggfl.holds();
      r.reconstruction_agrees = !r.reconstruction.holds();
      break;
  }
  if (!r.ggfl_agrees) {
    r.disagreements.push_back("tag " + tag + " but GGFL " + std::string(to_string(r.ggfl.verdict)) + " (" +
                              std::to_string(r.ggfl.violation_count) + " violations, " +
                              std::to_string(r.ggfl.strict_failures) + " non-strict pairs)");
  }
  if (!r.reconstruction_agrees) {
    r.disagreements.push_back("tag " + tag + " but reconstruction midpoint concavity " +
                              std::string(to_string(r.reconstruction.verdict)) + " (" +
                              std::to_string(r.reconstruction.violation_count) + " violations)");
  }
  return r;
}

}  // namespace alt
