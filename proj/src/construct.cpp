#include "alt/construct.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "alt/bisection.hpp"
#include "alt/errors.hpp"

namespace alt {
namespace {

constexpr std::size_t kMaxExtension = std::size_t{1} << 22;

Intensity side_of(const AltOracle& o, const CrossingTarget& target, const Point& x) {
  return target.kind == CrossingKind::Head ? o.compare(x, target.pivot, target.z, target.w)
                                           : o.compare(target.pivot, x, target.z, target.w);
}

// Grows one level outward in both directions while the box still holds a
// point one step `[S(hi), S(lo)]` away from the outermost rung.
void extend_level(const AltOracle& o, const Segment& s, std::deque<double>& params, int& first, double step_lo,
                  double step_hi, double tol) {
  const Point a0 = s.at(step_lo);
  const Point a1 = s.at(step_hi);
  const Point top = s.at(1.0);
  const Point bottom = s.at(0.0);

  for (std::size_t guard = 0;; ++guard) {
    if (guard > kMaxExtension) throw ConstructionFailed("build_ladder: upward extension does not terminate");
    const double cur = params.back();
    if (cur >= 1.0) break;
    const Point from = s.at(cur);
    if (!at_least(o.compare(top, from, a1, a0))) break;
    const auto sol = bisect_band([&](double t) { return o.compare(s.at(t), from, a1, a0); }, cur, 1.0, tol);
    if (!(sol.t > cur)) break;
    params.push_back(sol.t);
  }
  for (std::size_t guard = 0;; ++guard) {
    if (guard > kMaxExtension) throw ConstructionFailed("build_ladder: downward extension does not terminate");
    const double cur = params.front();
    if (cur <= 0.0) break;
    const Point from = s.at(cur);
    if (!at_least(o.compare(from, bottom, a1, a0))) break;
    const auto sol = bisect_band([&](double t) { return o.compare(a1, a0, from, s.at(t)); }, 0.0, cur, tol);
    if (!(sol.t < cur)) break;
    params.push_front(sol.t);
    --first;
  }
}

double midpoint_param(const AltOracle& o, const Segment& s, double lo, double hi, double tol) {
  const Point x = s.at(lo);
  const Point z = s.at(hi);
  const auto sol = bisect_band(
      [&](double t) {
        const Point y = s.at(t);
        return o.compare(y, x, z, y);
      },
      lo, hi, tol);
  const Point y = s.at(sol.t);
  if (o.compare(z, y, y, y) != Intensity::Greater || o.compare(y, x, x, x) != Intensity::Greater) {
    throw ConstructionFailed("midpoint post-check z > y > x failed at t=" + std::to_string(sol.t));
  }
  return sol.t;
}

}  // namespace

SegmentPoint solve_crossing_at(const AltOracle& oracle, const Segment& seg, const CrossingTarget& target,
                               double tol_t) {
  if (!(tol_t > 0.0)) throw PreconditionError("solve_crossing: tol_t must be > 0");
  BandSolution sol;
  try {
    sol = bisect_band([&](double t) { return side_of(oracle, target, seg.at(t)); }, 0.0, 1.0, tol_t);
  } catch (const BracketError&) {
    throw BracketError("solve_crossing: segment start must lie in D and end in U");
  }
  return {sol.t, seg.at(sol.t), sol.hit_equal};
}

Point solve_crossing(const AltOracle& oracle, const Segment& seg, const CrossingTarget& target, double tol_t) {
  return solve_crossing_at(oracle, seg, target, tol_t).point;
}

SegmentPoint solve_midpoint_at(const AltOracle& oracle, const Segment& seg, double tol_t) {
  if (!(tol_t > 0.0)) throw PreconditionError("solve_midpoint: tol_t must be > 0");
  const Point& x = seg.start();
  const Point& z = seg.end();
  if (oracle.compare(z, x, x, x) != Intensity::Greater) {
    throw OrderingError("solve_midpoint: z must be strictly preferred to x");
  }
  const auto sol = bisect_band(
      [&](double t) {
        const Point y = seg.at(t);
        return oracle.compare(y, x, z, y);
      },
      0.0, 1.0, tol_t);
  Point y = seg.at(sol.t);
  if (oracle.compare(z, y, y, y) != Intensity::Greater || oracle.compare(y, x, x, x) != Intensity::Greater) {
    throw ConstructionFailed("solve_midpoint: post-check z > y > x failed");
  }
  return {sol.t, std::move(y), sol.hit_equal};
}

Point solve_midpoint(const AltOracle& oracle, const Point& x, const Point& z, double tol_t) {
  return solve_midpoint_at(oracle, Segment(x, z), tol_t).point;
}

ArchimedeanSteps archimedean_count(const AltOracle& oracle, const Point& x, const Point& y, const Point& z,
                                   std::size_t cap, double tol_t) {
  if (oracle.compare(x, y, y, y) != Intensity::Greater) throw OrderingError("archimedean_count: need x > y");
  if (!at_least(oracle.compare(z, x, x, x))) throw OrderingError("archimedean_count: need z >~ x");
  ArchimedeanSteps out;
  out.steps = {y, x};
  out.k = 1;
  for (;;) {
    const Point& ak = out.steps.back();
    if (oracle.compare(x, y, z, ak) == Intensity::Greater) return out;
    if (out.k >= cap) throw ArchimedeanViolation("archimedean_count: step cap exceeded");
    const CrossingTarget target{CrossingKind::Head, ak, x, y};
    out.steps.push_back(solve_crossing(oracle, Segment(ak, z), target, tol_t));
    ++out.k;
  }
}

bool DyadicLadder::has(int i, int level) const {
  if (level < 0 || level >= levels()) return false;
  return i >= first_index(level) && i <= last_index(level);
}

double DyadicLadder::param(int i, int level) const {
  if (!has(i, level)) throw PreconditionError("DyadicLadder: rung (" + std::to_string(i) + ", " +
                                              std::to_string(level) + ") is not defined");
  return levels_[level].params[static_cast<std::size_t>(i - levels_[level].first)];
}

double DyadicLadder::value(int i, int level) { return std::ldexp(static_cast<double>(i), -level); }

DyadicLadder build_ladder(const AltOracle& oracle, const Segment& reference, double y_t, double x_t,
                          const LadderOptions& opts) {
  if (opts.depth < 0) throw PreconditionError("build_ladder: depth must be >= 0");
  if (!(opts.tol_t > 0.0)) throw PreconditionError("build_ladder: tol_t must be > 0");
  if (!(y_t >= 0.0 && x_t <= 1.0 && y_t < x_t)) {
    throw PreconditionError("build_ladder: anchors must satisfy 0 <= y* < x* <= 1 along the reference");
  }
  const Point ys = reference.at(y_t);
  const Point xs = reference.at(x_t);
  if (oracle.compare(xs, ys, ys, ys) != Intensity::Greater) {
    throw OrderingError("build_ladder: x* must be strictly preferred to y*");
  }

  DyadicLadder ladder(reference, opts.depth);
  std::deque<double> params{y_t, x_t};
  int first = 0;
  extend_level(oracle, reference, params, first, y_t, x_t, opts.tol_t);
  ladder.push_level(first, std::vector<double>(params.begin(), params.end()));

  for (int k = 0; k < opts.depth; ++k) {
    const auto prev = ladder.level_params(k);
    std::deque<double> next;
    for (std::size_t j = 0; j < prev.size(); ++j) {
      next.push_back(prev[j]);
      if (j + 1 < prev.size()) next.push_back(midpoint_param(oracle, reference, prev[j], prev[j + 1], opts.tol_t));
    }
    int next_first = 2 * ladder.first_index(k);
    const double step_lo = next[static_cast<std::size_t>(-next_first)];
    const double step_hi = next[static_cast<std::size_t>(1 - next_first)];
    extend_level(oracle, reference, next, next_first, step_lo, step_hi, opts.tol_t);
    ladder.push_level(next_first, std::vector<double>(next.begin(), next.end()));
  }
  return ladder;
}

DyadicLadder build_ladder(const AltOracle& oracle, const Point& y_star, const Point& x_star,
                          const LadderOptions& opts) {
  const Segment diag = main_diagonal(oracle.domain());
  const double yt = diag.project(y_star);
  const double xt = diag.project(x_star);
  const double tol = 1e-9 * oracle.domain().max_extent();
  if (max_abs_distance(diag.at(yt), y_star) > tol || max_abs_distance(diag.at(xt), x_star) > tol) {
    throw PreconditionError("build_ladder: anchors must lie on the main diagonal of the domain");
  }
  if (oracle.compare(x_star, y_star, y_star, y_star) != Intensity::Greater) {
    throw OrderingError("build_ladder: x* must be strictly preferred to y*");
  }
  return build_ladder(oracle, diag, std::clamp(yt, 0.0, 1.0), std::clamp(xt, 0.0, 1.0), opts);
}

LadderAudit audit_ladder(const AltOracle& oracle, const DyadicLadder& ladder) {
  LadderAudit audit;
  for (int k = 0; k < ladder.levels(); ++k) {
    const Point a0 = ladder.rung(0, k);
    const Point a1 = ladder.rung(1, k);
    for (int i = ladder.first_index(k); i < ladder.last_index(k); ++i) {
      const Point lo = ladder.rung(i, k);
      const Point hi = ladder.rung(i + 1, k);
      ++audit.checked;
      if (oracle.compare(hi, lo, a1, a0) != Intensity::Equal) ++audit.spacing_failures;
      if (oracle.compare(hi, lo, lo, lo) != Intensity::Greater) ++audit.ordering_failures;
    }
  }
  return audit;
}

ReconstructedUtility::ReconstructedUtility(AltOracle oracle, DyadicLadder ladder, Anchors anchors, double tol_t,
                                           std::uint64_t construction_calls)
    : oracle_(std::move(oracle)),
      ladder_(std::move(ladder)),
      anchors_(anchors),
      tol_t_(tol_t),
      construction_calls_(construction_calls) {}

double ReconstructedUtility::interpolation_budget() const { return std::ldexp(1.0, -ladder_.depth()); }

double ReconstructedUtility::calibrate(const Point& x, bool* above, bool* below) const {
  const Segment& s = ladder_.reference();
  auto side = [&](double t) { return oracle_.compare(s.at(t), x, x, x); };
  if (above) *above = false;
  if (below) *below = false;
  if (side(0.0) == Intensity::Greater) {
    if (below) *below = true;
    return 0.0;
  }
  if (side(1.0) == Intensity::Less) {
    if (above) *above = true;
    return 1.0;
  }
  return bisect_band(side, 0.0, 1.0, tol_t_).t;
}

double ReconstructedUtility::value_at_param(double t, bool* extrapolated) const {
  const int k = ladder_.depth();
  const auto params = ladder_.level_params(k);
  const int first = ladder_.first_index(k);
  if (extrapolated) *extrapolated = false;
  if (t <= params.front()) {
    if (extrapolated) *extrapolated = t < params.front();
    return DyadicLadder::value(first, k);
  }
  if (t >= params.back()) {
    if (extrapolated) *extrapolated = t > params.back();
    return DyadicLadder::value(ladder_.last_index(k), k);
  }
  const auto it = std::upper_bound(params.begin(), params.end(), t);
  const std::size_t j = static_cast<std::size_t>(it - params.begin()) - 1;
  const double frac = (t - params[j]) / (params[j + 1] - params[j]);
  return std::ldexp(static_cast<double>(first + static_cast<int>(j)) + frac, -k);
}

Evaluation ReconstructedUtility::evaluate_detailed(const Point& x) const {
  Evaluation e;
  e.calibration_t = calibrate(x, &e.above_range, &e.below_range);
  e.value = value_at_param(e.calibration_t, &e.extrapolated);
  return e;
}

nlohmann::json ReconstructedUtility::to_json() const {
  const Segment& s = ladder_.reference();
  nlohmann::json levels = nlohmann::json::array();
  for (int k = 0; k < ladder_.levels(); ++k) {
    const auto p = ladder_.level_params(k);
    levels.push_back({{"level", k}, {"first_index", ladder_.first_index(k)},
                      {"params", std::vector<double>(p.begin(), p.end())}});
  }
  const int K = ladder_.depth();
  std::vector<double> values;
  for (int i = ladder_.first_index(K); i <= ladder_.last_index(K); ++i) values.push_back(DyadicLadder::value(i, K));
  return {{"oracle", oracle_.name()},
          {"reference", {{"start", s.start().coords()}, {"end", s.end().coords()}}},
          {"anchors",
           {{"y_param", anchors_.y_t},
            {"x_param", anchors_.x_t},
            {"y_point", s.at(anchors_.y_t).coords()},
            {"x_point", s.at(anchors_.x_t).coords()}}},
          {"depth", K},
          {"levels", levels},
          {"deepest_values", values},
          {"tolerances",
           {{"tol_t", tol_t_},
            {"equality", oracle_.equality_tolerance()},
            {"interpolation_budget", interpolation_budget()}}},
          {"oracle_calls", construction_calls_}};
}

ReconstructedUtility reconstruct(const AltOracle& oracle, const ReconstructionOptions& opts) {
  const Segment ref = opts.reference.value_or(main_diagonal(oracle.domain()));
  const Point& lo = ref.start();
  const Point& hi = ref.end();
  if (!oracle.domain().contains(lo) || !oracle.domain().contains(hi)) {
    throw DomainError("reconstruct: reference segment leaves the domain");
  }
  if (!opts.reference) {
    CheckOptions mono;
    mono.trials = opts.monotonicity_trials;
    const auto report = check_monotonicity(oracle, Sampler(oracle.domain(), opts.monotonicity_seed), mono);
    if (!report.passed()) {
      throw PreconditionError(
          "reconstruct: oracle is not monotone, so the main diagonal is not a preference-increasing path; "
          "supply a custom strictly ranked reference segment");
    }
  }
  if (oracle.compare(hi, lo, lo, lo) != Intensity::Greater) {
    throw PreconditionError("reconstruct: reference segment end must be strictly preferred to its start");
  }
  if (opts.reference) {
    constexpr int kProbe = 64;
    Point prev = ref.at(0.0);
    for (int i = 1; i <= kProbe; ++i) {
      Point cur = ref.at(static_cast<double>(i) / kProbe);
      if (oracle.compare(cur, prev, prev, prev) != Intensity::Greater) {
        throw PreconditionError("reconstruct: custom reference segment is not strictly increasing in preference");
      }
      prev = std::move(cur);
    }
  }
  const std::uint64_t before = oracle.calls();
  DyadicLadder ladder =
      build_ladder(oracle, ref, opts.anchors.y_t, opts.anchors.x_t, LadderOptions{opts.depth, opts.tol_t});
  const std::uint64_t used = oracle.calls() - before;
  return ReconstructedUtility(oracle, std::move(ladder), opts.anchors, opts.tol_t, used);
}

double evaluate(const ReconstructedUtility& recon, const Point& x) {
  if (!recon.oracle().domain().contains(x)) throw DomainError("evaluate: point outside the domain");
  return recon(x);
}

AffineFit fit_affine(const std::vector<double>& u1, const std::vector<double>& u2) {
  if (u1.size() != u2.size() || u1.empty()) throw PreconditionError("fit_affine: need equally sized, nonempty samples");
  const double n = static_cast<double>(u1.size());
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < u1.size(); ++i) {
    m1 += u1[i];
    m2 += u2[i];
  }
  m1 /= n;
  m2 /= n;
  double var = 0.0, cov = 0.0;
  for (std::size_t i = 0; i < u1.size(); ++i) {
    var += (u1[i] - m1) * (u1[i] - m1);
    cov += (u1[i] - m1) * (u2[i] - m2);
  }
  if (!(var > 0.0)) throw PreconditionError("fit_affine: degenerate fit, first utility has zero variance");
  AffineFit fit;
  fit.alpha = cov / var;
  fit.beta = m2 - fit.alpha * m1;
  fit.samples = u1.size();
  for (std::size_t i = 0; i < u1.size(); ++i) {
    fit.max_residual = std::max(fit.max_residual, std::abs(u2[i] - (fit.alpha * u1[i] + fit.beta)));
  }
  return fit;
}

AffineFit verify_affine_uniqueness(const AltOracle& oracle, const Anchors& first, const Anchors& second,
                                   const ReconstructionOptions& base, const Sampler& sampler, std::size_t samples) {
  if (samples < 2) throw PreconditionError("verify_affine_uniqueness: need at least two samples");
  ReconstructionOptions o1 = base;
  o1.anchors = first;
  ReconstructionOptions o2 = base;
  o2.anchors = second;
  const auto r1 = reconstruct(oracle, o1);
  const auto r2 = reconstruct(oracle, o2);
  std::vector<double> u1(samples), u2(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    auto rng = sampler.stream(i);
    const Point x = sampler.draw(rng);
    u1[i] = r1(x);
    u2[i] = r2(x);
  }
  return fit_affine(u1, u2);
}

AxiomReport check_density(const ReconstructedUtility& recon, const Sampler& sampler, const CheckOptions& opts,
                          int min_depth) {
  if (opts.trials < 1) throw PreconditionError("check_density: trials must be >= 1");
  if (recon.depth() < min_depth) throw PreconditionError("check_density: ladder depth below configured minimum");
  const AltOracle& o = recon.oracle();
  const DyadicLadder& ladder = recon.ladder();
  const int K = recon.depth();
  const double gap_floor = std::ldexp(1.0, 1 - K);
  const auto params = ladder.level_params(K);

  std::vector<std::optional<Witness>> found(opts.trials);
  std::vector<char> applicable(opts.trials, 0);
  parallel_for(opts.trials, opts.workers, [&](std::size_t i) {
    auto rng = sampler.stream(i);
    Point x = sampler.draw(rng);
    Point y = sampler.draw(rng);
    const Intensity r = o.compare(x, y, y, y);
    if (r == Intensity::Equal) return;
    if (r == Intensity::Less) std::swap(x, y);
    const auto ex = recon.evaluate_detailed(x);
    const auto ey = recon.evaluate_detailed(y);
    if (!(ex.value - ey.value > gap_floor)) return;
    applicable[i] = 1;
    auto lo = std::upper_bound(params.begin(), params.end(), ey.calibration_t);
    auto hi = std::lower_bound(params.begin(), params.end(), ex.calibration_t);
    auto strictly_between = [&](double t) {
      const Point z = ladder.reference().at(t);
      return o.compare(x, z, z, z) == Intensity::Greater && o.compare(z, y, y, y) == Intensity::Greater;
    };
    if (lo < hi) {
      if (strictly_between(*(lo + (hi - lo) / 2))) return;
      for (auto it = lo; it != hi; ++it) {
        if (strictly_between(*it)) return;
      }
    }
    found[i] = Witness{0, {x, y}, {"no rung strictly between"}};
  });

  AxiomReport report;
  report.axiom = "density";
  report.trials = opts.trials;
  report.seed = sampler.seed();
  report.parameters = {{"depth", K}, {"gap_floor", gap_floor}};
  for (std::size_t i = 0; i < found.size(); ++i) {
    report.evaluated += applicable[i];
    if (found[i]) {
      ++report.violation_count;
      if (report.violations.size() < opts.witness_cap) {
        found[i]->sample = i;
        report.violations.push_back(std::move(*found[i]));
      }
    }
  }
  return report;
}

AxiomReport check_ladder_equivalence(const AltOracle& oracle, const DyadicLadder& ladder, int level,
                                     const Sampler& sampler, const CheckOptions& opts) {
  if (opts.trials < 1) throw PreconditionError("check_ladder_equivalence: trials must be >= 1");
  const int first = ladder.first_index(level);
  const int last = ladder.last_index(level);
  if (last - first < 1) throw PreconditionError("check_ladder_equivalence: level has fewer than two rungs");

  AxiomReport report;
  report.axiom = "ladder_equivalence";
  report.trials = opts.trials;
  report.seed = sampler.seed();
  report.parameters = {{"level", level}};
  for (std::size_t n = 0; n < opts.trials; ++n) {
    auto rng = sampler.stream(n);
    std::uniform_int_distribution<int> kd(1, last - first);
    const int k = kd(rng);
    std::uniform_int_distribution<int> id(first, last - k);
    const int i = id(rng);
    const int j = id(rng);
    const Intensity r = oracle.compare(ladder.rung(i + k, level), ladder.rung(i, level), ladder.rung(j + k, level),
                                       ladder.rung(j, level));
    ++report.evaluated;
    if (r != Intensity::Equal) {
      ++report.violation_count;
      if (report.violations.size() < opts.witness_cap) {
        report.violations.push_back(Witness{n,
                                            {ladder.rung(i + k, level), ladder.rung(i, level),
                                             ladder.rung(j + k, level), ladder.rung(j, level)},
                                            {std::string(to_string(r))}});
      }
    }
  }
  return report;
}

RepresentationCheck check_representation(const ReconstructedUtility& recon, const Sampler& sampler,
                                         std::size_t trials, unsigned workers, std::optional<double> dead_band) {
  const AltOracle& o = recon.oracle();
  RepresentationCheck rc;
  rc.dead_band_quad = dead_band.value_or(4.0 * recon.interpolation_budget());
  rc.dead_band_pair = dead_band.value_or(2.0 * recon.interpolation_budget());

  struct One {
    char quad_mismatch = 0, quad_inside = 0, pair_mismatch = 0;
  };
  std::vector<One> res(trials);
  auto expected = [](double d, double band) {
    return d > band ? Intensity::Greater : Intensity::Less;
  };
  parallel_for(trials, workers, [&](std::size_t i) {
    auto rng = sampler.stream(i);
    const Point x = sampler.draw(rng), y = sampler.draw(rng), z = sampler.draw(rng), w = sampler.draw(rng);
    const double ux = recon(x), uy = recon(y), uz = recon(z), uw = recon(w);
    const double dq = (ux - uy) - (uz - uw);
    if (std::abs(dq) <= rc.dead_band_quad) {
      res[i].quad_inside = 1;
    } else if (o.compare(x, y, z, w) != expected(dq, rc.dead_band_quad)) {
      res[i].quad_mismatch = 1;
    }
    const double dp = ux - uy;
    if (std::abs(dp) > rc.dead_band_pair && o.compare(x, y, y, y) != expected(dp, rc.dead_band_pair)) {
      res[i].pair_mismatch = 1;
    }
  });
  rc.quadruples = rc.pairs = trials;
  for (const auto& r : res) {
    rc.quad_mismatches += r.quad_mismatch;
    rc.quad_inside_band += r.quad_inside;
    rc.pair_mismatches += r.pair_mismatch;
  }
  return rc;
}

}  // namespace alt
