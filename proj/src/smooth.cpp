#include "alt/smooth.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "alt/bisection.hpp"
#include "alt/errors.hpp"

namespace alt {
namespace {

Point shifted(const Point& x, std::size_t i, double d) {
  Point p = x;
  p[i] += d;
  return p;
}

Point shifted(const Point& x, std::size_t i, double di, std::size_t j, double dj) {
  Point p = x;
  p[i] += di;
  p[j] += dj;
  return p;
}

void require_margin(const BoxDomain& domain, const Point& x, double h, const char* who) {
  if (x.size() != domain.dimension()) throw DimensionMismatch(std::string(who) + ": dimension mismatch");
  if (!(h > 0.0)) throw PreconditionError(std::string(who) + ": step must be > 0");
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& f = domain.faces()[i];
    if (x[i] - 2.0 * h < f.lo || x[i] + 2.0 * h > f.hi) {
      throw DomainError(std::string(who) + ": point " + to_string(x) + " is closer than 2h to the boundary");
    }
  }
}

// The diagonal c e as a segment over the admissible scales.
Segment scale_segment(const BoxDomain& d, double& c_lo, double& c_hi) {
  c_lo = d.diagonal_scale_min();
  c_hi = d.diagonal_scale_max();
  if (!(c_lo < c_hi)) throw RangeError("calibrate: the domain contains no segment of the diagonal");
  const double pad = 1e-9 * (c_hi - c_lo);
  const std::size_t n = d.dimension();
  if (!d.contains(Point::filled(n, c_lo))) c_lo += pad;
  if (!d.contains(Point::filled(n, c_hi))) c_hi -= pad;
  return Segment(Point::filled(n, c_lo), Point::filled(n, c_hi));
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string_view to_string(LineVerdict v) {
  switch (v) {
    case LineVerdict::LineSmooth: return "line-smooth";
    case LineVerdict::NotLineSmooth: return "not-line-smooth";
    case LineVerdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::string_view to_string(AlepLabel l) {
  switch (l) {
    case AlepLabel::Substitute: return "substitute";
    case AlepLabel::Complement: return "complement";
    case AlepLabel::Neutral: return "neutral";
    case AlepLabel::Indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

double solve_f(const AltOracle& oracle, double a, double b, double tol) {
  if (!(a > 0.0 && a < b)) throw PreconditionError("solve_f: need 0 < a < b");
  if (!(tol > 0.0)) throw PreconditionError("solve_f: tol must be > 0");
  const std::size_t n = oracle.dimension();
  const Point lo = Point::filled(n, b - a);
  const Point hi = Point::filled(n, b + a);
  if (!oracle.domain().contains(lo) || !oracle.domain().contains(hi)) {
    throw DomainError("solve_f: (b-a)e or (b+a)e lies outside the domain");
  }
  const auto sol = solve_midpoint_at(oracle, Segment(lo, hi), tol / (2.0 * a));
  return (b - a) + 2.0 * a * sol.t;
}

std::vector<double> default_schedule(double b) {
  std::vector<double> s;
  for (int k = 4; k <= 16; ++k) s.push_back(std::ldexp(b, -k));
  return s;
}

SmoothnessReport line_smoothness_limit(const AltOracle& oracle, double b, const LineSmoothnessOptions& opts) {
  const std::vector<double> schedule = opts.schedule.empty() ? default_schedule(b) : opts.schedule;
  if (schedule.size() < 2) throw PreconditionError("line_smoothness_limit: schedule needs at least two steps");
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    if (!(schedule[k] > 0.0) || (k > 0 && !(schedule[k] < schedule[k - 1]))) {
      throw PreconditionError("line_smoothness_limit: schedule must be positive and strictly decreasing");
    }
  }
  if (opts.tail < 2) throw PreconditionError("line_smoothness_limit: tail must be >= 2");

  SmoothnessReport r;
  r.b = b;
  for (double a : schedule) {
    const double tol = std::min(opts.tol_default, a * 1e-4);
    const double f = solve_f(oracle, a, b, tol);
    const double q = (b - f) / a;
    const double noise = tol / a;
    r.table.push_back({a, f, q, noise});
    if (q < -noise || q > 1.0 + noise) r.within_concavity_bound = false;
  }

  // Linear extrapolation to a = 0 through consecutive tail points; for a
  // halving schedule this is 2 q_{k+1} - q_k.
  const std::size_t tail = std::min(opts.tail, r.table.size());
  const std::size_t from = r.table.size() - tail;
  double noise = 0.0;
  for (std::size_t k = from; k + 1 < r.table.size(); ++k) {
    const auto& p = r.table[k];
    const auto& q = r.table[k + 1];
    r.extrapolated.push_back((p.a * q.quotient - q.a * p.quotient) / (p.a - q.a));
    noise = std::max({noise, p.noise, q.noise});
  }
  const auto [mn, mx] = std::minmax_element(r.extrapolated.begin(), r.extrapolated.end());
  r.limit = r.extrapolated.back();
  r.uncertainty = 0.5 * (*mx - *mn) + noise;

  const double L = std::abs(r.limit);
  if (L > 3.0 * r.uncertainty && L > opts.zero_band) {
    r.verdict = LineVerdict::NotLineSmooth;
  } else if (L <= opts.zero_band && r.uncertainty <= opts.zero_band) {
    r.verdict = LineVerdict::LineSmooth;
  } else {
    r.verdict = LineVerdict::Inconclusive;
  }
  return r;
}

nlohmann::json to_json(const SmoothnessReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.table) {
    rows.push_back({{"a", row.a}, {"f", row.f}, {"quotient", row.quotient}, {"noise", row.noise}});
  }
  return {{"b", r.b},
          {"table", rows},
          {"extrapolated", r.extrapolated},
          {"limit", r.limit},
          {"uncertainty", r.uncertainty},
          {"verdict", std::string(to_string(r.verdict))},
          {"within_concavity_bound", r.within_concavity_bound}};
}

std::string to_csv(const SmoothnessReport& r) {
  std::string out = "b,a,f,quotient\n";
  for (const auto& row : r.table) {
    out += fmt(r.b) + "," + fmt(row.a) + "," + fmt(row.f) + "," + fmt(row.quotient) + "\n";
  }
  return out;
}

double calibrate(const AltOracle& oracle, const Point& x, double tol) {
  if (!oracle.domain().contains(x)) throw DomainError("calibrate: point outside the domain");
  if (!(tol > 0.0)) throw PreconditionError("calibrate: tol must be > 0");
  double c_lo = 0.0, c_hi = 0.0;
  const Segment seg = scale_segment(oracle.domain(), c_lo, c_hi);
  auto side = [&](double t) { return oracle.compare(seg.at(t), x, x, x); };
  if (side(0.0) == Intensity::Greater) throw RangeError("calibrate: x is below every diagonal point in the box");
  if (side(1.0) == Intensity::Less) throw RangeError("calibrate: x is above every diagonal point in the box");
  const auto sol = bisect_band(side, 0.0, 1.0, tol / (c_hi - c_lo));
  return c_lo + sol.t * (c_hi - c_lo);
}

DebreuReport debreu_smoothness_proxy(const AltOracle& oracle, const Sampler& sampler, const DebreuOptions& opts) {
  if (opts.trials < 1) throw PreconditionError("debreu_smoothness_proxy: trials must be >= 1");
  if (!oracle.domain().contains(sampler.region())) {
    throw DomainError("debreu_smoothness_proxy: sampler region is not inside the oracle domain");
  }
  const BoxDomain inner = sampler.region().inset(opts.margin);
  const std::size_t n = inner.dimension();
  const double h = opts.h * sampler.region().max_extent();
  const double c_lo = inner.diagonal_scale_min();
  const double c_hi = inner.diagonal_scale_max();
  const bool has_diagonal = c_lo < c_hi;

  std::vector<DebreuSample> results(opts.trials);
  std::vector<char> on_diagonal(opts.trials, 0);
  parallel_for(opts.trials, opts.workers, [&](std::size_t s) {
    auto rng = sampler.stream(s);
    Point x;
    if (has_diagonal && s < opts.diagonal_samples) {
      x = Point::filled(n, std::uniform_real_distribution<double>(c_lo, c_hi)(rng));
      on_diagonal[s] = 1;
    } else {
      x = inner.uniform(rng);
    }
    auto a = [&](const Point& p) { return calibrate(oracle, p); };
    DebreuSample d;
    d.sample = s;
    d.x = x;
    const double a0 = a(x);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ap = a(shifted(x, i, h));
      const double am = a(shifted(x, i, -h));
      const double hp = a(shifted(x, i, 0.5 * h));
      const double hm = a(shifted(x, i, -0.5 * h));
      d.gradient_h.push_back((ap - am) / (2.0 * h));
      d.gradient_half.push_back((hp - hm) / h);
      d.left.push_back((a0 - am) / h);
      d.right.push_back((ap - a0) / h);
      scale = std::max(scale, std::abs(d.gradient_h.back()));
    }
    scale = std::max(scale, 1e-12);
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(d.gradient_h[i] - d.gradient_half[i]) > opts.halving_tol * scale) d.halving_ok = false;
      if (std::abs(d.right[i] - d.left[i]) > opts.one_sided_tol * scale) d.one_sided_ok = false;
    }
    results[s] = std::move(d);
  });

  DebreuReport r;
  r.trials = opts.trials;
  r.seed = sampler.seed();
  r.h = h;
  for (std::size_t s = 0; s < results.size(); ++s) {
    if (results[s].smooth()) {
      ++r.smooth_samples;
    } else {
      ++r.rough_samples;
      r.diagonal_rough += on_diagonal[s];
      if (r.rough.size() < opts.witness_cap) r.rough.push_back(results[s]);
    }
  }
  return r;
}

nlohmann::json to_json(const DebreuReport& r) {
  nlohmann::json rough = nlohmann::json::array();
  for (const auto& d : r.rough) {
    rough.push_back({{"sample", d.sample},
                     {"x", d.x.coords()},
                     {"gradient_h", d.gradient_h},
                     {"gradient_half_h", d.gradient_half},
                     {"left", d.left},
                     {"right", d.right},
                     {"halving_ok", d.halving_ok},
                     {"one_sided_ok", d.one_sided_ok}});
  }
  return {{"check", "debreu_smoothness_proxy"},
          {"verdict", r.passed() ? "pass" : "fail"},
          {"proxy", r.proxy},
          {"trials", r.trials},
          {"seed", r.seed},
          {"h", r.h},
          {"smooth_samples", r.smooth_samples},
          {"rough_samples", r.rough_samples},
          {"diagonal_rough", r.diagonal_rough},
          {"rough", rough}};
}

std::vector<double> numeric_gradient(const ScalarField& u, const BoxDomain& domain, const Point& x, double h) {
  require_margin(domain, x, h, "numeric_gradient");
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) g[i] = (u(shifted(x, i, h)) - u(shifted(x, i, -h))) / (2.0 * h);
  return g;
}

Matrix numeric_hessian(const ScalarField& u, const BoxDomain& domain, const Point& x, double h) {
  require_margin(domain, x, h, "numeric_hessian");
  const std::size_t n = x.size();
  Matrix H(n, Vector(n, 0.0));
  const double u0 = u(x);
  for (std::size_t i = 0; i < n; ++i) {
    H[i][i] = (u(shifted(x, i, h)) - 2.0 * u0 + u(shifted(x, i, -h))) / (h * h);
    for (std::size_t j = i + 1; j < n; ++j) {
      H[i][j] = H[j][i] = (u(shifted(x, i, h, j, h)) - u(shifted(x, i, h, j, -h)) - u(shifted(x, i, -h, j, h)) +
                           u(shifted(x, i, -h, j, -h))) /
                          (4.0 * h * h);
    }
  }
  return H;
}

std::vector<AlepClassification> alep_classify(const ScalarField& u, const BoxDomain& domain,
                                              const std::vector<Point>& points, std::size_t i, std::size_t j,
                                              const AlepOptions& opts) {
  if (i == j || i >= domain.dimension() || j >= domain.dimension()) {
    throw PreconditionError("alep_classify: need two distinct coordinates of the domain");
  }
  if (!(opts.threshold >= 0.0)) throw PreconditionError("alep_classify: threshold must be >= 0");
  const double h = opts.h;
  // d/dx_j of a central d/dx_i taken with step h/2.
  auto ordered = [&](const Point& x, std::size_t p, std::size_t q) {
    return (u(shifted(x, p, 0.5 * h, q, h)) - u(shifted(x, p, -0.5 * h, q, h)) - u(shifted(x, p, 0.5 * h, q, -h)) +
            u(shifted(x, p, -0.5 * h, q, -h))) /
           (2.0 * h * h);
  };
  std::vector<AlepClassification> out;
  out.reserve(points.size());
  for (const auto& x : points) {
    require_margin(domain, x, h, "alep_classify");
    AlepClassification c;
    c.x = x;
    c.i = i;
    c.j = j;
    c.estimate_ij = ordered(x, i, j);
    c.estimate_ji = ordered(x, j, i);
    c.estimate = 0.5 * (c.estimate_ij + c.estimate_ji);
    const double gap = std::abs(c.estimate_ij - c.estimate_ji);
    const double size = std::max(std::abs(c.estimate_ij), std::abs(c.estimate_ji));
    if (gap > opts.symmetry_tol * size + opts.threshold) {
      c.label = AlepLabel::Indeterminate;
    } else if (c.estimate > opts.threshold) {
      c.label = AlepLabel::Complement;
    } else if (c.estimate < -opts.threshold) {
      c.label = AlepLabel::Substitute;
    } else {
      c.label = AlepLabel::Neutral;
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<AlepClassification> alep_classify(const ReconstructedUtility& recon, const std::vector<Point>& points,
                                              std::size_t i, std::size_t j, const AlepOptions& opts) {
  if (recon.depth() < kMinAlepDepth) {
    throw PreconditionError("alep_classify: reconstruction depth " + std::to_string(recon.depth()) +
                            " is below " + std::to_string(kMinAlepDepth) +
                            "; second derivatives of a coarse ladder are not informative");
  }
  return alep_classify([&](const Point& x) { return recon(x); }, recon.oracle().domain(), points, i, j, opts);
}

nlohmann::json to_json(const AlepClassification& c) {
  return {{"x", c.x.coords()},
          {"pair", {c.i, c.j}},
          {"estimate", c.estimate},
          {"estimate_ij", c.estimate_ij},
          {"estimate_ji", c.estimate_ji},
          {"label", std::string(to_string(c.label))}};
}

std::string to_csv(const std::vector<AlepClassification>& rows) {
  std::string out;
  const std::size_t n = rows.empty() ? 0 : rows.front().x.size();
  for (std::size_t k = 0; k < n; ++k) out += "x" + std::to_string(k + 1) + ",";
  out += "i,j,d_ij,d_ji,estimate,label\n";
  for (const auto& c : rows) {
    for (double v : c.x) out += fmt(v) + ",";
    out += std::to_string(c.i + 1) + "," + std::to_string(c.j + 1) + "," + fmt(c.estimate_ij) + "," +
           fmt(c.estimate_ji) + "," + fmt(c.estimate) + "," + std::string(to_string(c.label)) + "\n";
  }
  return out;
}

std::vector<Point> grid_points(const BoxDomain& domain, std::size_t per_axis, double margin) {
  if (per_axis < 1) throw PreconditionError("grid_points: need at least one point per axis");
  const BoxDomain inner = domain.inset(margin);
  const std::size_t n = inner.dimension();
  std::size_t total = 1;
  for (std::size_t k = 0; k < n; ++k) total *= per_axis;
  std::vector<Point> out;
  out.reserve(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::vector<double> c(n);
    std::size_t rest = idx;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t m = rest % per_axis;
      rest /= per_axis;
      const auto& f = inner.faces()[k];
      c[k] = per_axis == 1 ? 0.5 * (f.lo + f.hi) : f.lo + (f.hi - f.lo) * static_cast<double>(m) / (per_axis - 1);
    }
    out.emplace_back(std::move(c));
  }
  return out;
}

}  // namespace alt
