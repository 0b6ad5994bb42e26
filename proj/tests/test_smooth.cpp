#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"

#include "alt/construct.hpp"
#include "alt/errors.hpp"
#include "alt/smooth.hpp"
#include "alt/zoo.hpp"

using namespace alt;

namespace {

AltOracle oracle_of(const std::string& name) { return make_difference_oracle(*find_utility(name)); }

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST_CASE("f on the diagonal: closed forms") {
  const auto comp = oracle_of("kinked_composite");
  for (double a : {0.1, 0.01, 0.001}) {
    // g(f) = (g(1-a) + g(1+a)) / 2 = -a/4 below the kink.
    CHECK(solve_f(comp, a, 1.0) == doctest::Approx(1.0 - a / 4.0).epsilon(1e-9));
  }
  for (const char* name : {"min", "cobb_douglas", "linear"}) {
    INFO(name);
    CHECK(solve_f(oracle_of(name), 0.5, 2.0) == doctest::Approx(2.0).epsilon(1e-9));
  }
  // log((e^0.4 + e^0.6) / 2)
  CHECK(solve_f(oracle_of("exp1d"), 0.1, 0.5) == doctest::Approx(0.50499168882164653).epsilon(1e-9));
}

TEST_CASE("f rejects bad brackets") {
  const auto o = oracle_of("cobb_douglas");
  CHECK_THROWS_AS(solve_f(o, 2.0, 2.0), PreconditionError);
  CHECK_THROWS_AS(solve_f(o, -0.1, 2.0), PreconditionError);
  CHECK_THROWS_AS(solve_f(o, 1.0, 9.5), DomainError);
  CHECK_THROWS_AS(solve_f(o, 0.5, 0.3), PreconditionError);
}

TEST_CASE("line smoothness verdicts") {
  const auto comp = line_smoothness_limit(oracle_of("kinked_composite"), 1.0);
  CHECK(comp.limit == doctest::Approx(0.25).epsilon(1e-3));
  CHECK(comp.verdict == LineVerdict::NotLineSmooth);
  CHECK(comp.within_concavity_bound);
  CHECK(comp.table.size() == 13);
  for (const auto& row : comp.table) CHECK(row.quotient == doctest::Approx(0.25).epsilon(1e-4));

  for (const char* name : {"min", "cobb_douglas"}) {
    INFO(name);
    const auto r = line_smoothness_limit(oracle_of(name), 1.0);
    CHECK(std::abs(r.limit) < 1e-3);
    CHECK(r.verdict == LineVerdict::LineSmooth);
    CHECK(r.within_concavity_bound);
  }

  // Convex: f exceeds b and the quotient leaves [0, 1].
  const auto ex = line_smoothness_limit(oracle_of("exp1d"), 0.5);
  CHECK_FALSE(ex.within_concavity_bound);
  CHECK(ex.verdict == LineVerdict::LineSmooth);
}

TEST_CASE("default schedule halves from b/16 to b/65536") {
  const auto s = default_schedule(2.0);
  REQUIRE(s.size() == 13);
  CHECK(s.front() == 0.125);
  CHECK(s.back() == std::ldexp(2.0, -16));
  LineSmoothnessOptions opts;
  opts.schedule = {0.05, 0.1};
  CHECK_THROWS_AS(line_smoothness_limit(oracle_of("linear"), 1.0, opts), PreconditionError);
}

TEST_CASE("calibration returns the diagonal scale of the indifferent point") {
  CHECK(calibrate(oracle_of("cobb_douglas"), Point{4.0, 1.0}) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(calibrate(oracle_of("linear"), Point{3.0, 1.0}) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(calibrate(oracle_of("ces"), Point{1.0, 4.0}) == doctest::Approx(2.25).epsilon(1e-10));
  CHECK(calibrate(oracle_of("min"), Point{7.0, 3.0}) == doctest::Approx(3.0).epsilon(1e-10));
  CHECK_THROWS_AS(calibrate(oracle_of("linear"), Point{10.0, 10.5}), DomainError);
}

TEST_CASE("smoothness splits into line smoothness and calibration smoothness") {
  DebreuOptions d;
  d.trials = 32;
  d.workers = 2;
  struct Case {
    const char* name;
    bool line_smooth;
    bool calibration_smooth;
  };
  // Composite: smooth calibration, kinked along the diagonal.
  // min: linear along the diagonal, kinked calibration there.
  const Case cases[] = {{"cobb_douglas", true, true}, {"kinked_composite", false, true}, {"min", true, false}};
  for (const auto& c : cases) {
    INFO(c.name);
    const auto o = oracle_of(c.name);
    const auto line = line_smoothness_limit(o, 1.0);
    const auto proxy = debreu_smoothness_proxy(o, Sampler(o.domain(), 12), d);
    CHECK((line.verdict == LineVerdict::LineSmooth) == c.line_smooth);
    CHECK(proxy.passed() == c.calibration_smooth);
    CHECK(proxy.proxy);
    CHECK(proxy.smooth_samples + proxy.rough_samples == d.trials);
  }
  const auto m = oracle_of("min");
  const auto proxy = debreu_smoothness_proxy(m, Sampler(m.domain(), 12), d);
  CHECK(proxy.diagonal_rough == d.diagonal_samples);
  REQUIRE_FALSE(proxy.rough.empty());
  CHECK_FALSE(proxy.rough.front().one_sided_ok);
}

TEST_CASE("central differences converge at second order") {
  const auto spec = *find_utility("ces");
  const Point x{1.0, 4.0};
  const std::vector<double> exact{3.0, 1.5};
  auto grad_err = [&](double h) {
    const auto g = numeric_gradient(spec.value, spec.domain, x, h);
    return std::max(std::abs(g[0] - exact[0]), std::abs(g[1] - exact[1]));
  };
  CHECK(grad_err(1e-2) / grad_err(5e-3) >= 3.0);
  const auto H = numeric_hessian(spec.value, spec.domain, x, 1e-3);
  CHECK(H[0][0] == doctest::Approx(-1.0).epsilon(1e-4));
  CHECK(H[0][1] == doctest::Approx(0.25).epsilon(1e-4));
  CHECK(H[1][0] == doctest::Approx(0.25).epsilon(1e-4));
  CHECK(H[1][1] == doctest::Approx(-0.0625).epsilon(1e-4));

  const auto lin = *find_utility("linear");
  const auto HL = numeric_hessian(lin.value, lin.domain, Point{3.0, 7.0}, 1e-3);
  for (const auto& row : HL)
    for (double v : row) CHECK(std::abs(v) < 1e-6);
  CHECK_THROWS_AS(numeric_gradient(lin.value, lin.domain, Point{0.1005, 5.0}, 1e-3), DomainError);
}

TEST_CASE("cross partial signs label pairs") {
  const BoxDomain box(Point{0.5, 0.5}, Point{5.0, 5.0});
  const auto pts = grid_points(box, 4);
  CHECK(pts.size() == 16);
  auto all = [&](const ScalarField& u, AlepLabel want) {
    for (const auto& r : alep_classify(u, box, pts, 0, 1)) {
      if (r.label != want) return false;
    }
    return true;
  };
  CHECK(all([](const Point& x) { return std::sqrt(x[0] * x[1]); }, AlepLabel::Complement));
  CHECK(all([](const Point& x) { return std::sqrt(x[0] + x[1]); }, AlepLabel::Substitute));
  CHECK(all([](const Point& x) { return std::log(x[0]) + std::log(x[1]); }, AlepLabel::Neutral));
  // Mixed partials of x y (x^2 - y^2) / (x^2 + y^2) at the origin are -1 and +1.
  const ScalarField peano = [](const Point& x) {
    const double r2 = x[0] * x[0] + x[1] * x[1];
    return r2 == 0.0 ? 0.0 : x[0] * x[1] * (x[0] * x[0] - x[1] * x[1]) / r2;
  };
  const auto odd = alep_classify(peano, BoxDomain(Point{-1.0, -1.0}, Point{1.0, 1.0}), {Point{0.0, 0.0}}, 0, 1);
  CHECK(odd.front().label == AlepLabel::Indeterminate);
  CHECK(odd.front().estimate_ij * odd.front().estimate_ji < 0.0);
  CHECK_THROWS_AS(alep_classify([](const Point& x) { return x[0]; }, box, pts, 0, 0), PreconditionError);
}

TEST_CASE("classification on a reconstruction needs a deep ladder") {
  ReconstructionOptions ro;
  ro.depth = 8;
  const auto shallow = reconstruct(oracle_of("cobb_douglas"), ro);
  CHECK_THROWS_AS(alep_classify(shallow, {Point{2.0, 3.0}}, 0, 1), PreconditionError);
  ro.depth = kMinAlepDepth;
  const auto deep = reconstruct(oracle_of("cobb_douglas"), ro);
  for (const auto& r : alep_classify(deep, grid_points(deep.oracle().domain(), 3), 0, 1)) {
    CHECK(r.label == AlepLabel::Complement);
  }
}

TEST_CASE("reconstruction factors through calibration") {
  const auto o = oracle_of("log_sum");
  ReconstructionOptions ro;
  ro.depth = 10;
  const auto recon = reconstruct(o, ro);
  const Point lo = o.domain().lower();
  const Point hi = o.domain().upper();
  const Sampler s(o.domain(), 13);
  for (std::size_t i = 0; i < 50; ++i) {
    auto rng = s.stream(i);
    const Point x = s.draw(rng);
    const double c = calibrate(o, x);
    const double t = (c - lo[0]) / (hi[0] - lo[0]);
    CHECK(std::abs(recon(x) - recon(lerp(lo, hi, t))) <= recon.interpolation_budget());
  }
}

TEST_CASE("reports serialize with stable columns") {
  const auto rep = line_smoothness_limit(oracle_of("cobb_douglas"), 1.0);
  const auto csv = to_csv(rep);
  CHECK(first_line(csv) == "b,a,f,quotient");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 14);
  const auto j = to_json(rep);
  CHECK(j["verdict"] == "line-smooth");
  CHECK(j["table"].size() == 13);

  const BoxDomain box(Point{1.0, 1.0}, Point{2.0, 2.0});
  const auto rows = alep_classify([](const Point& x) { return x[0] * x[1]; }, box, grid_points(box, 2), 0, 1);
  CHECK(first_line(to_csv(rows)) == "x1,x2,i,j,d_ij,d_ji,estimate,label");
  CHECK(to_json(rows.front())["label"] == "complement");
}
