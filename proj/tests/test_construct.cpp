#include <cmath>

#include "doctest.h"

#include "alt/construct.hpp"
#include "alt/errors.hpp"
#include "alt/zoo.hpp"

using namespace alt;

namespace {

AltOracle oracle_of(const std::string& name) { return make_difference_oracle(*find_utility(name)); }

// Normalized true utility: 0 at the lower corner, 1 at the upper corner.
double normalized(const UtilitySpec& s, const Point& x) {
  const double lo = s.value(s.domain.lower());
  const double hi = s.value(s.domain.upper());
  return (s.value(x) - lo) / (hi - lo);
}

}  // namespace

TEST_CASE("crossing solver finds x with [x, pivot] = [z, w]") {
  const auto o = oracle_of("identity1d");
  const CrossingTarget head{CrossingKind::Head, Point{0.2}, Point{0.7}, Point{0.4}};
  const auto sp = solve_crossing_at(o, Segment(Point{0.2}, Point{1.0}), head, 1e-12);
  CHECK(sp.point[0] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(sp.hit_equal);
  // Tail: [pivot, x] = [z, w] means x = pivot - (z - w).
  const CrossingTarget tail{CrossingKind::Tail, Point{0.9}, Point{0.7}, Point{0.4}};
  const auto t = solve_crossing(o, Segment(Point{0.9}, Point{0.0}), tail, 1e-12);
  CHECK(t[0] == doctest::Approx(0.6).epsilon(1e-10));
  CHECK_THROWS_AS(solve_crossing(o, Segment(Point{0.8}, Point{1.0}), head, 1e-12), BracketError);
}

TEST_CASE("midpoint solver: [y,x] = [z,y] for u(t) = t^2 between 1 and 2") {
  const auto o = oracle_of("square1d");
  const Point y = solve_midpoint(o, Point{1.0}, Point{2.0}, 1e-12);
  // u(y) = (1 + 4) / 2, so y = sqrt(2.5).
  CHECK(y[0] == doctest::Approx(1.5811388300841898).epsilon(1e-10));
  CHECK_THROWS_AS(solve_midpoint(o, Point{2.0}, Point{1.0}, 1e-12), OrderingError);
  CHECK_THROWS_AS(solve_midpoint(o, Point{1.0}, Point{2.0}, 0.0), PreconditionError);
}

TEST_CASE("Archimedean stepping matches the closed-form count") {
  const auto o = oracle_of("identity1d");
  // Steps of 0.1 from 0.1: the count is the smallest k with 0.75 - 0.2 < 0.1 k.
  const auto a = archimedean_count(o, Point{0.2}, Point{0.1}, Point{0.75}, 100);
  CHECK(a.k == 6);
  REQUIRE(a.steps.size() == 7);
  for (std::size_t i = 0; i < a.steps.size(); ++i) CHECK(a.steps[i][0] == doctest::Approx(0.1 * (i + 1)));
  CHECK_THROWS_AS(archimedean_count(o, Point{0.2}, Point{0.1}, Point{0.75}, 3), ArchimedeanViolation);
  CHECK_THROWS_AS(archimedean_count(o, Point{0.1}, Point{0.2}, Point{0.75}, 10), OrderingError);
}

TEST_CASE("Archimedean counts obey (k-1) d <= u(z)-u(x) < k d on a concave fixture") {
  const auto spec = *find_utility("log_sum");
  const auto o = make_difference_oracle(spec);
  std::mt19937_64 rng(21);
  int checked = 0;
  for (int n = 0; n < 200 && checked < 40; ++n) {
    Point p[3] = {spec.domain.uniform(rng), spec.domain.uniform(rng), spec.domain.uniform(rng)};
    const auto by_value = [&](const Point& a, const Point& b) { return spec.value(a) < spec.value(b); };
    std::sort(std::begin(p), std::end(p), by_value);
    const Point &y = p[0], &x = p[1], &z = p[2];
    const double d = spec.value(x) - spec.value(y);
    const double gap = spec.value(z) - spec.value(x);
    if (d < 0.05 || gap / d > 100) continue;
    const auto a = archimedean_count(o, x, y, z, 500);
    const double k = static_cast<double>(a.k);
    CHECK((k - 1.0) * d <= gap + 1e-7);
    CHECK(gap < k * d + 1e-7);
    ++checked;
  }
  CHECK(checked >= 20);
}

TEST_CASE("dyadic ladder for exp places rungs at log(1 + (e-1) i / 2^k)") {
  const auto o = oracle_of("exp1d");
  const auto ladder = build_ladder(o, Point{0.0}, Point{1.0}, LadderOptions{3, 1e-12});
  CHECK(ladder.levels() == 4);
  CHECK(ladder.first_index(0) == 0);
  CHECK(ladder.last_index(0) == 1);
  CHECK(ladder.param(1, 1) == doctest::Approx(0.62011450695827752).epsilon(1e-9));
  CHECK(ladder.param(1, 2) == doctest::Approx(0.35737401950878854).epsilon(1e-9));
  CHECK(ladder.param(3, 2) == doctest::Approx(0.82798893924286975).epsilon(1e-9));
  CHECK(ladder.rung_count(3) == 9);
  CHECK(DyadicLadder::value(3, 2) == 0.75);
  CHECK(DyadicLadder::value(-2, 3) == -0.25);
  // Rungs of a coarser level recur at the next one.
  for (int k = 0; k < 3; ++k) {
    for (int i = ladder.first_index(k); i <= ladder.last_index(k); ++i) {
      CHECK(ladder.param(2 * i, k + 1) == ladder.param(i, k));
    }
  }
  CHECK_THROWS_AS(ladder.param(5, 1), PreconditionError);
}

TEST_CASE("level 0 extends beyond the anchors while the box allows") {
  const auto o = oracle_of("identity1d");
  const auto ladder = build_ladder(o, main_diagonal(o.domain()), 0.25, 0.5, LadderOptions{2, 1e-12});
  CHECK(ladder.first_index(0) == -1);
  CHECK(ladder.last_index(0) == 3);
  CHECK(std::abs(ladder.param(-1, 0)) < 1e-8);
  CHECK(ladder.param(2, 0) == doctest::Approx(0.75).epsilon(1e-10));
  CHECK(ladder.param(3, 0) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(ladder.first_index(2) <= -4);
  CHECK_THROWS_AS(build_ladder(o, main_diagonal(o.domain()), 0.5, 0.25, LadderOptions{}), PreconditionError);
}

TEST_CASE("ladder invariants hold as read by the oracle") {
  for (const char* name : {"cobb_douglas", "exp1d", "kinked_composite", "cube1d"}) {
    INFO(name);
    const auto o = oracle_of(name);
    const auto ladder = build_ladder(o, o.domain().lower(), o.domain().upper(), LadderOptions{7, 1e-12});
    const auto audit = audit_ladder(o, ladder);
    CHECK(audit.checked > 0);
    CHECK(audit.spacing_failures == 0);
    CHECK(audit.ordering_failures == 0);
    CheckOptions opts;
    opts.trials = 300;
    for (int k : {0, 3, 7}) {
      if (ladder.rung_count(k) < 2) continue;
      CHECK(check_ladder_equivalence(o, ladder, k, Sampler(o.domain(), 50 + k), opts).passed());
    }
  }
}

TEST_CASE("anchors off the diagonal are rejected") {
  const auto o = oracle_of("linear");
  CHECK_THROWS_AS(build_ladder(o, Point{0.1, 0.2}, Point{5.0, 5.0}, LadderOptions{}), PreconditionError);
  CHECK_THROWS_AS(build_ladder(o, Point{5.0, 5.0}, Point{1.0, 1.0}, LadderOptions{}), OrderingError);
}

TEST_CASE("reconstruction reproduces normalized utilities within the interpolation budget") {
  struct Case {
    const char* name;
    Point x;
    double expected;
  };
  // Expected values: (u(x) - u(lower)) / (u(upper) - u(lower)).
  const Case cases[] = {{"exp1d", Point{0.3}, 0.20360967670231164},
                        {"exp1d", Point{0.7}, 0.58998046227353153},
                        {"log_sum", Point{2.0, 3.0}, 0.69453781259591091},
                        {"cobb_douglas", Point{4.0, 1.0}, 0.19191919191919192}};
  for (const auto& c : cases) {
    INFO(c.name);
    const auto recon = reconstruct(oracle_of(c.name));
    CHECK(std::abs(recon(c.x) - c.expected) <= recon.interpolation_budget());
  }
}

TEST_CASE("reconstruction error does not grow with depth") {
  const auto spec = *find_utility("ces");
  const auto o = make_difference_oracle(spec);
  const Sampler s(spec.domain, 77);
  double previous = INFINITY;
  for (int depth : {2, 4, 6, 8}) {
    ReconstructionOptions ro;
    ro.depth = depth;
    const auto recon = reconstruct(o, ro);
    double worst = 0.0;
    for (std::size_t i = 0; i < 200; ++i) {
      auto rng = s.stream(i);
      const Point x = s.draw(rng);
      worst = std::max(worst, std::abs(recon(x) - normalized(spec, x)));
    }
    CHECK(worst <= recon.interpolation_budget());
    CHECK(worst <= previous * (1.0 + 1e-9));
    previous = worst;
  }
}

TEST_CASE("reconstruction is unchanged by a positive affine transform of the utility") {
  const auto spec = *find_utility("cobb_douglas");
  UtilitySpec scaled = spec;
  scaled.value = [u = spec.value](const Point& x) { return 4.0 * u(x) + 11.0; };
  const auto o1 = make_difference_oracle(spec);
  const auto o2 = make_difference_oracle(scaled, scaled.domain, 4.0 * o1.equality_tolerance());
  ReconstructionOptions ro;
  ro.depth = 6;
  const auto r1 = reconstruct(o1, ro);
  const auto r2 = reconstruct(o2, ro);
  const Sampler s(spec.domain, 5);
  for (std::size_t i = 0; i < 100; ++i) {
    auto rng = s.stream(i);
    const Point x = s.draw(rng);
    CHECK(r1(x) == doctest::Approx(r2(x)).epsilon(1e-9));
  }
}

TEST_CASE("non-monotone fixtures need a custom reference path") {
  const auto spec = *find_utility("neg_quadratic");
  const auto o = make_difference_oracle(spec);
  CHECK_THROWS_AS(reconstruct(o), PreconditionError);
  ReconstructionOptions ro;
  ro.reference = spec.increasing_path;
  const auto recon = reconstruct(o, ro);
  // On [0,1] the path runs from u=-1 to u=0, so u_hat = 1 - (t-1)^2; symmetric about 1.
  CHECK(recon(Point{0.5}) == doctest::Approx(0.75).epsilon(2e-3));
  CHECK(recon(Point{1.5}) == doctest::Approx(0.75).epsilon(2e-3));
  ro.reference = Segment(Point{0.0}, Point{2.0});
  CHECK_THROWS_AS(reconstruct(o, ro), PreconditionError);
}

TEST_CASE("points beyond the reference segment are clamped and flagged") {
  const auto o = oracle_of("identity1d");
  ReconstructionOptions ro;
  ro.depth = 4;
  ro.reference = Segment(Point{0.2}, Point{0.8});
  const auto recon = reconstruct(o, ro);
  const auto above = recon.evaluate_detailed(Point{0.95});
  CHECK(above.above_range);
  CHECK(above.value == 1.0);
  const auto below = recon.evaluate_detailed(Point{0.05});
  CHECK(below.below_range);
  CHECK(below.value == 0.0);
  const auto inside = recon.evaluate_detailed(Point{0.5});
  CHECK_FALSE(inside.above_range);
  CHECK(inside.value == doctest::Approx(0.5).epsilon(1e-9));
  CHECK_THROWS_AS(evaluate(recon, Point{1.5}), DomainError);
}

TEST_CASE("affine fit recovers alpha and beta and refuses degenerate data") {
  const std::vector<double> u1{0, 1, 2, 3}, u2{3, 5, 7, 9};
  const auto fit = fit_affine(u1, u2);
  CHECK(fit.alpha == doctest::Approx(2.0));
  CHECK(fit.beta == doctest::Approx(3.0));
  CHECK(fit.max_residual < 1e-12);
  CHECK_THROWS_AS(fit_affine({1, 1, 1}, {1, 2, 3}), PreconditionError);
  CHECK_THROWS_AS(fit_affine({1, 2}, {1}), PreconditionError);
}

TEST_CASE("two anchor choices give reconstructions related by a positive affine map") {
  const auto o = oracle_of("kinked_composite");
  ReconstructionOptions base;
  base.depth = 8;
  const auto fit = verify_affine_uniqueness(o, Anchors{0.0, 1.0}, Anchors{0.2, 0.6}, base, Sampler(o.domain(), 3), 200);
  CHECK(fit.alpha > 0.0);
  CHECK(fit.max_residual < 5e-3);
}

TEST_CASE("density and representation checks pass on a smooth fixture") {
  const auto o = oracle_of("cobb_douglas");
  ReconstructionOptions ro;
  ro.depth = 8;
  const auto recon = reconstruct(o, ro);
  CheckOptions opts;
  opts.trials = 500;
  const auto d = check_density(recon, Sampler(o.domain(), 8), opts);
  CHECK(d.passed());
  CHECK(d.evaluated > 100);
  CHECK_THROWS_AS(check_density(recon, Sampler(o.domain(), 8), opts, 10), PreconditionError);
  const auto rc = check_representation(recon, Sampler(o.domain(), 9), 500, 2);
  CHECK(rc.quad_mismatches == 0);
  CHECK(rc.pair_mismatches == 0);
  CHECK(rc.dead_band_quad == doctest::Approx(4.0 * recon.interpolation_budget()));
}

TEST_CASE("reconstruction serializes its ladder and tolerances") {
  ReconstructionOptions ro;
  ro.depth = 3;
  const auto recon = reconstruct(oracle_of("linear"), ro);
  const auto j = recon.to_json();
  CHECK(j["depth"] == 3);
  CHECK(j["levels"].size() == 4);
  CHECK(j["deepest_values"].size() == recon.ladder().rung_count(3));
  CHECK(j["tolerances"]["interpolation_budget"] == 0.125);
  CHECK(j["oracle_calls"].get<std::uint64_t>() == recon.construction_calls());
  CHECK(recon.construction_calls() > 0);
}
