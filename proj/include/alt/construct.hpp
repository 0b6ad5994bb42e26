#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "json.hpp"

#include "alt/axioms.hpp"
#include "alt/geometry.hpp"
#include "alt/oracle.hpp"
#include "alt/sampling.hpp"

namespace alt {

// Head: the moving point x appears as [x, pivot]; Tail: as [pivot, x].
// Either way it is compared against the fixed bracket [z, w].
enum class CrossingKind { Head, Tail };

struct CrossingTarget {
  CrossingKind kind = CrossingKind::Head;
  Point pivot;
  Point z;
  Point w;
};

struct SegmentPoint {
  double t = 0.0;
  Point point;
  bool hit_equal = false;
};

// Finds x on `seg` whose bracket reads Equal to [z, w]. The start of the
// segment must lie in D (bracket <= [z,w]) and the end in U (bracket >= [z,w]).
SegmentPoint solve_crossing_at(const AltOracle& oracle, const Segment& seg, const CrossingTarget& target,
                               double tol_t);
Point solve_crossing(const AltOracle& oracle, const Segment& seg, const CrossingTarget& target, double tol_t);

// y on the segment x -> z with [y,x] = [z,y]; requires z strictly preferred to x
// and re-checks z > y > x afterwards.
SegmentPoint solve_midpoint_at(const AltOracle& oracle, const Segment& seg, double tol_t);
Point solve_midpoint(const AltOracle& oracle, const Point& x, const Point& z, double tol_t);

struct ArchimedeanSteps {
  std::size_t k = 0;
  std::vector<Point> steps;  // a_0 = y, a_1 = x, ..., a_k
};

// Smallest k with [a_1,a_0] > [z,a_k], stepping equal intensities from y
// through x toward z. Needs x > y and z >~ x.
ArchimedeanSteps archimedean_count(const AltOracle& oracle, const Point& x, const Point& y, const Point& z,
                                   std::size_t cap, double tol_t = 1e-12);

// Rungs a_i^k along a reference segment, stored as segment parameters.
// Rung a_i^k carries the value i / 2^k.
class DyadicLadder {
 public:
  DyadicLadder(Segment reference, int depth) : reference_(std::move(reference)), depth_(depth) {}

  const Segment& reference() const { return reference_; }
  int depth() const { return depth_; }

  int first_index(int level) const { return levels_.at(level).first; }
  int last_index(int level) const {
    return levels_.at(level).first + static_cast<int>(levels_.at(level).params.size()) - 1;
  }
  bool has(int i, int level) const;
  double param(int i, int level) const;
  Point rung(int i, int level) const { return reference_.at(param(i, level)); }
  static double value(int i, int level);
  std::span<const double> level_params(int level) const { return levels_.at(level).params; }
  std::size_t rung_count(int level) const { return levels_.at(level).params.size(); }

  void push_level(int first, std::vector<double> params) { levels_.push_back({first, std::move(params)}); }
  int levels() const { return static_cast<int>(levels_.size()); }

 private:
  struct Level {
    int first = 0;
    std::vector<double> params;
  };
  Segment reference_;
  int depth_;
  std::vector<Level> levels_;
};

struct LadderOptions {
  int depth = 10;
  double tol_t = 1e-12;
};

// Anchors are parameters on `reference`: value 0 at y_t, value 1 at x_t.
DyadicLadder build_ladder(const AltOracle& oracle, const Segment& reference, double y_t, double x_t,
                          const LadderOptions& opts);
DyadicLadder build_ladder(const AltOracle& oracle, const Point& y_star, const Point& x_star,
                          const LadderOptions& opts);

// Largest deviation of the stored rungs from the oracle-checked invariants:
// returns the number of consecutive-rung pairs whose step does not read Equal
// to [a_1^k, a_0^k], and of consecutive rungs not strictly increasing.
struct LadderAudit {
  std::size_t spacing_failures = 0;
  std::size_t ordering_failures = 0;
  std::size_t checked = 0;
};
LadderAudit audit_ladder(const AltOracle& oracle, const DyadicLadder& ladder);

struct Anchors {
  double y_t = 0.0;  // value 0
  double x_t = 1.0;  // value 1
};

struct ReconstructionOptions {
  int depth = 10;
  double tol_t = 1e-12;
  Anchors anchors;
  // Custom strictly ranked reference path; default is the main diagonal.
  std::optional<Segment> reference;
  std::size_t monotonicity_trials = 256;
  std::uint64_t monotonicity_seed = 0x5eed;
};

struct Evaluation {
  double value = 0.0;
  double calibration_t = 0.0;  // parameter on the reference segment of the indifferent point
  bool above_range = false;    // x preferred to the top of the reference segment
  bool below_range = false;
  bool extrapolated = false;   // beyond the outermost rung; value clamped
};

class ReconstructedUtility {
 public:
  ReconstructedUtility(AltOracle oracle, DyadicLadder ladder, Anchors anchors, double tol_t,
                       std::uint64_t construction_calls);

  double operator()(const Point& x) const { return evaluate_detailed(x).value; }
  Evaluation evaluate_detailed(const Point& x) const;
  // Parameter t with reference(t) indifferent to x, clamped to [0, 1].
  double calibrate(const Point& x, bool* above = nullptr, bool* below = nullptr) const;
  double value_at_param(double t, bool* extrapolated = nullptr) const;

  const DyadicLadder& ladder() const { return ladder_; }
  const AltOracle& oracle() const { return oracle_; }
  const Anchors& anchors() const { return anchors_; }
  int depth() const { return ladder_.depth(); }
  double tol_t() const { return tol_t_; }
  std::uint64_t construction_calls() const { return construction_calls_; }
  // Worst-case |u_hat - u_normalized| at any point: one deepest rung step.
  double interpolation_budget() const;

  nlohmann::json to_json() const;

 private:
  AltOracle oracle_;
  DyadicLadder ladder_;
  Anchors anchors_;
  double tol_t_;
  std::uint64_t construction_calls_;
};

// Throws PreconditionError when the default diagonal is used with a
// non-monotone oracle, or a custom path is not strictly increasing.
ReconstructedUtility reconstruct(const AltOracle& oracle, const ReconstructionOptions& opts = {});

double evaluate(const ReconstructedUtility& recon, const Point& x);

struct AffineFit {
  double alpha = 0.0;
  double beta = 0.0;
  double max_residual = 0.0;
  std::size_t samples = 0;
};

// Fits u2 ~ alpha*u1 + beta by least squares over sampled points.
AffineFit fit_affine(const std::vector<double>& u1, const std::vector<double>& u2);

AffineFit verify_affine_uniqueness(const AltOracle& oracle, const Anchors& first, const Anchors& second,
                                   const ReconstructionOptions& base, const Sampler& sampler, std::size_t samples);

// Pairs x > y whose reconstructed values differ by more than 2^(1-K) must have
// a rung strictly between them.
AxiomReport check_density(const ReconstructedUtility& recon, const Sampler& sampler, const CheckOptions& opts,
                          int min_depth = 0);

// Random (i, j, k) at one level: [a_{i+k}, a_i] must read Equal to [a_{j+k}, a_j].
AxiomReport check_ladder_equivalence(const AltOracle& oracle, const DyadicLadder& ladder, int level,
                                     const Sampler& sampler, const CheckOptions& opts);

struct RepresentationCheck {
  std::size_t quadruples = 0;
  std::size_t quad_mismatches = 0;       // outside the dead band
  std::size_t quad_inside_band = 0;      // reconstructed gap within the dead band
  std::size_t pairs = 0;
  std::size_t pair_mismatches = 0;
  double dead_band_quad = 0.0;
  double dead_band_pair = 0.0;
};

// Sign of u(x)-u(y)-u(z)+u(w) against the oracle reading; a dead band of
// 4 (quadruples) or 2 (pairs) interpolation budgets is excluded unless
// `dead_band` overrides both.
RepresentationCheck check_representation(const ReconstructedUtility& recon, const Sampler& sampler,
                                         std::size_t trials, unsigned workers = 1,
                                         std::optional<double> dead_band = std::nullopt);

}  // namespace alt
