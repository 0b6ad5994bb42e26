#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "alt/construct.hpp"
#include "alt/oracle.hpp"
#include "alt/sampling.hpp"
#include "alt/zoo.hpp"

namespace alt {

using ScalarField = std::function<double(const Point&)>;

// ---------------------------------------------------------------------------
// Line smoothness along the diagonal b*e.

// f with [f e, (b-a) e] = [(b+a) e, f e]. Requires 0 < a < b and both ends
// of the bracket inside the domain.
double solve_f(const AltOracle& oracle, double a, double b, double tol = 1e-10);

enum class LineVerdict { LineSmooth, NotLineSmooth, Inconclusive };
std::string_view to_string(LineVerdict v);

struct QuotientRow {
  double a = 0.0;
  double f = 0.0;
  double quotient = 0.0;  // (b - f) / a
  double noise = 0.0;     // solver tolerance divided by a
};

struct SmoothnessReport {
  double b = 1.0;
  std::vector<QuotientRow> table;
  std::vector<double> extrapolated;  // Richardson values over the tail of the schedule
  double limit = 0.0;
  double uncertainty = 0.0;
  LineVerdict verdict = LineVerdict::Inconclusive;
  bool within_concavity_bound = true;  // 0 <= quotient <= 1 up to noise
};

nlohmann::json to_json(const SmoothnessReport& r);
// Columns: b,a,f,quotient
std::string to_csv(const SmoothnessReport& r);

struct LineSmoothnessOptions {
  std::vector<double> schedule;  // empty: a_k = b 2^-k, k = 4..16
  double tol_default = 1e-10;
  std::size_t tail = 4;          // schedule points used for extrapolation
  double zero_band = 1e-3;       // |limit| below this (with small uncertainty) reads as zero
};

std::vector<double> default_schedule(double b);

SmoothnessReport line_smoothness_limit(const AltOracle& oracle, double b, const LineSmoothnessOptions& opts = {});

// ---------------------------------------------------------------------------
// Calibration function a(x): the diagonal scale c with x indifferent to c e.

// Throws RangeError when x is not bracketed by the diagonal inside the box.
double calibrate(const AltOracle& oracle, const Point& x, double tol = 1e-12);

struct DebreuOptions {
  std::size_t trials = 64;
  std::size_t diagonal_samples = 8;  // leading samples placed on the diagonal
  unsigned workers = 1;
  double h = 1e-4;                   // step, as a fraction of the largest box extent
  double halving_tol = 1e-2;         // relative change of the gradient from h to h/2
  double one_sided_tol = 5e-2;       // relative gap between left and right differences
  double margin = 0.05;              // inset of the sampling box
  std::size_t witness_cap = 10;
};

struct DebreuSample {
  std::size_t sample = 0;
  Point x;
  std::vector<double> gradient_h;
  std::vector<double> gradient_half;
  std::vector<double> left;
  std::vector<double> right;
  bool halving_ok = true;
  bool one_sided_ok = true;

  bool smooth() const { return halving_ok && one_sided_ok; }
};

struct DebreuReport {
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t smooth_samples = 0;
  std::size_t rough_samples = 0;
  std::size_t diagonal_rough = 0;
  std::vector<DebreuSample> rough;  // capped
  double h = 0.0;
  bool proxy = true;

  bool passed() const { return rough_samples == 0; }
};

nlohmann::json to_json(const DebreuReport& r);

// Numeric stand-in for Debreu's smoothness: smoothness of a(x) at sampled
// interior points. A pass is evidence, not a certificate.
DebreuReport debreu_smoothness_proxy(const AltOracle& oracle, const Sampler& sampler, const DebreuOptions& opts = {});

// ---------------------------------------------------------------------------
// Finite differences. `x` must sit at least 2h inside `domain`.

std::vector<double> numeric_gradient(const ScalarField& u, const BoxDomain& domain, const Point& x, double h);
Matrix numeric_hessian(const ScalarField& u, const BoxDomain& domain, const Point& x, double h);

enum class AlepLabel { Substitute, Complement, Neutral, Indeterminate };
std::string_view to_string(AlepLabel l);

struct AlepClassification {
  Point x;
  std::size_t i = 0;
  std::size_t j = 1;
  double estimate = 0.0;  // average of the two ordered stencils
  double estimate_ij = 0.0;
  double estimate_ji = 0.0;
  AlepLabel label = AlepLabel::Neutral;
};

struct AlepOptions {
  double h = 1e-3;
  double threshold = 1e-6;
  double symmetry_tol = 1e-2;  // relative disagreement that marks a point indeterminate
};

nlohmann::json to_json(const AlepClassification& c);
// Columns: x1..xn,i,j,d_ij,d_ji,estimate,label
std::string to_csv(const std::vector<AlepClassification>& rows);

std::vector<AlepClassification> alep_classify(const ScalarField& u, const BoxDomain& domain,
                                              const std::vector<Point>& points, std::size_t i, std::size_t j,
                                              const AlepOptions& opts = {});

constexpr int kMinAlepDepth = 12;

// Refuses ladders shallower than kMinAlepDepth: below that the reconstruction
// is too coarse for a second derivative to mean anything.
std::vector<AlepClassification> alep_classify(const ReconstructedUtility& recon, const std::vector<Point>& points,
                                              std::size_t i, std::size_t j, const AlepOptions& opts = {});

// Regular grid of `per_axis`^n points inset by `margin` of each extent.
std::vector<Point> grid_points(const BoxDomain& domain, std::size_t per_axis, double margin = 0.1);

}  // namespace alt
