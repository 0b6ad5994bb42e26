#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "alt/oracle.hpp"
#include "alt/sampling.hpp"
#include "alt/zoo.hpp"

namespace alt {

enum class LawVerdict { Holds, HoldsStrictly, Fails };
std::string_view to_string(LawVerdict v);

struct MidpointWitness {
  std::size_t sample = 0;
  Point x;
  Point y;
  Point z;               // the tested point; (x+y)/2 unless a dyadic sweep picked another t
  double t = 0.5;
  std::string reading;   // oracle output for [z,x] vs [y,z]; empty for function checks
  double margin = 0.0;   // u(z) - ((1-t)u(x) + t u(y)); function checks only
};

struct ConcavityVerdict {
  std::string check;
  LawVerdict verdict = LawVerdict::Holds;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t evaluated = 0;
  std::size_t violation_count = 0;
  std::vector<MidpointWitness> witnesses;  // capped
  bool strict_requested = false;
  std::size_t strict_evaluated = 0;        // pairs far enough apart to count for strictness
  std::size_t strict_failures = 0;         // of those, pairs that were not strictly Greater
  std::optional<MidpointWitness> strict_counterexample;
  int dyadic_depth = 1;
  double tolerance = 0.0;
  nlohmann::json parameters = nlohmann::json::object();

  bool holds() const { return verdict != LawVerdict::Fails; }
};

nlohmann::json to_json(const ConcavityVerdict& v);

struct GossenOptions {
  std::size_t trials = 10000;
  unsigned workers = 1;
  std::size_t witness_cap = 10;
  bool strict = true;
  // Pairs closer than this fraction of the box diagonal are left out of the
  // strictness count; their margin sits below the equality tolerance.
  double strict_floor = 1e-3;
};

// [z,x] >= [y,z] with z = (x+y)/2 on sampled pairs.
ConcavityVerdict check_ggfl(const AltOracle& oracle, const Sampler& sampler, const GossenOptions& opts = {});

// Same law in increment form: [x+v, x] >= [x+2v, x+v], sampling x and a
// feasible v directly.
ConcavityVerdict check_ggfl_increments(const AltOracle& oracle, const Sampler& sampler,
                                       const GossenOptions& opts = {});

// Oracle reading of one instance in each parameterization.
Intensity probe_ggfl(const AltOracle& oracle, const Point& x, const Point& y);
Intensity probe_ggfl_increments(const AltOracle& oracle, const Point& x, const std::vector<double>& v);

struct MidpointOptions {
  std::size_t trials = 10000;
  unsigned workers = 1;
  std::size_t witness_cap = 10;
  double tol = 0.0;
  bool strict = false;
  double strict_floor = 1e-3;
  // When set, every t = m/2^dyadic_depth in (0,1) is tested instead of 1/2.
  bool full_interval = false;
  int dyadic_depth = 6;
};

ConcavityVerdict check_midpoint_concavity(const std::function<double(const Point&)>& u, const Sampler& sampler,
                                          const MidpointOptions& opts = {});

struct RoundTripOptions {
  std::size_t trials = 10000;
  unsigned workers = 1;
  std::uint64_t seed = 7;
  int depth = 10;
  double tol_t = 1e-12;
};

struct RoundTripReport {
  std::string fixture;
  Concavity tag = Concavity::Unknown;
  ConcavityVerdict ggfl;
  ConcavityVerdict reconstruction;
  bool ggfl_agrees = false;
  bool reconstruction_agrees = false;
  std::vector<std::string> disagreements;

  bool agree() const { return ggfl_agrees && reconstruction_agrees; }
};

nlohmann::json to_json(const RoundTripReport& r);

// GGFL on the difference oracle and midpoint concavity of the reconstruction,
// both compared against the fixture's concavity tag. Fixtures that are not
// monotone are reconstructed along their increasing path.
RoundTripReport concavity_roundtrip(const UtilitySpec& spec, const BoxDomain& domain,
                                   const RoundTripOptions& opts = {});

}  // namespace alt
