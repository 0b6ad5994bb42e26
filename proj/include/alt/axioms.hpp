#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "alt/oracle.hpp"
#include "alt/sampling.hpp"

namespace alt {

// A tuple of points on which an axiom check failed, with the oracle readings
// that make it a violation.
struct Witness {
  std::size_t sample = 0;
  std::vector<Point> points;
  std::vector<std::string> outputs;
};

struct AxiomReport {
  std::string axiom;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t evaluated = 0;        // samples on which the axiom had something to say
  std::size_t violation_count = 0;  // total, including witnesses beyond the cap
  std::vector<Witness> violations;  // capped
  bool proxy = false;               // necessary-condition proxy, not a proof
  std::string note;
  nlohmann::json parameters = nlohmann::json::object();

  bool passed() const { return violation_count == 0; }
};

nlohmann::json to_json(const AxiomReport& report);
AxiomReport axiom_report_from_json(const nlohmann::json& j);

struct CheckOptions {
  std::size_t trials = 1000;
  unsigned workers = 1;
  std::size_t witness_cap = 10;
};

struct ContinuityOptions {
  double delta = 0.05;            // largest perturbation, as a fraction of each face's extent
  std::size_t levels = 40;        // radius halvings before a quadruple is declared unstable
  std::size_t perturbations = 8;  // random perturbations tried per radius
};

// Antisymmetry and reflexivity of the comparator itself.
AxiomReport check_oracle_contract(const AltOracle& oracle, const Sampler& sampler, const CheckOptions& opts);

AxiomReport check_consistency(const AltOracle& oracle, const Sampler& sampler, const CheckOptions& opts);

// Equal quadruples are manufactured by solving for w with [x,y]=[z,w] (and
// [x,z]=[y,w]); each trial also probes the degenerate [x,x]=[y,y].
AxiomReport check_crossover(const AltOracle& oracle, const Sampler& sampler, const CheckOptions& opts);

AxiomReport check_second_consistency(const AltOracle& oracle, const Sampler& sampler, const CheckOptions& opts);

// Openness of strict outcomes: a Greater quadruple must stay Greater on some
// neighbourhood. Radii delta*extent*2^-j, j < levels, are tried in turn; the
// quadruple is a witness when no radius is stable.
AxiomReport check_continuity_proxy(const AltOracle& oracle, const Sampler& sampler, const CheckOptions& opts,
                                   const ContinuityOptions& copts = {});

AxiomReport check_monotonicity(const AltOracle& oracle, const Sampler& sampler, const CheckOptions& opts);

// Single-tuple probes; nullopt when the tuple does not violate the axiom.
std::optional<Witness> probe_oracle_contract(const AltOracle& o, const Point& x, const Point& y, const Point& z,
                                             const Point& w);
std::optional<Witness> probe_consistency(const AltOracle& o, const Point& x, const Point& y, const Point& z);
std::optional<Witness> probe_crossover(const AltOracle& o, const Point& x, const Point& y, const Point& z,
                                       const Point& w);
std::optional<Witness> probe_second_consistency(const AltOracle& o, const Point& x, const Point& y, const Point& z);
std::optional<Witness> probe_monotonicity(const AltOracle& o, const Point& x, const Point& y);
// `quad` holds x,y,z,w concatenated. Searches perturbations with the given rng.
std::optional<Witness> probe_continuity(const AltOracle& o, const std::vector<Point>& quad, std::mt19937_64& rng,
                                        const ContinuityOptions& copts);

// Re-evaluates a stored witness against the oracle; true when it is still a
// violation of the report's axiom.
bool replay_witness(const AltOracle& oracle, const AxiomReport& report, const Witness& witness);

}  // namespace alt
