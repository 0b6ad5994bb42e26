#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "alt/geometry.hpp"
#include "alt/oracle.hpp"

namespace alt {

using Vector = std::vector<double>;
using Matrix = std::vector<std::vector<double>>;

enum class Concavity { Concave, StrictlyConcave, NonConcave, Unknown };

std::string_view to_string(Concavity c);

struct SmoothnessTags {
  std::optional<bool> debreu;
  std::optional<bool> line;
};

struct UtilitySpec {
  std::string name;
  std::string description;
  std::size_t dimension = 1;
  std::function<double(const Point&)> value;
  std::function<Vector(const Point&)> gradient;  // empty when no closed form is supplied
  std::function<Matrix(const Point&)> hessian;   // likewise
  Concavity concavity = Concavity::Unknown;
  SmoothnessTags smoothness;
  bool continuous = true;
  bool monotone = true;
  BoxDomain domain;
  // Preference-increasing path for fixtures that are not monotone.
  std::optional<Segment> increasing_path;
};

struct IntensitySpec {
  std::string name;
  std::string description;
  std::size_t dimension = 1;
  std::function<double(const Point&, const Point&)> g;
  BoxDomain domain;
};

// 1e-9 times the spread of sampled utility values (corners included).
double default_equality_tolerance(const UtilitySpec& spec, const BoxDomain& domain);
double default_equality_tolerance(const IntensitySpec& spec, const BoxDomain& domain);

// Comparator: classified sign of (u(x)-u(y)) - (u(z)-u(w)).
AltOracle make_difference_oracle(const UtilitySpec& spec, const BoxDomain& domain,
                                 std::optional<double> equality_tolerance = std::nullopt);
AltOracle make_difference_oracle(const UtilitySpec& spec);

// Comparator: classified sign of g(x,y) - g(z,w).
AltOracle make_intensity_oracle(const IntensitySpec& spec, const BoxDomain& domain,
                                std::optional<double> equality_tolerance = std::nullopt);
AltOracle make_intensity_oracle(const IntensitySpec& spec);

const std::vector<UtilitySpec>& catalog();
const std::vector<IntensitySpec>& intensity_catalog();
std::optional<UtilitySpec> find_utility(std::string_view name);
std::optional<IntensitySpec> find_intensity(std::string_view name);

// u(x) = g(sqrt(x1 x2)) with g(c) = c-1 for c <= 1, (c-1)/2 for c > 1.
double kinked_composite(const Point& x);

// Utility from the JSON expression form:
//   {"name": ..., "dimension": n, "domain": {"lower": [...], "upper": [...]}, "expr": node}
// node := number | "x<i>" | {"op": name, "args": [node, ...]}
// ops: + - * / pow sqrt log exp min max neg (also add sub mul div).
UtilitySpec utility_from_json(const nlohmann::json& doc);

// Compiled expression tree; throws ParseError on malformed input.
std::function<double(const Point&)> compile_expression(const nlohmann::json& node, std::size_t dimension);

nlohmann::json describe(const UtilitySpec& spec);
nlohmann::json describe(const IntensitySpec& spec);

}  // namespace alt
