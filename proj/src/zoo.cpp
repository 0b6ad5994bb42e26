#include "alt/zoo.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "alt/errors.hpp"

namespace alt {
namespace {

constexpr std::uint64_t kRangeSeed = 0xa17a17a1ULL;
constexpr int kRangeSamples = 512;

std::vector<Point> corners(const BoxDomain& d) {
  std::vector<Point> out;
  const std::size_t n = d.dimension();
  const std::size_t count = n > 12 ? 0 : (std::size_t{1} << n);
  for (std::size_t mask = 0; mask < count; ++mask) {
    std::vector<double> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = (mask >> i & 1U) ? d.faces()[i].hi : d.faces()[i].lo;
    Point p(std::move(c));
    if (d.contains(p)) out.push_back(std::move(p));
  }
  return out;
}

double tolerance_from_spread(double lo, double hi) {
  const double spread = hi - lo;
  return 1e-9 * (spread > 0.0 && std::isfinite(spread) ? spread : 1.0);
}

void require_dimension(std::size_t spec_dim, const BoxDomain& domain, const std::string& name) {
  if (spec_dim != domain.dimension()) {
    throw DimensionMismatch("fixture '" + name + "' has dimension " + std::to_string(spec_dim) +
                            " but the domain has dimension " + std::to_string(domain.dimension()));
  }
}

Matrix zeros(std::size_t n) { return Matrix(n, Vector(n, 0.0)); }

UtilitySpec linear_spec() {
  UtilitySpec s;
  s.name = "linear";
  s.description = "u(x) = x1 + x2";
  s.dimension = 2;
  s.value = [](const Point& x) { return x[0] + x[1]; };
  s.gradient = [](const Point&) { return Vector{1.0, 1.0}; };
  s.hessian = [](const Point&) { return zeros(2); };
  s.concavity = Concavity::Concave;
  s.smoothness = {true, true};
  s.domain = BoxDomain::cube(2, 0.1, 10.0);
  return s;
}

UtilitySpec cobb_douglas_spec() {
  UtilitySpec s;
  s.name = "cobb_douglas";
  s.description = "u(x) = sqrt(x1 x2)";
  s.dimension = 2;
  s.value = [](const Point& x) { return std::sqrt(x[0] * x[1]); };
  s.gradient = [](const Point& x) {
    return Vector{0.5 * std::sqrt(x[1] / x[0]), 0.5 * std::sqrt(x[0] / x[1])};
  };
  s.hessian = [](const Point& x) {
    const double r = std::sqrt(x[0] * x[1]);
    Matrix h = zeros(2);
    h[0][0] = -0.25 * std::sqrt(x[1]) * std::pow(x[0], -1.5);
    h[1][1] = -0.25 * std::sqrt(x[0]) * std::pow(x[1], -1.5);
    h[0][1] = h[1][0] = 0.25 / r;
    return h;
  };
  s.concavity = Concavity::Concave;  // linear along rays through the origin, so not strictly
  s.smoothness = {true, true};
  s.domain = BoxDomain::cube(2, 0.1, 10.0);
  return s;
}

UtilitySpec ces_spec() {
  UtilitySpec s;
  s.name = "ces";
  s.description = "u(x) = (x1^0.5 + x2^0.5)^2, CES with rho = 0.5";
  s.dimension = 2;
  s.value = [](const Point& x) {
    const double t = std::sqrt(x[0]) + std::sqrt(x[1]);
    return t * t;
  };
  s.gradient = [](const Point& x) {
    const double t = std::sqrt(x[0]) + std::sqrt(x[1]);
    return Vector{t / std::sqrt(x[0]), t / std::sqrt(x[1])};
  };
  s.hessian = [](const Point& x) {
    const double a = std::sqrt(x[0]);
    const double b = std::sqrt(x[1]);
    const double t = a + b;
    Matrix h = zeros(2);
    h[0][0] = 0.5 / x[0] - 0.5 * t / (x[0] * a);
    h[1][1] = 0.5 / x[1] - 0.5 * t / (x[1] * b);
    h[0][1] = h[1][0] = 0.5 / (a * b);
    return h;
  };
  s.concavity = Concavity::Concave;
  s.smoothness = {true, true};
  s.domain = BoxDomain::cube(2, 0.1, 10.0);
  return s;
}

UtilitySpec exp_spec() {
  UtilitySpec s;
  s.name = "exp1d";
  s.description = "u(t) = exp(t), convex";
  s.dimension = 1;
  s.value = [](const Point& x) { return std::exp(x[0]); };
  s.gradient = [](const Point& x) { return Vector{std::exp(x[0])}; };
  s.hessian = [](const Point& x) { return Matrix{{std::exp(x[0])}}; };
  s.concavity = Concavity::NonConcave;
  s.smoothness = {true, true};
  s.domain = BoxDomain::cube(1, 0.0, 1.0);
  return s;
}

UtilitySpec log_sum_spec() {
  UtilitySpec s;
  s.name = "log_sum";
  s.description = "u(x) = log x1 + log x2";
  s.dimension = 2;
  s.value = [](const Point& x) { return std::log(x[0]) + std::log(x[1]); };
  s.gradient = [](const Point& x) { return Vector{1.0 / x[0], 1.0 / x[1]}; };
  s.hessian = [](const Point& x) {
    Matrix h = zeros(2);
    h[0][0] = -1.0 / (x[0] * x[0]);
    h[1][1] = -1.0 / (x[1] * x[1]);
    return h;
  };
  s.concavity = Concavity::StrictlyConcave;
  s.smoothness = {true, true};
  s.domain = BoxDomain::cube(2, 0.1, 10.0);
  return s;
}

UtilitySpec kinked_composite_spec() {
  UtilitySpec s;
  s.name = "kinked_composite";
  s.description = "u(x) = g(sqrt(x1 x2)), g(c) = c-1 for c <= 1 and (c-1)/2 for c > 1";
  s.dimension = 2;
  s.value = kinked_composite;
  s.concavity = Concavity::Concave;
  s.smoothness = {true, false};
  s.domain = BoxDomain::cube(2, 0.01, 4.0);
  return s;
}

UtilitySpec min_spec() {
  UtilitySpec s;
  s.name = "min";
  s.description = "u(x) = min(x1, x2), homogeneous of degree one with a kinked indifference curve";
  s.dimension = 2;
  s.value = [](const Point& x) { return std::min(x[0], x[1]); };
  s.concavity = Concavity::Concave;
  s.smoothness = {false, true};
  s.domain = BoxDomain::cube(2, 0.1, 10.0);
  return s;
}

UtilitySpec step_spec() {
  UtilitySpec s;
  s.name = "step";
  s.description = "u(t) = floor(t), discontinuous";
  s.dimension = 1;
  s.value = [](const Point& x) { return std::floor(x[0]); };
  s.concavity = Concavity::NonConcave;
  s.smoothness = {false, false};
  s.continuous = false;
  s.monotone = false;
  s.domain = BoxDomain::cube(1, 0.0, 3.0);
  return s;
}

UtilitySpec neg_quadratic_spec() {
  UtilitySpec s;
  s.name = "neg_quadratic";
  s.description = "u(t) = -(t-1)^2, strictly concave and not monotone";
  s.dimension = 1;
  s.value = [](const Point& x) { return -(x[0] - 1.0) * (x[0] - 1.0); };
  s.gradient = [](const Point& x) { return Vector{-2.0 * (x[0] - 1.0)}; };
  s.hessian = [](const Point&) { return Matrix{{-2.0}}; };
  s.concavity = Concavity::StrictlyConcave;
  s.monotone = false;
  s.domain = BoxDomain::cube(1, 0.0, 2.0);
  s.increasing_path = Segment(Point{0.0}, Point{1.0});
  return s;
}

UtilitySpec power_spec(std::string name, std::string description, int power, double lo, double hi,
                       Concavity concavity) {
  UtilitySpec s;
  s.name = std::move(name);
  s.description = std::move(description);
  s.dimension = 1;
  s.value = [power](const Point& x) { return std::pow(x[0], power); };
  s.gradient = [power](const Point& x) { return Vector{power * std::pow(x[0], power - 1)}; };
  s.hessian = [power](const Point& x) {
    return Matrix{{power == 1 ? 0.0 : power * (power - 1) * std::pow(x[0], power - 2)}};
  };
  s.concavity = concavity;
  s.domain = BoxDomain::cube(1, lo, hi);
  return s;
}

double apply_op(const std::string& op, const std::vector<double>& a) {
  if (op == "+" || op == "add") {
    double s = 0.0;
    for (double v : a) s += v;
    return s;
  }
  if (op == "*" || op == "mul") {
    double s = 1.0;
    for (double v : a) s *= v;
    return s;
  }
  if (op == "-" || op == "sub") return a.size() == 1 ? -a[0] : a[0] - a[1];
  if (op == "neg") return -a[0];
  if (op == "/" || op == "div") return a[0] / a[1];
  if (op == "pow") return std::pow(a[0], a[1]);
  if (op == "sqrt") return std::sqrt(a[0]);
  if (op == "log") return std::log(a[0]);
  if (op == "exp") return std::exp(a[0]);
  if (op == "min") return *std::min_element(a.begin(), a.end());
  if (op == "max") return *std::max_element(a.begin(), a.end());
  throw ParseError("unknown operator '" + op + "'");
}

void check_arity(const std::string& op, std::size_t n) {
  auto fail = [&] { throw ParseError("operator '" + op + "' given " + std::to_string(n) + " arguments"); };
  if (op == "+" || op == "add" || op == "*" || op == "mul" || op == "min" || op == "max") {
    if (n < 1) fail();
  } else if (op == "-" || op == "sub") {
    if (n != 1 && n != 2) fail();
  } else if (op == "/" || op == "div" || op == "pow") {
    if (n != 2) fail();
  } else if (op == "sqrt" || op == "log" || op == "exp" || op == "neg") {
    if (n != 1) fail();
  } else {
    throw ParseError("unknown operator '" + op + "'");
  }
}

}  // namespace

std::string_view to_string(Concavity c) {
  switch (c) {
    case Concavity::Concave: return "concave";
    case Concavity::StrictlyConcave: return "strictly-concave";
    case Concavity::NonConcave: return "non-concave";
    case Concavity::Unknown: return "unknown";
  }
  return "unknown";
}

double kinked_composite(const Point& x) {
  const double c = std::sqrt(x[0] * x[1]);
  return c <= 1.0 ? c - 1.0 : 0.5 * (c - 1.0);
}

double default_equality_tolerance(const UtilitySpec& spec, const BoxDomain& domain) {
  double lo = INFINITY, hi = -INFINITY;
  auto take = [&](const Point& p) {
    const double v = spec.value(p);
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  };
  for (const auto& c : corners(domain)) take(c);
  std::mt19937_64 rng(kRangeSeed);
  for (int i = 0; i < kRangeSamples; ++i) take(domain.uniform(rng));
  return tolerance_from_spread(lo, hi);
}

double default_equality_tolerance(const IntensitySpec& spec, const BoxDomain& domain) {
  double lo = INFINITY, hi = -INFINITY;
  std::mt19937_64 rng(kRangeSeed);
  const auto cs = corners(domain);
  auto take = [&](const Point& a, const Point& b) {
    const double v = spec.g(a, b);
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  };
  for (const auto& a : cs) {
    for (const auto& b : cs) take(a, b);
  }
  for (int i = 0; i < kRangeSamples; ++i) take(domain.uniform(rng), domain.uniform(rng));
  return tolerance_from_spread(lo, hi);
}

AltOracle make_difference_oracle(const UtilitySpec& spec, const BoxDomain& domain,
                                 std::optional<double> equality_tolerance) {
  require_dimension(spec.dimension, domain, spec.name);
  const double eps = equality_tolerance.value_or(default_equality_tolerance(spec, domain));
  auto u = spec.value;
  return AltOracle(spec.name, domain,
                   [u](const Point& x, const Point& y, const Point& z, const Point& w) {
                     return (u(x) - u(y)) - (u(z) - u(w));
                   },
                   eps);
}

AltOracle make_difference_oracle(const UtilitySpec& spec) { return make_difference_oracle(spec, spec.domain); }

AltOracle make_intensity_oracle(const IntensitySpec& spec, const BoxDomain& domain,
                                std::optional<double> equality_tolerance) {
  require_dimension(spec.dimension, domain, spec.name);
  const double eps = equality_tolerance.value_or(default_equality_tolerance(spec, domain));
  auto g = spec.g;
  return AltOracle(spec.name, domain,
                   [g](const Point& x, const Point& y, const Point& z, const Point& w) { return g(x, y) - g(z, w); },
                   eps);
}

AltOracle make_intensity_oracle(const IntensitySpec& spec) { return make_intensity_oracle(spec, spec.domain); }

const std::vector<UtilitySpec>& catalog() {
  static const std::vector<UtilitySpec> entries = [] {
    std::vector<UtilitySpec> v;
    v.push_back(linear_spec());
    v.push_back(cobb_douglas_spec());
    v.push_back(ces_spec());
    v.push_back(exp_spec());
    v.push_back(log_sum_spec());
    v.push_back(kinked_composite_spec());
    v.push_back(min_spec());
    v.push_back(step_spec());
    v.push_back(neg_quadratic_spec());
    v.push_back(power_spec("identity1d", "u(t) = t", 1, 0.0, 1.0, Concavity::Concave));
    v.push_back(power_spec("square1d", "u(t) = t^2", 2, 0.0, 3.0, Concavity::NonConcave));
    v.push_back(power_spec("cube1d", "u(t) = t^3", 3, -1.0, 1.0, Concavity::NonConcave));
    return v;
  }();
  return entries;
}

const std::vector<IntensitySpec>& intensity_catalog() {
  static const std::vector<IntensitySpec> entries = [] {
    std::vector<IntensitySpec> v;
    v.push_back({"broken_crossover", "g(x,y) = u(x) - 2u(y), u(t) = t; violates the crossover axiom", 1,
                 [](const Point& x, const Point& y) { return x[0] - 2.0 * y[0]; }, BoxDomain::cube(1, 0.0, 10.0)});
    v.push_back({"baseline_dependent",
                 "g(x,y) = (x-y)(y-5); the sign of an improvement depends on its baseline, violating consistency",
                 1, [](const Point& x, const Point& y) { return (x[0] - y[0]) * (y[0] - 5.0); },
                 BoxDomain::cube(1, 0.0, 10.0)});
    v.push_back({"constant_intensity", "g(x,y) = 0; every comparison is Equal", 1,
                 [](const Point&, const Point&) { return 0.0; }, BoxDomain::cube(1, 0.0, 10.0)});
    return v;
  }();
  return entries;
}

std::optional<UtilitySpec> find_utility(std::string_view name) {
  for (const auto& s : catalog()) {
    if (s.name == name) return s;
  }
  return std::nullopt;
}

std::optional<IntensitySpec> find_intensity(std::string_view name) {
  for (const auto& s : intensity_catalog()) {
    if (s.name == name) return s;
  }
  return std::nullopt;
}

std::function<double(const Point&)> compile_expression(const nlohmann::json& node, std::size_t dimension) {
  if (node.is_number()) {
    const double c = node.get<double>();
    return [c](const Point&) { return c; };
  }
  if (node.is_string()) {
    const std::string s = node.get<std::string>();
    if (s.size() < 2 || s[0] != 'x') throw ParseError("unknown symbol '" + s + "' (variables are x0, x1, ...)");
    std::size_t idx = 0;
    try {
      std::size_t used = 0;
      idx = std::stoul(s.substr(1), &used);
      if (used != s.size() - 1) throw ParseError("bad variable '" + s + "'");
    } catch (const std::logic_error&) {
      throw ParseError("bad variable '" + s + "'");
    }
    if (idx >= dimension) throw ParseError("variable '" + s + "' exceeds dimension " + std::to_string(dimension));
    return [idx](const Point& x) { return x[idx]; };
  }
  if (node.is_object()) {
    if (!node.contains("op") || !node["op"].is_string()) throw ParseError("expression object needs a string 'op'");
    const std::string op = node["op"].get<std::string>();
    if (!node.contains("args") || !node["args"].is_array()) throw ParseError("operator '" + op + "' needs 'args'");
    check_arity(op, node["args"].size());
    std::vector<std::function<double(const Point&)>> args;
    for (const auto& a : node["args"]) args.push_back(compile_expression(a, dimension));
    return [op, args](const Point& x) {
      std::vector<double> v;
      v.reserve(args.size());
      for (const auto& f : args) v.push_back(f(x));
      return apply_op(op, v);
    };
  }
  throw ParseError("expression node must be a number, a variable name, or an {op, args} object");
}

UtilitySpec utility_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ParseError("utility document must be a JSON object");
  if (!doc.contains("expr")) throw ParseError("utility document needs 'expr'");
  UtilitySpec s;
  s.name = doc.value("name", std::string("custom"));
  try {
    if (doc.contains("domain")) {
      const auto lo = doc.at("domain").at("lower").get<std::vector<double>>();
      const auto hi = doc.at("domain").at("upper").get<std::vector<double>>();
      s.domain = BoxDomain(Point(lo), Point(hi));
      s.dimension = doc.value("dimension", s.domain.dimension());
    } else {
      s.dimension = doc.at("dimension").get<std::size_t>();
      s.domain = BoxDomain::cube(s.dimension, 0.1, 10.0);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("utility document: ") + e.what());
  }
  if (s.dimension != s.domain.dimension()) throw ParseError("utility document: dimension disagrees with domain");
  s.value = compile_expression(doc.at("expr"), s.dimension);
  s.description = doc.value("description", std::string("custom expression"));
  const std::string tag = doc.value("concavity", std::string("unknown"));
  if (tag == "concave") s.concavity = Concavity::Concave;
  else if (tag == "strictly-concave") s.concavity = Concavity::StrictlyConcave;
  else if (tag == "non-concave") s.concavity = Concavity::NonConcave;
  else s.concavity = Concavity::Unknown;
  s.monotone = doc.value("monotone", true);
  return s;
}

nlohmann::json describe(const UtilitySpec& s) {
  auto tag = [](const std::optional<bool>& b) -> nlohmann::json {
    if (!b) return nullptr;
    return *b;
  };
  return {{"name", s.name},
          {"kind", "utility"},
          {"description", s.description},
          {"dimension", s.dimension},
          {"domain", {{"lower", s.domain.lower().coords()}, {"upper", s.domain.upper().coords()}}},
          {"concavity", std::string(to_string(s.concavity))},
          {"smoothness", {{"debreu", tag(s.smoothness.debreu)}, {"line", tag(s.smoothness.line)}}},
          {"continuous", s.continuous},
          {"monotone", s.monotone},
          {"analytic_gradient", static_cast<bool>(s.gradient)},
          {"analytic_hessian", static_cast<bool>(s.hessian)}};
}

nlohmann::json describe(const IntensitySpec& s) {
  return {{"name", s.name},
          {"kind", "intensity"},
          {"description", s.description},
          {"dimension", s.dimension},
          {"domain", {{"lower", s.domain.lower().coords()}, {"upper", s.domain.upper().coords()}}}};
}

}  // namespace alt
