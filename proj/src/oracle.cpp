#include "alt/oracle.hpp"

#include <cmath>

#include "alt/errors.hpp"

namespace alt {

Intensity reverse(Intensity r) {
  switch (r) {
    case Intensity::Less: return Intensity::Greater;
    case Intensity::Greater: return Intensity::Less;
    case Intensity::Equal: break;
  }
  return Intensity::Equal;
}

std::string_view to_string(Intensity r) {
  switch (r) {
    case Intensity::Less: return "Less";
    case Intensity::Equal: return "Equal";
    case Intensity::Greater: return "Greater";
  }
  return "?";
}

std::string_view to_string(Preference p) {
  switch (p) {
    case Preference::Disprefer: return "Disprefer";
    case Preference::Indifferent: return "Indifferent";
    case Preference::Prefer: return "Prefer";
  }
  return "?";
}

AltOracle::AltOracle(std::string name, BoxDomain domain, Score score, double equality_tolerance)
    : name_(std::move(name)),
      domain_(std::move(domain)),
      score_(std::move(score)),
      eq_tol_(equality_tolerance),
      calls_(std::make_shared<std::atomic<std::uint64_t>>(0)) {
  if (!score_) throw PreconditionError("AltOracle: empty score function");
  if (!(eq_tol_ > 0.0) || !std::isfinite(eq_tol_)) throw PreconditionError("AltOracle: equality tolerance must be > 0");
}

Intensity AltOracle::compare(const Point& x, const Point& y, const Point& z, const Point& w) const {
  const std::size_t n = dimension();
  if (x.size() != n || y.size() != n || z.size() != n || w.size() != n) {
    throw DimensionMismatch("AltOracle::compare: point dimension does not match oracle '" + name_ + "'");
  }
  calls_->fetch_add(1, std::memory_order_relaxed);
  const double s = score_(x, y, z, w);
  if (std::isnan(s)) throw DomainError("AltOracle::compare: score is NaN (point outside the fixture's domain?)");
  if (s > eq_tol_) return Intensity::Greater;
  if (s < -eq_tol_) return Intensity::Less;
  return Intensity::Equal;
}

AltOracle AltOracle::with_equality_tolerance(double eps) const {
  return AltOracle(name_, domain_, score_, eps);
}

Preference PreferenceOrder::compare(const Point& x, const Point& y) const {
  switch (oracle_->compare(x, y, y, y)) {
    case Intensity::Greater: return Preference::Prefer;
    case Intensity::Equal: return Preference::Indifferent;
    case Intensity::Less: break;
  }
  return Preference::Disprefer;
}

PreferenceOrder derive_preference(const AltOracle& oracle) { return PreferenceOrder(oracle); }

}  // namespace alt
