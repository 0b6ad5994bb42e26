#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "alt/geometry.hpp"

namespace alt {

// Outcome of comparing the improvement [x,y] against [z,w].
enum class Intensity { Less, Equal, Greater };

Intensity reverse(Intensity r);
std::string_view to_string(Intensity r);
// Greater or Equal.
inline bool at_least(Intensity r) { return r != Intensity::Less; }

// Derived two-place comparison x vs y.
enum class Preference { Disprefer, Indifferent, Prefer };

std::string_view to_string(Preference p);

// Black-box Alt system on a box domain.
//
// Fixtures hand in a signed score s(x,y,z,w) whose sign is the truth of the
// comparison; only the classification against the equality tolerance is ever
// observable through compare(). Copies share the call counter.
class AltOracle {
 public:
  using Score = std::function<double(const Point&, const Point&, const Point&, const Point&)>;

  AltOracle(std::string name, BoxDomain domain, Score score, double equality_tolerance);

  // [x,y] vs [z,w]
  Intensity compare(const Point& x, const Point& y, const Point& z, const Point& w) const;

  const std::string& name() const { return name_; }
  const BoxDomain& domain() const { return domain_; }
  std::size_t dimension() const { return domain_.dimension(); }
  double equality_tolerance() const { return eq_tol_; }

  std::uint64_t calls() const { return calls_->load(std::memory_order_relaxed); }
  void reset_calls() const { calls_->store(0, std::memory_order_relaxed); }

  // Same system, different Equal band; gets its own call counter.
  AltOracle with_equality_tolerance(double eps) const;

 private:
  std::string name_;
  BoxDomain domain_;
  Score score_;
  double eq_tol_;
  std::shared_ptr<std::atomic<std::uint64_t>> calls_;
};

// x vs y read off the quadruple (x, y, y, y).
class PreferenceOrder {
 public:
  explicit PreferenceOrder(const AltOracle& oracle) : oracle_(&oracle) {}

  Preference compare(const Point& x, const Point& y) const;
  bool weakly_prefers(const Point& x, const Point& y) const { return compare(x, y) != Preference::Disprefer; }
  bool strictly_prefers(const Point& x, const Point& y) const { return compare(x, y) == Preference::Prefer; }
  bool indifferent(const Point& x, const Point& y) const { return compare(x, y) == Preference::Indifferent; }

 private:
  const AltOracle* oracle_;
};

PreferenceOrder derive_preference(const AltOracle& oracle);

}  // namespace alt
