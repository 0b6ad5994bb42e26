#include "alt/bisection.hpp"

#include "alt/errors.hpp"

namespace alt {

BandSolution bisect_band(const std::function<Intensity(double)>& side, double lo, double hi, double tol) {
  if (!(tol > 0.0)) throw PreconditionError("bisect_band: tolerance must be > 0");
  if (!(lo <= hi)) throw PreconditionError("bisect_band: require lo <= hi");

  BandSolution out;
  auto eval = [&](double t) {
    ++out.evaluations;
    return side(t);
  };

  const Intensity s_lo = eval(lo);
  const Intensity s_hi = eval(hi);
  if (s_lo == Intensity::Greater || s_hi == Intensity::Less) {
    throw BracketError("bisect_band: endpoints do not bracket the crossing");
  }

  double a = lo;
  double b = hi;
  double eq = 0.0;
  if (s_lo == Intensity::Equal) {
    eq = lo;
    out.hit_equal = true;
  } else if (s_hi == Intensity::Equal) {
    eq = hi;
    out.hit_equal = true;
  } else {
    while (b - a > tol) {
      const double m = 0.5 * (a + b);
      const Intensity s = eval(m);
      if (s == Intensity::Less) {
        a = m;
      } else if (s == Intensity::Greater) {
        b = m;
      } else {
        eq = m;
        out.hit_equal = true;
        break;
      }
    }
  }

  if (!out.hit_equal) {
    out.t = 0.5 * (a + b);
    out.lower_edge = a;
    out.upper_edge = b;
    return out;
  }

  // Lower edge: Less below, not-Less above.
  double la = a;
  double lb = eq;
  if (eval(la) != Intensity::Less) {
    lb = la;
  } else {
    while (lb - la > tol) {
      const double m = 0.5 * (la + lb);
      if (eval(m) == Intensity::Less) la = m; else lb = m;
    }
  }
  // Upper edge: not-Greater below, Greater above.
  double ua = eq;
  double ub = b;
  if (eval(ub) != Intensity::Greater) {
    ua = ub;
  } else {
    while (ub - ua > tol) {
      const double m = 0.5 * (ua + ub);
      if (eval(m) == Intensity::Greater) ub = m; else ua = m;
    }
  }
  out.lower_edge = 0.5 * (la + lb);
  out.upper_edge = 0.5 * (ua + ub);
  out.t = 0.5 * (out.lower_edge + out.upper_edge);
  return out;
}

}  // namespace alt
