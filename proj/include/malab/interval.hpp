#pragma once

// Outward-widened interval arithmetic, used to enclose band functions over
// quadrature cells. Enclosures are conservative up to a few ulps.

#include <span>

namespace malab {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  static Interval point(double x) { return {x, x}; }
  double width() const { return hi - lo; }
  bool intersects(double a, double b) const { return lo <= b && hi >= a; }
};

Interval operator+(Interval a, Interval b);
Interval operator-(Interval a, Interval b);
Interval operator*(Interval a, Interval b);
Interval operator*(double s, Interval a);
Interval hull(Interval a, Interval b);
/// log on [lo, hi] with lo >= 0; log 0 = -inf.
Interval log(Interval a);
Interval exp(Interval a);

struct CInterval {
  Interval re;
  Interval im;

  static CInterval point(double re, double im) { return {Interval::point(re), Interval::point(im)}; }
};

CInterval operator+(CInterval a, CInterval b);
CInterval operator*(CInterval a, CInterval b);
CInterval conj(CInterval a);
/// Range of |w|^2 over the rectangle.
Interval abs_sq(CInterval a);

using CBox = std::span<const CInterval>;

}  // namespace malab
