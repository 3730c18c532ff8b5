#include "malab/interval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace malab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline Interval widen(double lo, double hi) {
  return {std::nextafter(lo, -kInf), std::nextafter(hi, kInf)};
}

}  // namespace

Interval operator+(Interval a, Interval b) { return widen(a.lo + b.lo, a.hi + b.hi); }

Interval operator-(Interval a, Interval b) { return widen(a.lo - b.hi, a.hi - b.lo); }

Interval operator*(Interval a, Interval b) {
  const double p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  double lo = p[0];
  double hi = p[0];
  for (double x : p) {
    // 0 * inf products only arise from degenerate enclosures; treat as 0.
    if (std::isnan(x)) x = 0.0;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  return widen(lo, hi);
}

Interval operator*(double s, Interval a) {
  return s >= 0 ? widen(s * a.lo, s * a.hi) : widen(s * a.hi, s * a.lo);
}

Interval hull(Interval a, Interval b) { return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)}; }

Interval log(Interval a) {
  const double lo = a.lo <= 0.0 ? -kInf : std::log(a.lo);
  const double hi = a.hi <= 0.0 ? -kInf : std::log(a.hi);
  return widen(lo, hi);
}

Interval exp(Interval a) { return widen(std::exp(a.lo), std::exp(a.hi)); }

CInterval operator+(CInterval a, CInterval b) { return {a.re + b.re, a.im + b.im}; }

CInterval operator*(CInterval a, CInterval b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

CInterval conj(CInterval a) { return {a.re, {-a.im.hi, -a.im.lo}}; }

Interval abs_sq(CInterval a) {
  auto axis = [](Interval x) {
    const double m = std::max(x.lo * x.lo, x.hi * x.hi);
    const double l = (x.lo <= 0.0 && x.hi >= 0.0) ? 0.0 : std::min(x.lo * x.lo, x.hi * x.hi);
    return Interval{l, m};
  };
  return axis(a.re) + axis(a.im);
}

}  // namespace malab
