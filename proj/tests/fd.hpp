#pragma once

#include "malab/exterior.hpp"

namespace malab::testing {

// d^2/dz_p dzbar_q by central differences in real coordinates.
template <class F>
inline CMatrix fd_hessian(const F& f, const Point& z, double h) {
  const int n = z.dim();
  auto shifted = [&](int k, cplx d) {
    Point w = z;
    w[k] += d;
    return w;
  };
  auto second = [&](int a, cplx da, int b, cplx db) {
    Point pp = shifted(a, da);
    pp[b] += db;
    Point pm = shifted(a, da);
    pm[b] -= db;
    Point mp = shifted(a, -da);
    mp[b] += db;
    Point mm = shifted(a, -da);
    mm[b] -= db;
    return (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * h * h);
  };
  const cplx x(h, 0.0);
  const cplx y(0.0, h);
  CMatrix out(n, n);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      const double xx = second(p, x, q, x);
      const double yy = second(p, y, q, y);
      const double xy = second(p, x, q, y);
      const double yx = second(p, y, q, x);
      out(p, q) = 0.25 * cplx(xx + yy, xy - yx);
    }
  }
  return out;
}

}  // namespace malab::testing
