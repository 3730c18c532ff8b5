#include "malab/test_function.hpp"

#include <cmath>

#include "malab/errors.hpp"

namespace malab {

double bump_profile(double s) {
  if (s >= 1.0) return 0.0;
  if (s <= 0.0) return 1.0;
  return 1.0 - s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

double bump_profile_derivative(double s) {
  if (s >= 1.0 || s <= 0.0) return 0.0;
  const double t = s * (1.0 - s);
  return -30.0 * t * t;
}

double bump_profile_second(double s) {
  if (s >= 1.0 || s <= 0.0) return 0.0;
  return -60.0 * s * (1.0 - s) * (1.0 - 2.0 * s);
}

double bump_polynomial_derivative(int k, double s) {
  // 1 - 10 s^3 + 15 s^4 - 6 s^5
  static constexpr double c[6] = {1.0, 0.0, 0.0, -10.0, 15.0, -6.0};
  double total = 0.0;
  for (int e = k; e <= 5; ++e) {
    double f = 1.0;
    for (int i = 0; i < k; ++i) f *= e - i;
    total += c[e] * f * std::pow(s, e - k);
  }
  return total;
}

TestFunction TestFunction::unit(int n) {
  TestFunction t;
  t.center_ = Point(n);
  t.radii_.assign(static_cast<std::size_t>(n), std::nullopt);
  return t;
}

TestFunction TestFunction::bump(Point center, std::vector<std::optional<double>> radii) {
  if (static_cast<int>(radii.size()) != center.dim()) throw InputError("one bump radius per coordinate");
  for (const auto& r : radii) {
    if (r && !(*r > 0.0)) throw InputError("bump radius must be positive");
  }
  TestFunction t;
  t.center_ = center;
  t.radii_ = std::move(radii);
  return t;
}

TestFunction TestFunction::bump(Point center, double radius) {
  std::vector<std::optional<double>> radii(static_cast<std::size_t>(center.dim()), radius);
  return bump(center, std::move(radii));
}

bool TestFunction::is_unit() const {
  for (const auto& r : radii_) {
    if (r) return false;
  }
  return true;
}

double TestFunction::value(const Point& z) const {
  double v = 1.0;
  for (int k = 0; k < dim(); ++k) {
    const auto& r = radii_[static_cast<std::size_t>(k)];
    if (!r) continue;
    v *= bump_profile(std::norm(z[k] - center_[k]) / (*r * *r));
    if (v == 0.0) break;
  }
  return v;
}

RealJet TestFunction::jet(const Point& z) const {
  const int n = dim();
  RealJet out{1.0, CVector::Zero(n), CMatrix::Zero(n, n)};
  // Per-factor value, d/dz and d^2/dz dzbar.
  double b[kMaxDim];
  cplx db[kMaxDim];
  double ddb[kMaxDim];
  for (int k = 0; k < n; ++k) {
    const auto& r = radii_[static_cast<std::size_t>(k)];
    if (!r) {
      b[k] = 1.0;
      db[k] = 0.0;
      ddb[k] = 0.0;
      continue;
    }
    const double r2 = *r * *r;
    const cplx d = z[k] - center_[k];
    const double s = std::norm(d) / r2;
    b[k] = bump_profile(s);
    const double b1 = bump_profile_derivative(s);
    db[k] = b1 * std::conj(d) / r2;
    ddb[k] = bump_profile_second(s) * std::norm(d) / (r2 * r2) + b1 / r2;
  }
  auto others = [&](int p, int q) {
    double v = 1.0;
    for (int k = 0; k < n; ++k) {
      if (k != p && k != q) v *= b[k];
    }
    return v;
  };
  out.value = others(-1, -1);
  for (int p = 0; p < n; ++p) {
    out.grad(p) = db[p] * others(p, -1);
    for (int q = 0; q < n; ++q) {
      out.hess(p, q) = p == q ? cplx(ddb[p] * others(p, -1)) : db[p] * std::conj(db[q]) * others(p, q);
    }
  }
  return out;
}

cplx TestFunction::holomorphic_derivative(int coord, int k, const Point& z) const {
  const auto& r = radii_[static_cast<std::size_t>(coord)];
  double rest = 1.0;
  for (int i = 0; i < dim(); ++i) {
    if (i == coord || !radii_[static_cast<std::size_t>(i)]) continue;
    rest *= bump_profile(std::norm(z[i] - center_[i]) / (*radii_[static_cast<std::size_t>(i)] *
                                                         *radii_[static_cast<std::size_t>(i)]));
  }
  if (!r) return k == 0 ? cplx(rest) : cplx(0.0);
  const double r2 = *r * *r;
  const cplx d = z[coord] - center_[coord];
  const double s = std::norm(d) / r2;
  if (s >= 1.0) return 0.0;
  // s is affine in z_coord with slope conj(d) / R^2.
  return rest * bump_polynomial_derivative(k, s) * std::pow(std::conj(d) / r2, k);
}

}  // namespace malab
