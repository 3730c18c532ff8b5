#pragma once

#include <optional>
#include <vector>

#include "malab/potential.hpp"

namespace malab {

/// Radial C^2 bump profile B(s) = 1 - (10 s^3 - 15 s^4 + 6 s^5) on [0, 1], zero for s >= 1.
double bump_profile(double s);
double bump_profile_derivative(double s);
double bump_profile_second(double s);
/// k-th derivative of the polynomial 1 - 10 s^3 + 15 s^4 - 6 s^5 (no truncation).
double bump_polynomial_derivative(int k, double s);

/// psi(z) = prod_k B(|z_k - c_k|^2 / R_k^2); a missing radius makes that factor 1.
class TestFunction {
 public:
  TestFunction() = default;
  static TestFunction unit(int n);
  static TestFunction bump(Point center, std::vector<std::optional<double>> radii);
  /// Same radius in every coordinate.
  static TestFunction bump(Point center, double radius);

  int dim() const noexcept { return center_.dim(); }
  const Point& center() const noexcept { return center_; }
  const std::vector<std::optional<double>>& radii() const noexcept { return radii_; }
  bool is_unit() const;

  double value(const Point& z) const;
  /// value, d psi/dz_k, d^2 psi/dz_p dzbar_q.
  RealJet jet(const Point& z) const;

  /// d^k psi / dz_{coord}^k at z, treating zbar as independent (valid inside the support).
  cplx holomorphic_derivative(int coord, int k, const Point& z) const;

  bool operator==(const TestFunction&) const = default;

 private:
  Point center_;
  std::vector<std::optional<double>> radii_;
};

}  // namespace malab
