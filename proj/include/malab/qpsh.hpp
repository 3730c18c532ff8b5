#pragma once

#include "malab/cutoff.hpp"
#include "malab/potential.hpp"

namespace malab {

/// phi = c log|f|^2 + v with c > 0, f a holomorphic tuple and v smooth. Unbounded locus Z = {f = 0}.
class QpshFunction {
 public:
  QpshFunction() = default;
  QpshFunction(double c, HoloTuple f, SmoothPotential v);

  /// c log|z_{k+1}|^2-type convenience: c log|f|^2 with v = 0.
  static QpshFunction log_abs_sq(HoloTuple f, double c = 1.0);

  double c() const noexcept { return c_; }
  const HoloTuple& f() const noexcept { return f_; }
  const SmoothPotential& v() const noexcept { return v_; }
  int dim() const noexcept { return f_.dim(); }

  /// -inf exactly on Z.
  double eval(const Point& z) const;
  /// Gradient d phi/dz_k and Hessian d^2 phi/dz_p dzbar_q off Z; throws SingularityError on Z.
  RealJet derivatives(const Point& z) const;
  /// Enclosure of phi over a complex box (lo may be -inf).
  Interval enclose(CBox box) const;

  bool operator==(const QpshFunction& other) const {
    return c_ == other.c_ && f_ == other.f_ && v_ == other.v_;
  }

 private:
  double c_ = 1.0;
  HoloTuple f_;
  SmoothPotential v_;
};

/// Residual |rho_j'(phi(z)) - chi(|f|^{2c} e^{v} e^{j})|.
double chi_identity_check(const QpshFunction& phi, const Smoother& rho, double j, const Point& z);

}  // namespace malab
