#include "malab/qpsh.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "malab/errors.hpp"

namespace malab {

QpshFunction::QpshFunction(double c, HoloTuple f, SmoothPotential v) : c_(c), f_(std::move(f)), v_(std::move(v)) {
  if (!(c > 0.0) || !std::isfinite(c)) throw InputError("c must be positive");
  if (f_.size() == 0) throw InputError("qpsh function needs a holomorphic tuple");
  if (v_.dim() != f_.dim()) throw InputError("f and v must share the ambient dimension");
}

QpshFunction QpshFunction::log_abs_sq(HoloTuple f, double c) {
  const int n = f.dim();
  return QpshFunction(c, std::move(f), SmoothPotential::zero(n));
}

double QpshFunction::eval(const Point& z) const {
  const double l = f_.log_norm_sq(z);
  if (l == -std::numeric_limits<double>::infinity()) return l;
  return c_ * l + v_.value(z);
}

RealJet QpshFunction::derivatives(const Point& z) const {
  const int n = dim();
  if (z.dim() != n) throw InputError("point dimension does not match qpsh function");
  const auto& comps = f_.components();
  std::array<cplx, kMaxTupleSize> vals;
  std::array<CVector, kMaxTupleSize> grads;
  double scale = 0.0;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    comps[i].eval_with_gradient(z, vals[i], grads[i]);
    scale = std::max(scale, std::abs(vals[i]));
  }
  if (scale == 0.0) throw SingularityError("phi is singular on {f = 0}");
  // Scale-invariant quotients: divide f and df by max |f_i|.
  CompensatedSum norm;
  CVector g = CVector::Zero(n);
  CMatrix b = CMatrix::Zero(n, n);
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const cplx fi = vals[i] / scale;
    const CVector di = grads[i] / scale;
    norm.add(std::norm(fi));
    g += std::conj(fi) * di;
    b += di * di.adjoint();
  }
  const double l = norm.value();
  RealJet out = v_.jet(z);
  out.value += c_ * (2.0 * std::log(scale) + std::log(l));
  out.grad += (c_ / l) * g;
  // log|f|^2 is pluriharmonic off Z for a single function.
  if (comps.size() > 1) {
    CMatrix h = (c_ / l) * b - (c_ / (l * l)) * (g * g.adjoint());
    out.hess += 0.5 * (h + h.adjoint());
  }
  return out;
}

Interval QpshFunction::enclose(CBox box) const {
  return c_ * log(f_.enclose_norm_sq(box)) + v_.enclose(box);
}

double chi_identity_check(const QpshFunction& phi, const Smoother& rho, double j, const Point& z) {
  const double l = phi.f().norm_sq(z);
  if (!(l > 0.0)) throw SingularityError("chi identity evaluated on {f = 0}");
  const double lhs = rho.eval(j, phi.eval(z)).first;
  const double arg = std::pow(l, phi.c()) * std::exp(phi.v().value(z)) * std::exp(j);
  const double rhs = rho.cutoff().eval(arg).value;
  return std::abs(lhs - rhs);
}

}  // namespace malab
