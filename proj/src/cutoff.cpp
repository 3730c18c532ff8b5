#include "malab/cutoff.hpp"

#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "malab/errors.hpp"

namespace malab {

Cutoff::Cutoff() : Cutoff(std::exp(-1.0), std::exp(1.0)) {}

Cutoff::Cutoff(double a, double b, CutoffProfile profile)
    : a_(a), b_(b), log_a_(std::log(a)), log_b_(std::log(b)), profile_(profile) {
  if (!(a > 0.0) || !(b > a) || !std::isfinite(b)) {
    throw InputError("cut-off thresholds must satisfy 0 < a < b < inf");
  }
  // Keep the closed-form log-derivatives exact for the default thresholds.
  if (a == std::exp(-1.0)) log_a_ = -1.0;
  if (b == std::exp(1.0)) log_b_ = 1.0;
}

double Cutoff::step(double u) const {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  switch (profile_) {
    case CutoffProfile::quintic:
      return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
    case CutoffProfile::exponential: {
      const double e = 1.0 / u - 1.0 / (1.0 - u);
      if (e > 700.0) return 0.0;
      return 1.0 / (1.0 + std::exp(e));
    }
  }
  return 0.0;
}

double Cutoff::step_derivative(double u) const {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  switch (profile_) {
    case CutoffProfile::quintic: {
      const double w = u * (1.0 - u);
      return 30.0 * w * w;
    }
    case CutoffProfile::exponential: {
      const double s = step(u);
      const double v = 1.0 - u;
      return s * (1.0 - s) * (1.0 / (u * u) + 1.0 / (v * v));
    }
  }
  return 0.0;
}

double Cutoff::step_tail_integral(double u) const {
  if (u >= 1.0) return 0.0;
  if (u <= 0.0) return 0.5;  // S(x) + S(1 - x) = 1 for both profiles
  switch (profile_) {
    case CutoffProfile::quintic: {
      // int_0^u S = u^6 - 3u^5 + (5/2) u^4
      const double head = u * u * u * u * (2.5 + u * (-3.0 + u));
      return 0.5 - head;
    }
    case CutoffProfile::exponential: {
      auto f = [this](double x) { return step(x); };
      if (u > 0.5) {
        return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, u, 1.0, 10, 1e-12);
      }
      return 0.5 - boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, u, 10, 1e-12);
    }
  }
  return 0.0;
}

Cutoff::Eval Cutoff::eval(double t) const {
  if (!(t > 0.0)) throw InputError("cut-off argument must be positive");
  const CutoffJet j = eval_log(std::log(t));
  return {j.value, j.log_derivative / t};
}

CutoffJet Cutoff::eval_log(double log_t) const {
  if (log_t <= log_a_) return {0.0, 0.0};
  if (log_t >= log_b_) return {1.0, 0.0};
  const double width = log_b_ - log_a_;
  const double u = (log_t - log_a_) / width;
  return {step(u), step_derivative(u) / width};
}

double Smoother::floor_value() const {
  return chi_.log_b() - (chi_.log_b() - chi_.log_a()) * 0.5;
}

SmootherJet Smoother::eval(double j, double t) const {
  if (std::isnan(t) || std::isnan(j)) throw InputError("smoother argument is NaN");
  if (t == -std::numeric_limits<double>::infinity()) return {floor_value() - j, 0.0, 0.0};
  const double s = t + j;
  if (s >= chi_.log_b()) return {t, 1.0, 0.0};
  if (s <= chi_.log_a()) return {floor_value() - j, 0.0, 0.0};
  const double width = chi_.log_b() - chi_.log_a();
  const double u = (s - chi_.log_a()) / width;
  return {chi_.log_b() - width * chi_.step_tail_integral(u) - j, chi_.step(u), chi_.step_derivative(u) / width};
}

}  // namespace malab
