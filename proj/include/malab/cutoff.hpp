#pragma once

namespace malab {

enum class CutoffProfile {
  quintic,      // C^2 smoothstep in log t
  exponential,  // C^infinity, built from exp(-1/u)
};

/// Value of chi and its logarithmic derivative t * chi'(t).
struct CutoffJet {
  double value = 0.0;
  double log_derivative = 0.0;
};

/// Increasing cut-off chi: chi = 0 on (0, a], chi = 1 on [b, inf), a smoothstep of log t between.
class Cutoff {
 public:
  Cutoff();  // (a, b) = (e^-1, e), quintic
  Cutoff(double a, double b, CutoffProfile profile = CutoffProfile::quintic);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double log_a() const noexcept { return log_a_; }
  double log_b() const noexcept { return log_b_; }
  CutoffProfile profile() const noexcept { return profile_; }

  struct Eval {
    double value;
    double derivative;
  };
  /// (chi(t), chi'(t)); t must be positive.
  Eval eval(double t) const;
  /// chi and t chi'(t) as functions of s = log t; s = -inf is allowed.
  CutoffJet eval_log(double log_t) const;

  /// Normalized step S and S' on u in [0, 1].
  double step(double u) const;
  double step_derivative(double u) const;
  /// int_u^1 S(x) dx.
  double step_tail_integral(double u) const;

  bool operator==(const Cutoff& other) const {
    return a_ == other.a_ && b_ == other.b_ && profile_ == other.profile_;
  }

 private:
  double a_;
  double b_;
  double log_a_;
  double log_b_;
  CutoffProfile profile_;
};

struct SmootherJet {
  double value = 0.0;   // rho_j(t)
  double first = 0.0;   // rho_j'(t) = chi(e^{t+j})
  double second = 0.0;  // rho_j''(t) = chi'(e^{t+j}) e^{t+j}
};

/// Convex increasing rho with rho'(t) = chi(e^t), rho(t) = t for t >= log b; rho_j(t) = rho(t + j) - j.
class Smoother {
 public:
  Smoother() = default;
  explicit Smoother(Cutoff chi) : chi_(chi) {}

  const Cutoff& cutoff() const noexcept { return chi_; }

  /// t = -inf gives the constant value with vanishing derivatives.
  SmootherJet eval(double j, double t) const;
  /// rho(t) for t <= log a.
  double floor_value() const;

  bool operator==(const Smoother& other) const { return chi_ == other.chi_; }

 private:
  Cutoff chi_;
};

}  // namespace malab
