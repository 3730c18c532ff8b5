#pragma once

// Adaptive tensor Gauss-Legendre integration over C^n = R^{2n}.
//
// Two chart types are supported. A Box is integrated in Cartesian
// coordinates (Re z_k, Im z_k). A Polydisc is integrated in log-polar
// coordinates z_k = c_k + e^{s_k + i t_k}, for which transition shells around
// coordinate subspaces become slabs of width O(1) in s.

#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "malab/qpsh.hpp"

namespace malab {

struct Box {
  Point center;
  /// 2n half-widths ordered (Re z_1, Im z_1, Re z_2, ...).
  std::vector<double> half_widths;

  int dim() const { return center.dim(); }
  static Box cube(Point center, double half_width);
  bool operator==(const Box&) const = default;
};

struct Polydisc {
  Point center;
  std::vector<double> radii;
  /// Lower cut of log|z_k - c_k|; the excluded polydisc has measure ~ e^{2 log_r_min}.
  double log_r_min = -30.0;

  int dim() const { return center.dim(); }
  static Polydisc round(Point center, double radius);
  bool operator==(const Polydisc&) const = default;
};

using Domain = std::variant<Box, Polydisc>;

int domain_dim(const Domain& d);

/// Refinement band: cells where phi + j meets [log a, log b] are split until resolved.
struct Band {
  QpshFunction phi;
  double j = 0.0;
  double log_a = -1.0;
  double log_b = 1.0;
};

struct QuadratureSettings {
  int order = 8;
  int max_depth = 14;
  double rel_tol = 1e-7;
  double abs_tol = 1e-12;
  bool shell_refine = true;
  long long max_evals = 100'000'000;
  /// 0: MALAB_WORKERS or hardware concurrency.
  int workers = 0;

  void validate() const;
  bool operator==(const QuadratureSettings&) const = default;
};

struct Estimate {
  double value = 0.0;
  double imag = 0.0;
  double error = 0.0;
  long long cells = 0;
  long long evals = 0;
  bool converged = false;
};

using Integrand = std::function<cplx(const Point&)>;

/// Integral of f against Lebesgue measure on the domain.
Estimate integrate(const Integrand& f, const Domain& domain, std::span<const Band> bands,
                   const QuadratureSettings& settings);

int resolve_workers(int requested);

}  // namespace malab
