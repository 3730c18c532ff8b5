#pragma once

// Regularized residue factors chi_eps / f and dbar(chi_eps) / f with
// chi_eps = chi(|f|^{2c} e^{v} / eps).

#include <span>
#include <vector>

#include "malab/qpsh.hpp"

namespace malab {

enum class ResidueMode { principal_value, residue };

struct ResidueFactorSpec {
  double c = 1.0;
  HoloPolynomial f;
  SmoothPotential v;
  ResidueMode mode = ResidueMode::residue;
  Cutoff cutoff;

  int dim() const { return f.dim(); }
  void validate() const;
  /// log(|f|^{2c} e^{v}); -inf on {f = 0}.
  double log_level(const Point& z) const;
  bool operator==(const ResidueFactorSpec&) const = default;
};

/// P_r ^ ... ^ P_1 ^ theta at z, with eps[k] belonging to factors[k].
BidegreeForm residue_product_form(std::span<const ResidueFactorSpec> factors, std::span<const double> eps,
                                  const BidegreeForm& theta, const Point& z);

}  // namespace malab
