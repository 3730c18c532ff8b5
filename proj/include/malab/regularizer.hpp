#pragma once

// Smooth regularized factors
//   alpha_j = (eta + rho_j'(phi) (theta - eta) + dd^c(rho_j o phi))^m
// and ordered wedge products of them, evaluated pointwise.

#include <span>
#include <vector>

#include "malab/qpsh.hpp"

namespace malab {

/// A d-closed real (1,1)-form: constant (i/2pi) H, or dd^c of a smooth potential.
class ClosedOneOneForm {
 public:
  enum class Kind { constant, ddc_potential };

  ClosedOneOneForm() = default;

  static ClosedOneOneForm zero(int n);
  /// H must be Hermitian.
  static ClosedOneOneForm constant(const CMatrix& h);
  static ClosedOneOneForm ddc_of(SmoothPotential potential);
  /// dd^c log(1 + |z|^2) on the affine chart C^n.
  static ClosedOneOneForm fubini_study(int n);

  Kind kind() const noexcept { return kind_; }
  int dim() const noexcept { return n_; }
  const CMatrix& matrix() const noexcept { return h_; }
  const SmoothPotential& potential() const noexcept { return potential_; }
  bool is_zero() const;

  /// Coefficient matrix H(z) with form = (i/2pi) sum H_pq dz_p ^ dzbar_q.
  CMatrix hermitian(const Point& z) const;
  BidegreeForm eval(const Point& z) const;

  bool operator==(const ClosedOneOneForm& other) const;

 private:
  Kind kind_ = Kind::constant;
  int n_ = 0;
  CMatrix h_;
  SmoothPotential potential_;
};

struct FactorSpec {
  QpshFunction phi;
  ClosedOneOneForm theta;
  ClosedOneOneForm eta;
  int m = 1;
  Smoother smoother;

  int dim() const { return phi.dim(); }
  void validate() const;
  bool operator==(const FactorSpec&) const = default;
};

/// Ordered product; factors[0] is factor 1, the rightmost (innermost) one.
struct ProductSpec {
  std::vector<FactorSpec> factors;

  int dim() const;
  int rank() const { return static_cast<int>(factors.size()); }
  int total_degree() const;
  void validate() const;
  bool operator==(const ProductSpec&) const = default;
};

/// dd^c(rho_j o phi) via the chain rule; zero wherever |f|^{2c} e^{v} e^{j} <= a (including Z).
BidegreeForm ddc_smoothed(const QpshFunction& phi, const Smoother& rho, double j, const Point& z);
CMatrix ddc_smoothed_hermitian(const QpshFunction& phi, const Smoother& rho, double j, const Point& z);

BidegreeForm alpha_factor(const FactorSpec& spec, double j, const Point& z);

/// alpha^(r)_{j_r} ^ ... ^ alpha^(1)_{j_1}; js[k] belongs to factors[k].
BidegreeForm product_form(const ProductSpec& spec, std::span<const double> js, const Point& z);

/// alpha_j through the decomposition
///   eta^m + sum_l C(m,l) eta^{m-l} ^ (chi^l beta + dbar(chi^l) ^ (c df/f + dv)/(2 pi i)) ^ beta^{l-1},
/// beta = theta - eta + dd^c v. Requires a single polynomial f and z off {f = 0}.
BidegreeForm yamuna_route(const FactorSpec& spec, double j, const Point& z);

/// sum_l C(m,l) theta^{m-l} ^ (dd^c(rho_j o phi))^l, for the case theta = eta.
BidegreeForm binomial_expansion(const FactorSpec& spec, double j, const Point& z);

}  // namespace malab
