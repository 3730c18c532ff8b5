#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "malab/polynomial.hpp"

namespace malab {

/// Value, d/dz_k and d^2/dz_p dzbar_q of a real function at a point.
struct RealJet {
  double value = 0.0;
  CVector grad;
  CMatrix hess;
};

/// Smooth real potential built from a small expression grammar:
///   constant | sum_i w_i * v_i | Re sum c z^a zbar^b | log(1 + sum |p_i|^2).
/// Every node has exact first and second complex derivatives.
class SmoothPotential {
 public:
  enum class Kind { constant, combination, real_poly, log_one_plus };

  struct RealPolyTerm {
    HoloPolynomial::Exponents z{};
    HoloPolynomial::Exponents zbar{};
    cplx coeff;
    bool operator==(const RealPolyTerm&) const = default;
  };

  using WeightedTerm = std::pair<double, SmoothPotential>;

  SmoothPotential() = default;

  static SmoothPotential zero(int n) { return constant(n, 0.0); }
  static SmoothPotential constant(int n, double c);
  static SmoothPotential combination(int n, std::vector<WeightedTerm> terms);
  static SmoothPotential real_poly(int n, std::vector<RealPolyTerm> terms);
  /// log(1 + sum_i |p_i|^2); the Fubini-Study chart potential is log_one_plus({z_1, ..., z_n}).
  static SmoothPotential log_one_plus(std::vector<HoloPolynomial> polys);
  /// Re(z_{k+1}).
  static SmoothPotential real_part(int n, int k);

  int dim() const;
  Kind kind() const;
  double constant_value() const;
  const std::vector<WeightedTerm>& children() const;
  const std::vector<RealPolyTerm>& poly_terms() const;
  const std::vector<HoloPolynomial>& log_polys() const;

  bool is_zero() const;

  double value(const Point& z) const;
  RealJet jet(const Point& z) const;
  Interval enclose(CBox box) const;

  bool operator==(const SmoothPotential& other) const;

 private:
  struct Node;
  explicit SmoothPotential(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  const Node& node() const;

  std::shared_ptr<const Node> node_;
};

}  // namespace malab
