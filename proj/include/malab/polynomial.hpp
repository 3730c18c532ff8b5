#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "malab/exterior.hpp"
#include "malab/interval.hpp"

namespace malab {

/// Holomorphic polynomial in z_1..z_n with complex coefficients.
class HoloPolynomial {
 public:
  using Exponents = std::array<std::uint8_t, kMaxDim>;

  struct Term {
    Exponents exponents{};
    cplx coeff;
    bool operator==(const Term&) const = default;
  };

  HoloPolynomial() = default;
  HoloPolynomial(int n, std::vector<Term> terms);

  static HoloPolynomial constant(int n, cplx c);
  /// z_{k+1} (0-based k).
  static HoloPolynomial coordinate(int n, int k);
  static HoloPolynomial monomial(int n, const Exponents& exponents, cplx c = 1.0);

  int dim() const noexcept { return n_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  int max_exponent() const noexcept { return max_exp_; }

  cplx eval(const Point& z) const;
  /// Value and holomorphic gradient (d/dz_k).
  void eval_with_gradient(const Point& z, cplx& value, CVector& grad) const;
  CInterval enclose(CBox box) const;

  bool operator==(const HoloPolynomial& other) const { return n_ == other.n_ && terms_ == other.terms_; }

 private:
  int n_ = 0;
  int max_exp_ = 0;
  std::vector<Term> terms_;
};

inline constexpr std::size_t kMaxTupleSize = 16;

/// A tuple f = (f_1, ..., f_m) with |f|^2 = sum |f_i|^2.
class HoloTuple {
 public:
  HoloTuple() = default;
  explicit HoloTuple(std::vector<HoloPolynomial> components);
  HoloTuple(HoloPolynomial single);  // NOLINT: a single function is a 1-tuple

  int dim() const noexcept { return n_; }
  std::size_t size() const noexcept { return components_.size(); }
  const std::vector<HoloPolynomial>& components() const noexcept { return components_; }

  /// Compensated sum of |f_i(z)|^2.
  double norm_sq(const Point& z) const;
  /// log |f(z)|^2 evaluated with scaling so tiny |f| does not underflow; -inf on Z.
  double log_norm_sq(const Point& z) const;
  Interval enclose_norm_sq(CBox box) const;

  bool operator==(const HoloTuple& other) const { return components_ == other.components_; }

 private:
  int n_ = 0;
  std::vector<HoloPolynomial> components_;
};

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace malab
