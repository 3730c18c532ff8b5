#pragma once

// Pointwise exterior algebra of complex (p,q)-forms on C^n.
//
// A form is stored as a sparse list of coefficients of dz_I ^ dzbar_J, where
// I and J are strictly increasing index sets encoded as bitmasks (bit k is
// the coordinate z_{k+1}). The basis element places all holomorphic
// differentials before all antiholomorphic ones.

#include <array>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace malab {

using cplx = std::complex<double>;

inline constexpr int kMaxDim = 4;

/// (i / 2pi): dd^c = (i/2pi) d dbar under d^c = (d - dbar)/(4 pi i).
inline const cplx kDdcFactor{0.0, 0.5 / 3.14159265358979323846};

using CVector = Eigen::Matrix<cplx, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using CMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

/// A point of C^n, 1 <= n <= kMaxDim.
class Point {
 public:
  Point() = default;
  explicit Point(int n);
  Point(std::initializer_list<cplx> coords);
  explicit Point(std::span<const cplx> coords);

  int dim() const noexcept { return n_; }
  cplx& operator[](int k) { return coords_[static_cast<std::size_t>(k)]; }
  const cplx& operator[](int k) const { return coords_[static_cast<std::size_t>(k)]; }
  std::span<const cplx> coords() const { return {coords_.data(), static_cast<std::size_t>(n_)}; }

  bool operator==(const Point& other) const;

 private:
  int n_ = 0;
  std::array<cplx, kMaxDim> coords_{};
};

class BidegreeForm {
 public:
  using Mask = std::uint8_t;

  struct Term {
    Mask hol;
    Mask antihol;
    cplx coeff;
  };

  BidegreeForm() = default;
  /// Zero form of bidegree (p, q) on C^n.
  BidegreeForm(int n, int p, int q);

  static BidegreeForm scalar(int n, cplx value);
  static BidegreeForm dz(int n, int k);
  static BidegreeForm dzbar(int n, int k);

  int dim() const noexcept { return n_; }
  int p() const noexcept { return p_; }
  int q() const noexcept { return q_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  const std::vector<Term>& terms() const noexcept { return terms_; }

  cplx coeff(Mask hol, Mask antihol) const;
  /// Coefficient keyed by 0-based index tuples; unsorted or repeated tuples throw.
  cplx coeff(std::span<const int> hol, std::span<const int> antihol) const;

  /// Adds c * dz_I ^ dzbar_J. Masks must match the form's bidegree.
  void add(Mask hol, Mask antihol, cplx c);

  BidegreeForm& operator+=(const BidegreeForm& other);
  BidegreeForm& operator-=(const BidegreeForm& other);
  BidegreeForm& operator*=(cplx s);

  friend BidegreeForm operator+(BidegreeForm a, const BidegreeForm& b) { return a += b; }
  friend BidegreeForm operator-(BidegreeForm a, const BidegreeForm& b) { return a -= b; }
  friend BidegreeForm operator*(cplx s, BidegreeForm a) { return a *= s; }
  friend BidegreeForm operator*(BidegreeForm a, cplx s) { return a *= s; }

  /// Max |coefficient difference| over the union of supports.
  double max_abs_diff(const BidegreeForm& other) const;
  double max_abs_coeff() const;

  /// Real (p,p)-form: coeff(J,I) = (-1)^p conj(coeff(I,J)) within tol.
  bool is_real(double tol = 1e-12) const;

  static constexpr int kMaskBits = 8;

 private:
  friend BidegreeForm wedge(const BidegreeForm& a, const BidegreeForm& b);

  int n_ = 0;
  int p_ = 0;
  int q_ = 0;
  // Sorted by (hol, antihol); exact zeros are never stored.
  std::vector<Term> terms_;
};

BidegreeForm wedge(const BidegreeForm& a, const BidegreeForm& b);

/// m-fold wedge of a (1,1)-form; m = 0 gives the scalar 1.
BidegreeForm wedge_power(const BidegreeForm& a, int m);

/// Lebesgue density of an (n,n)-form, using dz ^ dzbar = -2i dx ^ dy per coordinate.
double top_density(const BidegreeForm& a, double tol = 1e-10);

/// Complex density (no reality requirement), for residue-type integrands.
cplx top_density_complex(const BidegreeForm& a);

/// (i/2pi) * sum_{p,q} H_pq dz_p ^ dzbar_q.
BidegreeForm hermitian_to_form(const CMatrix& h);

/// Inverse of hermitian_to_form for a (1,1)-form.
CMatrix form_to_hermitian(const BidegreeForm& a);

int popcount(BidegreeForm::Mask m) noexcept;

}  // namespace malab
