#include "malab/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "malab/errors.hpp"

namespace malab {

namespace {

// powers[k][e] = z_k^e for e <= max_exp.
template <class T, class Mul>
void fill_powers(std::array<std::array<T, 32>, kMaxDim>& powers, int n, int max_exp, const auto& base,
                 const T& one, Mul mul) {
  for (int k = 0; k < n; ++k) {
    powers[k][0] = one;
    for (int e = 1; e <= max_exp; ++e) powers[k][e] = mul(powers[k][e - 1], base[k]);
  }
}

constexpr int kMaxExponent = 31;

}  // namespace

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

HoloPolynomial::HoloPolynomial(int n, std::vector<Term> terms) : n_(n), terms_(std::move(terms)) {
  if (n < 1 || n > kMaxDim) throw InputError("polynomial dimension out of range");
  for (const auto& t : terms_) {
    for (int k = 0; k < kMaxDim; ++k) {
      if (k >= n && t.exponents[k] != 0) throw InputError("exponent on a coordinate beyond dimension");
      if (t.exponents[k] > kMaxExponent) throw InputError("polynomial exponent too large");
      max_exp_ = std::max(max_exp_, static_cast<int>(t.exponents[k]));
    }
    if (!std::isfinite(t.coeff.real()) || !std::isfinite(t.coeff.imag())) {
      throw InputError("polynomial coefficient must be finite");
    }
  }
}

HoloPolynomial HoloPolynomial::constant(int n, cplx c) { return HoloPolynomial(n, {Term{{}, c}}); }

HoloPolynomial HoloPolynomial::coordinate(int n, int k) {
  if (k < 0 || k >= n) throw InputError("coordinate index out of range");
  Exponents e{};
  e[static_cast<std::size_t>(k)] = 1;
  return HoloPolynomial(n, {Term{e, 1.0}});
}

HoloPolynomial HoloPolynomial::monomial(int n, const Exponents& exponents, cplx c) {
  return HoloPolynomial(n, {Term{exponents, c}});
}

cplx HoloPolynomial::eval(const Point& z) const {
  if (z.dim() != n_) throw InputError("point dimension does not match polynomial");
  std::array<std::array<cplx, 32>, kMaxDim> pw;
  fill_powers(pw, n_, max_exp_, z, cplx{1.0}, [](cplx a, cplx b) { return a * b; });
  cplx sum = 0.0;
  for (const auto& t : terms_) {
    cplx m = t.coeff;
    for (int k = 0; k < n_; ++k) m *= pw[k][t.exponents[k]];
    sum += m;
  }
  return sum;
}

void HoloPolynomial::eval_with_gradient(const Point& z, cplx& value, CVector& grad) const {
  if (z.dim() != n_) throw InputError("point dimension does not match polynomial");
  std::array<std::array<cplx, 32>, kMaxDim> pw;
  fill_powers(pw, n_, max_exp_, z, cplx{1.0}, [](cplx a, cplx b) { return a * b; });
  value = 0.0;
  grad = CVector::Zero(n_);
  for (const auto& t : terms_) {
    cplx m = t.coeff;
    for (int k = 0; k < n_; ++k) m *= pw[k][t.exponents[k]];
    value += m;
    for (int k = 0; k < n_; ++k) {
      const int e = t.exponents[k];
      if (e == 0) continue;
      cplx d = t.coeff * static_cast<double>(e);
      for (int i = 0; i < n_; ++i) d *= pw[i][i == k ? e - 1 : t.exponents[i]];
      grad(k) += d;
    }
  }
}

CInterval HoloPolynomial::enclose(CBox box) const {
  if (static_cast<int>(box.size()) != n_) throw InputError("box dimension does not match polynomial");
  std::array<std::array<CInterval, 32>, kMaxDim> pw;
  fill_powers(pw, n_, max_exp_, box, CInterval::point(1.0, 0.0),
              [](CInterval a, CInterval b) { return a * b; });
  CInterval sum = CInterval::point(0.0, 0.0);
  for (const auto& t : terms_) {
    CInterval m = CInterval::point(t.coeff.real(), t.coeff.imag());
    for (int k = 0; k < n_; ++k) {
      if (t.exponents[k] != 0) m = m * pw[k][t.exponents[k]];
    }
    sum = sum + m;
  }
  return sum;
}

HoloTuple::HoloTuple(std::vector<HoloPolynomial> components) : components_(std::move(components)) {
  if (components_.empty()) throw InputError("holomorphic tuple must be nonempty");
  if (components_.size() > kMaxTupleSize) throw InputError("holomorphic tuple too long");
  n_ = components_.front().dim();
  for (const auto& c : components_) {
    if (c.dim() != n_) throw InputError("tuple components must share the ambient dimension");
  }
}

HoloTuple::HoloTuple(HoloPolynomial single) : HoloTuple(std::vector<HoloPolynomial>{std::move(single)}) {}

double HoloTuple::norm_sq(const Point& z) const {
  CompensatedSum acc;
  for (const auto& c : components_) acc.add(std::norm(c.eval(z)));
  return acc.value();
}

double HoloTuple::log_norm_sq(const Point& z) const {
  std::array<double, kMaxTupleSize> mags{};
  double scale = 0.0;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    mags[i] = std::abs(components_[i].eval(z));
    scale = std::max(scale, mags[i]);
  }
  if (scale == 0.0) return -std::numeric_limits<double>::infinity();
  CompensatedSum acc;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    const double r = mags[i] / scale;
    acc.add(r * r);
  }
  return 2.0 * std::log(scale) + std::log(acc.value());
}

Interval HoloTuple::enclose_norm_sq(CBox box) const {
  Interval acc = Interval::point(0.0);
  for (const auto& c : components_) acc = acc + abs_sq(c.enclose(box));
  return {std::max(0.0, acc.lo), acc.hi};
}

}  // namespace malab
