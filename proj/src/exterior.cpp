#include "malab/exterior.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "malab/errors.hpp"

namespace malab {

namespace {

using Mask = BidegreeForm::Mask;

inline unsigned key_of(Mask hol, Mask antihol) {
  return (static_cast<unsigned>(hol) << BidegreeForm::kMaskBits) | antihol;
}

inline bool key_less(const BidegreeForm::Term& a, const BidegreeForm::Term& b) {
  return key_of(a.hol, a.antihol) < key_of(b.hol, b.antihol);
}

// Parity of the permutation sorting the concatenation (A, B); A and B disjoint.
inline int merge_parity(Mask a, Mask b) {
  int count = 0;
  for (Mask rest = b; rest != 0; rest = static_cast<Mask>(rest & (rest - 1))) {
    const int bit = std::countr_zero(static_cast<unsigned>(rest));
    count += std::popcount(static_cast<unsigned>(a) >> (bit + 1));
  }
  return count & 1;
}

Mask mask_from_indices(std::span<const int> idx, int n) {
  Mask m = 0;
  int prev = -1;
  for (int k : idx) {
    if (k <= prev || k < 0 || k >= n) {
      throw InputError("index tuple must be strictly increasing within [0, n)");
    }
    m = static_cast<Mask>(m | (1u << k));
    prev = k;
  }
  return m;
}

void check_dim(int n) {
  if (n < 1 || n > kMaxDim) {
    throw InputError("dimension must lie in [1, " + std::to_string(kMaxDim) + "]");
  }
}

// Sort by key, merge duplicates and drop exact zeros.
void canonicalize(std::vector<BidegreeForm::Term>& terms) {
  std::sort(terms.begin(), terms.end(), key_less);
  std::size_t out = 0;
  for (std::size_t i = 0; i < terms.size();) {
    auto t = terms[i];
    std::size_t k = i + 1;
    while (k < terms.size() && terms[k].hol == t.hol && terms[k].antihol == t.antihol) {
      t.coeff += terms[k].coeff;
      ++k;
    }
    if (t.coeff != cplx{0.0, 0.0}) terms[out++] = t;
    i = k;
  }
  terms.resize(out);
}

}  // namespace

int popcount(Mask m) noexcept { return std::popcount(static_cast<unsigned>(m)); }

Point::Point(int n) : n_(n) { check_dim(n); }

Point::Point(std::initializer_list<cplx> coords) : Point(std::span<const cplx>(coords.begin(), coords.size())) {}

Point::Point(std::span<const cplx> coords) : n_(static_cast<int>(coords.size())) {
  check_dim(n_);
  for (int k = 0; k < n_; ++k) {
    if (!std::isfinite(coords[k].real()) || !std::isfinite(coords[k].imag())) {
      throw InputError("point coordinates must be finite");
    }
    coords_[static_cast<std::size_t>(k)] = coords[k];
  }
}

bool Point::operator==(const Point& other) const {
  if (n_ != other.n_) return false;
  for (int k = 0; k < n_; ++k) {
    if ((*this)[k] != other[k]) return false;
  }
  return true;
}

BidegreeForm::BidegreeForm(int n, int p, int q) : n_(n), p_(p), q_(q) {
  check_dim(n);
  if (p < 0 || q < 0) throw InputError("form degrees must be nonnegative");
}

BidegreeForm BidegreeForm::scalar(int n, cplx value) {
  BidegreeForm f(n, 0, 0);
  if (value != cplx{0.0, 0.0}) f.terms_.push_back({0, 0, value});
  return f;
}

BidegreeForm BidegreeForm::dz(int n, int k) {
  BidegreeForm f(n, 1, 0);
  if (k < 0 || k >= n) throw InputError("dz index out of range");
  f.terms_.push_back({static_cast<Mask>(1u << k), 0, 1.0});
  return f;
}

BidegreeForm BidegreeForm::dzbar(int n, int k) {
  BidegreeForm f(n, 0, 1);
  if (k < 0 || k >= n) throw InputError("dzbar index out of range");
  f.terms_.push_back({0, static_cast<Mask>(1u << k), 1.0});
  return f;
}

cplx BidegreeForm::coeff(Mask hol, Mask antihol) const {
  const Term probe{hol, antihol, {}};
  auto it = std::lower_bound(terms_.begin(), terms_.end(), probe, key_less);
  if (it != terms_.end() && it->hol == hol && it->antihol == antihol) return it->coeff;
  return {0.0, 0.0};
}

cplx BidegreeForm::coeff(std::span<const int> hol, std::span<const int> antihol) const {
  return coeff(mask_from_indices(hol, n_), mask_from_indices(antihol, n_));
}

void BidegreeForm::add(Mask hol, Mask antihol, cplx c) {
  if (popcount(hol) != p_ || popcount(antihol) != q_) {
    throw InputError("term degree does not match form bidegree");
  }
  if ((hol >> n_) != 0 || (antihol >> n_) != 0) throw InputError("term index exceeds dimension");
  if (c == cplx{0.0, 0.0}) return;
  const Term probe{hol, antihol, c};
  auto it = std::lower_bound(terms_.begin(), terms_.end(), probe, key_less);
  if (it != terms_.end() && it->hol == hol && it->antihol == antihol) {
    it->coeff += c;
    if (it->coeff == cplx{0.0, 0.0}) terms_.erase(it);
  } else {
    terms_.insert(it, probe);
  }
}

BidegreeForm& BidegreeForm::operator+=(const BidegreeForm& other) {
  if (other.n_ != n_ || other.p_ != p_ || other.q_ != q_) {
    throw InputError("sum of forms with different dimension or bidegree");
  }
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  canonicalize(terms_);
  return *this;
}

BidegreeForm& BidegreeForm::operator-=(const BidegreeForm& other) {
  BidegreeForm neg = other;
  neg *= -1.0;
  return *this += neg;
}

BidegreeForm& BidegreeForm::operator*=(cplx s) {
  if (s == cplx{0.0, 0.0}) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coeff *= s;
  std::erase_if(terms_, [](const Term& t) { return t.coeff == cplx{0.0, 0.0}; });
  return *this;
}

double BidegreeForm::max_abs_diff(const BidegreeForm& other) const {
  if (other.n_ != n_ || other.p_ != p_ || other.q_ != q_) {
    throw InputError("comparison of forms with different dimension or bidegree");
  }
  double worst = 0.0;
  for (const auto& t : terms_) worst = std::max(worst, std::abs(t.coeff - other.coeff(t.hol, t.antihol)));
  for (const auto& t : other.terms_) worst = std::max(worst, std::abs(t.coeff - coeff(t.hol, t.antihol)));
  return worst;
}

double BidegreeForm::max_abs_coeff() const {
  double worst = 0.0;
  for (const auto& t : terms_) worst = std::max(worst, std::abs(t.coeff));
  return worst;
}

bool BidegreeForm::is_real(double tol) const {
  if (p_ != q_) return false;
  const double sign = (p_ % 2 == 0) ? 1.0 : -1.0;
  for (const auto& t : terms_) {
    const cplx mirror = coeff(t.antihol, t.hol);
    if (std::abs(mirror - sign * std::conj(t.coeff)) > tol) return false;
  }
  return true;
}

BidegreeForm wedge(const BidegreeForm& a, const BidegreeForm& b) {
  if (a.n_ != b.n_) throw InputError("wedge of forms on different dimensions");
  BidegreeForm out(a.n_, a.p_ + b.p_, a.q_ + b.q_);
  if (out.p_ > out.n_ || out.q_ > out.n_) return out;
  out.terms_.reserve(a.terms_.size() * b.terms_.size());
  // dz_I dzbar_J ^ dz_K dzbar_L = (-1)^{|J||K|} dz_I dz_K dzbar_J dzbar_L
  const int cross = (a.q_ * b.p_) & 1;
  for (const auto& ta : a.terms_) {
    for (const auto& tb : b.terms_) {
      if ((ta.hol & tb.hol) != 0 || (ta.antihol & tb.antihol) != 0) continue;
      const int parity = cross ^ merge_parity(ta.hol, tb.hol) ^ merge_parity(ta.antihol, tb.antihol);
      const cplx c = ta.coeff * tb.coeff;
      out.terms_.push_back({static_cast<Mask>(ta.hol | tb.hol), static_cast<Mask>(ta.antihol | tb.antihol),
                            parity ? -c : c});
    }
  }
  canonicalize(out.terms_);
  return out;
}

BidegreeForm wedge_power(const BidegreeForm& a, int m) {
  if (a.p() != 1 || a.q() != 1) throw InputError("wedge_power requires a (1,1)-form");
  if (m < 0) throw InputError("wedge_power exponent must be nonnegative");
  BidegreeForm acc = BidegreeForm::scalar(a.dim(), 1.0);
  for (int i = 0; i < m; ++i) acc = wedge(a, acc);
  return acc;
}

cplx top_density_complex(const BidegreeForm& a) {
  const int n = a.dim();
  if (a.p() != n || a.q() != n) throw InputError("top_density requires an (n,n)-form");
  const Mask full = static_cast<Mask>((1u << n) - 1);
  // dz_1..dz_n dzbar_1..dzbar_n = (-1)^{n(n-1)/2} prod_k (dz_k dzbar_k), and dz dzbar = -2i dx dy.
  cplx factor = ((n * (n - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
  for (int k = 0; k < n; ++k) factor *= cplx{0.0, -2.0};
  return a.coeff(full, full) * factor;
}

double top_density(const BidegreeForm& a, double tol) {
  const cplx d = top_density_complex(a);
  if (std::abs(d.imag()) > tol * std::max(1.0, std::abs(d.real()))) {
    throw ConjugateSymmetryError("top-degree form has non-negligible imaginary density");
  }
  return d.real();
}

BidegreeForm hermitian_to_form(const CMatrix& h) {
  const int n = static_cast<int>(h.rows());
  if (h.cols() != h.rows()) throw InputError("hermitian_to_form needs a square matrix");
  BidegreeForm out(n, 1, 1);
  std::vector<BidegreeForm::Term> terms;
  terms.reserve(static_cast<std::size_t>(n * n));
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      const cplx c = kDdcFactor * h(p, q);
      if (c != cplx{0.0, 0.0}) {
        out.add(static_cast<Mask>(1u << p), static_cast<Mask>(1u << q), c);
      }
    }
  }
  return out;
}

CMatrix form_to_hermitian(const BidegreeForm& a) {
  if (a.p() != 1 || a.q() != 1) throw InputError("form_to_hermitian requires a (1,1)-form");
  const int n = a.dim();
  CMatrix h = CMatrix::Zero(n, n);
  for (const auto& t : a.terms()) {
    const int p = std::countr_zero(static_cast<unsigned>(t.hol));
    const int q = std::countr_zero(static_cast<unsigned>(t.antihol));
    h(p, q) = t.coeff / kDdcFactor;
  }
  return h;
}

}  // namespace malab
