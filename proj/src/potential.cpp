#include "malab/potential.hpp"

#include <cmath>

#include "malab/errors.hpp"

namespace malab {

struct SmoothPotential::Node {
  Kind kind = Kind::constant;
  int n = 0;
  double constant = 0.0;
  std::vector<WeightedTerm> children;
  std::vector<RealPolyTerm> poly;
  std::vector<HoloPolynomial> logs;
};

namespace {

cplx monomial(const Point& z, const HoloPolynomial::Exponents& a, const HoloPolynomial::Exponents& b,
              int skip_z = -1, int skip_zbar = -1) {
  cplx m = 1.0;
  for (int k = 0; k < z.dim(); ++k) {
    const int ea = a[k] - (k == skip_z ? 1 : 0);
    const int eb = b[k] - (k == skip_zbar ? 1 : 0);
    const cplx w = z[k];
    const cplx wb = std::conj(w);
    for (int i = 0; i < ea; ++i) m *= w;
    for (int i = 0; i < eb; ++i) m *= wb;
  }
  return m;
}

CInterval monomial_enclosure(CBox box, const HoloPolynomial::Exponents& a, const HoloPolynomial::Exponents& b) {
  CInterval m = CInterval::point(1.0, 0.0);
  for (std::size_t k = 0; k < box.size(); ++k) {
    for (int i = 0; i < a[k]; ++i) m = m * box[k];
    for (int i = 0; i < b[k]; ++i) m = m * conj(box[k]);
  }
  return m;
}

void check_point(const Point& z, int n) {
  if (z.dim() != n) throw InputError("point dimension does not match potential");
}

}  // namespace

SmoothPotential SmoothPotential::constant(int n, double c) {
  if (n < 1 || n > kMaxDim) throw InputError("potential dimension out of range");
  if (!std::isfinite(c)) throw InputError("potential constant must be finite");
  auto node = std::make_shared<Node>();
  node->kind = Kind::constant;
  node->n = n;
  node->constant = c;
  return SmoothPotential(std::move(node));
}

SmoothPotential SmoothPotential::combination(int n, std::vector<WeightedTerm> terms) {
  if (n < 1 || n > kMaxDim) throw InputError("potential dimension out of range");
  for (const auto& [w, v] : terms) {
    if (!std::isfinite(w)) throw InputError("combination weight must be finite");
    if (v.dim() != n) throw InputError("combination of potentials with different dimensions");
  }
  auto node = std::make_shared<Node>();
  node->kind = Kind::combination;
  node->n = n;
  node->children = std::move(terms);
  return SmoothPotential(std::move(node));
}

SmoothPotential SmoothPotential::real_poly(int n, std::vector<RealPolyTerm> terms) {
  if (n < 1 || n > kMaxDim) throw InputError("potential dimension out of range");
  for (const auto& t : terms) {
    for (int k = n; k < kMaxDim; ++k) {
      if (t.z[k] != 0 || t.zbar[k] != 0) throw InputError("exponent on a coordinate beyond dimension");
    }
  }
  auto node = std::make_shared<Node>();
  node->kind = Kind::real_poly;
  node->n = n;
  node->poly = std::move(terms);
  return SmoothPotential(std::move(node));
}

SmoothPotential SmoothPotential::log_one_plus(std::vector<HoloPolynomial> polys) {
  if (polys.empty()) throw InputError("log_one_plus needs at least one polynomial");
  const int n = polys.front().dim();
  for (const auto& p : polys) {
    if (p.dim() != n) throw InputError("log_one_plus polynomials must share the dimension");
  }
  auto node = std::make_shared<Node>();
  node->kind = Kind::log_one_plus;
  node->n = n;
  node->logs = std::move(polys);
  return SmoothPotential(std::move(node));
}

SmoothPotential SmoothPotential::real_part(int n, int k) {
  RealPolyTerm t;
  t.z[static_cast<std::size_t>(k)] = 1;
  t.coeff = 1.0;
  return real_poly(n, {t});
}

const SmoothPotential::Node& SmoothPotential::node() const {
  if (!node_) throw InputError("uninitialized smooth potential");
  return *node_;
}

int SmoothPotential::dim() const { return node().n; }
SmoothPotential::Kind SmoothPotential::kind() const { return node().kind; }
double SmoothPotential::constant_value() const { return node().constant; }
const std::vector<SmoothPotential::WeightedTerm>& SmoothPotential::children() const { return node().children; }
const std::vector<SmoothPotential::RealPolyTerm>& SmoothPotential::poly_terms() const { return node().poly; }
const std::vector<HoloPolynomial>& SmoothPotential::log_polys() const { return node().logs; }

bool SmoothPotential::is_zero() const {
  const Node& nd = node();
  switch (nd.kind) {
    case Kind::constant:
      return nd.constant == 0.0;
    case Kind::combination:
      for (const auto& [w, v] : nd.children) {
        if (w != 0.0 && !v.is_zero()) return false;
      }
      return true;
    case Kind::real_poly:
      for (const auto& t : nd.poly) {
        if (t.coeff != cplx{0.0, 0.0}) return false;
      }
      return true;
    case Kind::log_one_plus:
      return false;
  }
  return false;
}

double SmoothPotential::value(const Point& z) const {
  const Node& nd = node();
  check_point(z, nd.n);
  switch (nd.kind) {
    case Kind::constant:
      return nd.constant;
    case Kind::combination: {
      double s = 0.0;
      for (const auto& [w, v] : nd.children) s += w * v.value(z);
      return s;
    }
    case Kind::real_poly: {
      cplx s = 0.0;
      for (const auto& t : nd.poly) s += t.coeff * monomial(z, t.z, t.zbar);
      return s.real();
    }
    case Kind::log_one_plus: {
      CompensatedSum acc;
      acc.add(1.0);
      for (const auto& p : nd.logs) acc.add(std::norm(p.eval(z)));
      return std::log(acc.value());
    }
  }
  return 0.0;
}

RealJet SmoothPotential::jet(const Point& z) const {
  const Node& nd = node();
  check_point(z, nd.n);
  const int n = nd.n;
  RealJet out;
  out.grad = CVector::Zero(n);
  out.hess = CMatrix::Zero(n, n);
  switch (nd.kind) {
    case Kind::constant:
      out.value = nd.constant;
      return out;
    case Kind::combination:
      for (const auto& [w, v] : nd.children) {
        const RealJet c = v.jet(z);
        out.value += w * c.value;
        out.grad += w * c.grad;
        out.hess += w * c.hess;
      }
      return out;
    case Kind::real_poly: {
      // v = Re T with T = sum c z^a zbar^b; dv = (dT + conj(dbar T))/2, ddbar v = (A + A^*)/2.
      cplx value = 0.0;
      CVector dt = CVector::Zero(n);
      CVector dbt = CVector::Zero(n);
      CMatrix a = CMatrix::Zero(n, n);
      for (const auto& t : nd.poly) {
        value += t.coeff * monomial(z, t.z, t.zbar);
        for (int p = 0; p < n; ++p) {
          if (t.z[p] != 0) dt(p) += t.coeff * static_cast<double>(t.z[p]) * monomial(z, t.z, t.zbar, p, -1);
          if (t.zbar[p] != 0) {
            dbt(p) += t.coeff * static_cast<double>(t.zbar[p]) * monomial(z, t.z, t.zbar, -1, p);
          }
        }
        for (int p = 0; p < n; ++p) {
          if (t.z[p] == 0) continue;
          for (int q = 0; q < n; ++q) {
            if (t.zbar[q] == 0) continue;
            a(p, q) += t.coeff * static_cast<double>(t.z[p] * t.zbar[q]) * monomial(z, t.z, t.zbar, p, q);
          }
        }
      }
      out.value = value.real();
      out.grad = 0.5 * (dt + dbt.conjugate());
      out.hess = 0.5 * (a + a.adjoint());
      return out;
    }
    case Kind::log_one_plus: {
      CompensatedSum s;
      s.add(1.0);
      CVector g = CVector::Zero(n);
      CMatrix b = CMatrix::Zero(n, n);
      cplx val;
      CVector dp;
      for (const auto& p : nd.logs) {
        p.eval_with_gradient(z, val, dp);
        s.add(std::norm(val));
        g += std::conj(val) * dp;
        b += dp * dp.adjoint();
      }
      const double sv = s.value();
      out.value = std::log(sv);
      out.grad = g / sv;
      CMatrix h = b / sv - (g * g.adjoint()) / (sv * sv);
      out.hess = 0.5 * (h + h.adjoint());
      return out;
    }
  }
  return out;
}

Interval SmoothPotential::enclose(CBox box) const {
  const Node& nd = node();
  if (static_cast<int>(box.size()) != nd.n) throw InputError("box dimension does not match potential");
  switch (nd.kind) {
    case Kind::constant:
      return Interval::point(nd.constant);
    case Kind::combination: {
      Interval s = Interval::point(0.0);
      for (const auto& [w, v] : nd.children) s = s + w * v.enclose(box);
      return s;
    }
    case Kind::real_poly: {
      CInterval s = CInterval::point(0.0, 0.0);
      for (const auto& t : nd.poly) {
        s = s + CInterval::point(t.coeff.real(), t.coeff.imag()) * monomial_enclosure(box, t.z, t.zbar);
      }
      return s.re;
    }
    case Kind::log_one_plus: {
      Interval s = Interval::point(1.0);
      for (const auto& p : nd.logs) s = s + abs_sq(p.enclose(box));
      return log(s);
    }
  }
  return Interval::point(0.0);
}

bool SmoothPotential::operator==(const SmoothPotential& other) const {
  if (node_ == other.node_) return true;
  if (!node_ || !other.node_) return false;
  const Node& a = *node_;
  const Node& b = *other.node_;
  if (a.kind != b.kind || a.n != b.n) return false;
  switch (a.kind) {
    case Kind::constant:
      return a.constant == b.constant;
    case Kind::combination:
      return a.children == b.children;
    case Kind::real_poly:
      return a.poly == b.poly;
    case Kind::log_one_plus:
      return a.logs == b.logs;
  }
  return false;
}

}  // namespace malab
