#include "malab/regularizer.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "malab/errors.hpp"

namespace malab {

namespace {

double binom(int m, int l) {
  double r = 1.0;
  for (int i = 1; i <= l; ++i) r = r * (m - l + i) / i;
  return r;
}

struct SmoothedData {
  double first = 0.0;
  CMatrix ddc;
};

SmoothedData smoothed_data(const QpshFunction& phi, const Smoother& rho, double j, const Point& z) {
  const int n = phi.dim();
  SmoothedData out{0.0, CMatrix::Zero(n, n)};
  const double t = phi.eval(z);
  if (!(t + j > rho.cutoff().log_a())) return out;
  const SmootherJet s = rho.eval(j, t);
  const RealJet d = phi.derivatives(z);
  out.first = s.first;
  out.ddc = s.second * (d.grad * d.grad.adjoint()) + s.first * d.hess;
  return out;
}

}  // namespace

ClosedOneOneForm ClosedOneOneForm::zero(int n) {
  return constant(CMatrix::Zero(n, n));
}

ClosedOneOneForm ClosedOneOneForm::constant(const CMatrix& h) {
  if (h.rows() != h.cols() || h.rows() < 1 || h.rows() > kMaxDim) throw InputError("theta matrix must be n x n");
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12) throw InputError("theta matrix must be Hermitian");
  ClosedOneOneForm f;
  f.kind_ = Kind::constant;
  f.n_ = static_cast<int>(h.rows());
  f.h_ = h;
  return f;
}

ClosedOneOneForm ClosedOneOneForm::ddc_of(SmoothPotential potential) {
  ClosedOneOneForm f;
  f.kind_ = Kind::ddc_potential;
  f.n_ = potential.dim();
  f.potential_ = std::move(potential);
  return f;
}

ClosedOneOneForm ClosedOneOneForm::fubini_study(int n) {
  std::vector<HoloPolynomial> coords;
  for (int k = 0; k < n; ++k) coords.push_back(HoloPolynomial::coordinate(n, k));
  return ddc_of(SmoothPotential::log_one_plus(std::move(coords)));
}

bool ClosedOneOneForm::is_zero() const {
  if (kind_ == Kind::constant) return h_.size() == 0 || h_.cwiseAbs().maxCoeff() == 0.0;
  return potential_.is_zero() || potential_.kind() == SmoothPotential::Kind::constant;
}

CMatrix ClosedOneOneForm::hermitian(const Point& z) const {
  if (z.dim() != n_) throw InputError("point dimension does not match (1,1)-form");
  if (kind_ == Kind::constant) return h_;
  return potential_.jet(z).hess;
}

BidegreeForm ClosedOneOneForm::eval(const Point& z) const { return hermitian_to_form(hermitian(z)); }

bool ClosedOneOneForm::operator==(const ClosedOneOneForm& other) const {
  if (kind_ != other.kind_ || n_ != other.n_) return false;
  if (kind_ == Kind::constant) return h_ == other.h_;
  return potential_ == other.potential_;
}

void FactorSpec::validate() const {
  const int n = phi.dim();
  if (theta.dim() != n || eta.dim() != n) throw InputError("factor forms must share the ambient dimension");
  if (m < 1) throw InputError("factor exponent m must be positive");
  if (m > n) throw InputError("factor exponent m exceeds the dimension");
}

int ProductSpec::dim() const {
  if (factors.empty()) throw InputError("product has no factors");
  return factors.front().dim();
}

int ProductSpec::total_degree() const {
  int s = 0;
  for (const auto& f : factors) s += f.m;
  return s;
}

void ProductSpec::validate() const {
  const int n = dim();
  for (const auto& f : factors) {
    f.validate();
    if (f.dim() != n) throw InputError("all factors must share the ambient dimension");
  }
  if (total_degree() > n) throw InputError("total degree of the product exceeds the dimension");
}

CMatrix ddc_smoothed_hermitian(const QpshFunction& phi, const Smoother& rho, double j, const Point& z) {
  return smoothed_data(phi, rho, j, z).ddc;
}

BidegreeForm ddc_smoothed(const QpshFunction& phi, const Smoother& rho, double j, const Point& z) {
  return hermitian_to_form(ddc_smoothed_hermitian(phi, rho, j, z));
}

BidegreeForm alpha_factor(const FactorSpec& spec, double j, const Point& z) {
  const SmoothedData d = smoothed_data(spec.phi, spec.smoother, j, z);
  const CMatrix eta = spec.eta.hermitian(z);
  CMatrix h = eta + d.ddc;
  if (d.first != 0.0) h += d.first * (spec.theta.hermitian(z) - eta);
  return wedge_power(hermitian_to_form(h), spec.m);
}

BidegreeForm product_form(const ProductSpec& spec, std::span<const double> js, const Point& z) {
  if (js.size() != spec.factors.size()) throw InputError("js length must match the number of factors");
  const int n = spec.dim();
  BidegreeForm acc = BidegreeForm::scalar(n, 1.0);
  for (std::size_t k = 0; k < js.size(); ++k) {
    acc = wedge(alpha_factor(spec.factors[k], js[k], z), acc);
    if (acc.is_zero()) {
      const int deg = spec.total_degree();
      return BidegreeForm(n, deg, deg);
    }
  }
  return acc;
}

BidegreeForm yamuna_route(const FactorSpec& spec, double j, const Point& z) {
  const QpshFunction& phi = spec.phi;
  if (phi.f().size() != 1) throw InputError("yamuna_route needs a single polynomial f");
  const int n = phi.dim();
  cplx fv;
  CVector df;
  phi.f().components().front().eval_with_gradient(z, fv, df);
  if (fv == cplx{0.0, 0.0}) throw SingularityError("yamuna_route evaluated on {f = 0}");

  const RealJet vj = phi.v().jet(z);
  const CVector w = (phi.c() / fv) * df + vj.grad;
  const double t = phi.c() * std::log(std::norm(fv)) + vj.value;
  double chi = 0.0;
  double chi_log = 0.0;
  if (t + j > spec.smoother.cutoff().log_a()) {
    const SmootherJet s = spec.smoother.eval(j, t);
    chi = s.first;
    chi_log = s.second;
  }

  const CMatrix eta_h = spec.eta.hermitian(z);
  const BidegreeForm eta = hermitian_to_form(eta_h);
  const BidegreeForm beta = hermitian_to_form(spec.theta.hermitian(z) - eta_h + vj.hess);

  BidegreeForm dbar_chi(n, 0, 1);
  BidegreeForm omega(n, 1, 0);
  const cplx inv_2pii = 1.0 / cplx{0.0, 2.0 * std::numbers::pi};
  for (int k = 0; k < n; ++k) {
    const auto bit = static_cast<BidegreeForm::Mask>(1u << k);
    if (chi_log != 0.0) dbar_chi.add(0, bit, chi_log * std::conj(w(k)));
    omega.add(bit, 0, inv_2pii * w(k));
  }
  const BidegreeForm dchi_omega = wedge(dbar_chi, omega);

  const int m = spec.m;
  BidegreeForm total = wedge_power(eta, m);
  for (int l = 1; l <= m; ++l) {
    const double chi_l = std::pow(chi, l);
    const double l_chi_lm1 = l * std::pow(chi, l - 1);
    BidegreeForm inner = chi_l * beta + l_chi_lm1 * dchi_omega;
    BidegreeForm term = wedge(wedge_power(eta, m - l), wedge(inner, wedge_power(beta, l - 1)));
    total += binom(m, l) * term;
  }
  return total;
}

BidegreeForm binomial_expansion(const FactorSpec& spec, double j, const Point& z) {
  const BidegreeForm theta = spec.theta.eval(z);
  const BidegreeForm d = ddc_smoothed(spec.phi, spec.smoother, j, z);
  BidegreeForm total(spec.dim(), spec.m, spec.m);
  for (int l = 0; l <= spec.m; ++l) {
    total += binom(spec.m, l) * wedge(wedge_power(theta, spec.m - l), wedge_power(d, l));
  }
  return total;
}

}  // namespace malab
