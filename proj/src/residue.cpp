#include "malab/residue.hpp"

#include <cmath>
#include <limits>

#include "malab/errors.hpp"

namespace malab {

void ResidueFactorSpec::validate() const {
  if (!(c > 0.0) || !std::isfinite(c)) throw InputError("c must be positive");
  if (v.dim() != f.dim()) throw InputError("f and v must share the ambient dimension");
}

double ResidueFactorSpec::log_level(const Point& z) const {
  const double a = std::norm(f.eval(z));
  if (a == 0.0) return -std::numeric_limits<double>::infinity();
  return c * std::log(a) + v.value(z);
}

namespace {

BidegreeForm factor_form(const ResidueFactorSpec& spec, double eps, const Point& z) {
  const int n = spec.dim();
  cplx fv;
  CVector df;
  spec.f.eval_with_gradient(z, fv, df);
  if (fv == cplx{0.0, 0.0}) return BidegreeForm(n, 0, spec.mode == ResidueMode::residue ? 1 : 0);
  const RealJet vj = spec.v.jet(z);
  const double level = spec.c * std::log(std::norm(fv)) + vj.value - std::log(eps);
  const CutoffJet x = spec.cutoff.eval_log(level);
  if (spec.mode == ResidueMode::principal_value) return BidegreeForm::scalar(n, x.value / fv);
  BidegreeForm out(n, 0, 1);
  if (x.log_derivative == 0.0) return out;
  const CVector w = (spec.c / fv) * df + vj.grad;
  for (int k = 0; k < n; ++k) {
    out.add(0, static_cast<BidegreeForm::Mask>(1u << k), x.log_derivative * std::conj(w(k)) / fv);
  }
  return out;
}

}  // namespace

BidegreeForm residue_product_form(std::span<const ResidueFactorSpec> factors, std::span<const double> eps,
                                  const BidegreeForm& theta, const Point& z) {
  if (factors.size() != eps.size()) throw InputError("eps length must match the number of residue factors");
  BidegreeForm acc = theta;
  for (std::size_t k = 0; k < factors.size(); ++k) {
    if (!(eps[k] > 0.0)) throw InputError("eps must be positive");
    if (factors[k].dim() != theta.dim()) throw InputError("residue factor dimension mismatch");
    acc = wedge(factor_form(factors[k], eps[k], z), acc);
  }
  return acc;
}

}  // namespace malab
