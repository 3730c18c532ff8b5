#include "malab/pairing.hpp"

#include <cmath>
#include <numbers>

#include "malab/errors.hpp"

namespace malab {

void check_support(const TestFunction& psi, const Domain& domain) {
  const int n = domain_dim(domain);
  if (psi.dim() != n) throw InputError("test function dimension does not match the domain");
  constexpr double slack = 1e-12;
  if (const auto* box = std::get_if<Box>(&domain)) {
    for (int k = 0; k < n; ++k) {
      const auto& r = psi.radii()[static_cast<std::size_t>(k)];
      if (!r) continue;
      const cplx d = psi.center()[k] - box->center[k];
      if (std::abs(d.real()) + *r > box->half_widths[static_cast<std::size_t>(2 * k)] + slack ||
          std::abs(d.imag()) + *r > box->half_widths[static_cast<std::size_t>(2 * k + 1)] + slack) {
        throw InputError("test function support leaves the box");
      }
    }
    return;
  }
  const auto& pd = std::get<Polydisc>(domain);
  for (int k = 0; k < n; ++k) {
    const auto& r = psi.radii()[static_cast<std::size_t>(k)];
    if (!r) continue;
    if (std::abs(psi.center()[k] - pd.center[k]) + *r > pd.radii[static_cast<std::size_t>(k)] + slack) {
      throw InputError("test function support leaves the polydisc");
    }
  }
}

std::vector<Band> product_bands(const ProductSpec& spec, std::span<const double> js) {
  std::vector<Band> bands;
  for (std::size_t k = 0; k < spec.factors.size(); ++k) {
    const auto& f = spec.factors[k];
    bands.push_back({f.phi, js[k], f.smoother.cutoff().log_a(), f.smoother.cutoff().log_b()});
  }
  return bands;
}

Estimate pair_product(const ProductSpec& spec, std::span<const double> js, const TestFunction& psi,
                      const Domain& domain, const QuadratureSettings& settings) {
  const int n = spec.dim();
  if (spec.total_degree() != n) throw InputError("pair_product needs a top-degree product");
  return pair_partial(spec, js, BidegreeForm::scalar(n, 1.0), psi, domain, settings);
}

Estimate pair_partial(const ProductSpec& spec, std::span<const double> js, const BidegreeForm& tau,
                      const TestFunction& psi, const Domain& domain, const QuadratureSettings& settings) {
  spec.validate();
  const int n = spec.dim();
  if (js.size() != spec.factors.size()) throw InputError("js length must match the number of factors");
  if (domain_dim(domain) != n || tau.dim() != n) throw InputError("dimension mismatch in pairing");
  const int p = spec.total_degree();
  if (tau.p() != n - p || tau.q() != n - p) throw InputError("tau must have complementary bidegree");
  check_support(psi, domain);
  const std::vector<double> jv(js.begin(), js.end());
  const bool unit_tau = tau.p() == 0;
  Integrand f = [&spec, &jv, &tau, &psi, unit_tau](const Point& z) -> cplx {
    const double w = psi.value(z);
    if (w == 0.0) return 0.0;
    const BidegreeForm prod = product_form(spec, jv, z);
    return w * top_density_complex(unit_tau ? prod : wedge(prod, tau));
  };
  const std::vector<Band> bands = product_bands(spec, jv);
  return integrate(f, domain, bands, settings);
}

Estimate pair_residue(std::span<const ResidueFactorSpec> factors, std::span<const double> eps,
                      const BidegreeForm& theta, const TestFunction& psi, const Domain& domain,
                      const QuadratureSettings& settings) {
  const int n = domain_dim(domain);
  if (factors.size() != eps.size()) throw InputError("eps length must match the number of residue factors");
  int q = theta.q();
  for (const auto& f : factors) {
    f.validate();
    if (f.dim() != n) throw InputError("residue factor dimension mismatch");
    if (f.mode == ResidueMode::residue) ++q;
  }
  if (theta.dim() != n || theta.p() != n || q != n) throw InputError("residue pairing needs a top-degree form");
  check_support(psi, domain);
  std::vector<Band> bands;
  for (std::size_t k = 0; k < factors.size(); ++k) {
    if (!(eps[k] > 0.0)) throw InputError("eps must be positive");
    const auto& f = factors[k];
    bands.push_back({QpshFunction(f.c, HoloTuple(f.f), f.v), -std::log(eps[k]), f.cutoff.log_a(), f.cutoff.log_b()});
  }
  const std::vector<ResidueFactorSpec> fs(factors.begin(), factors.end());
  const std::vector<double> ev(eps.begin(), eps.end());
  Integrand f = [&fs, &ev, &theta, &psi](const Point& z) -> cplx {
    const double w = psi.value(z);
    if (w == 0.0) return 0.0;
    return w * top_density_complex(residue_product_form(fs, ev, theta, z));
  };
  return integrate(f, domain, bands, settings);
}

BidegreeForm standard_kahler_form(int n) {
  BidegreeForm w(n, 1, 1);
  for (int k = 0; k < n; ++k) {
    const auto bit = static_cast<BidegreeForm::Mask>(1u << k);
    w.add(bit, bit, kDdcFactor);
  }
  return w;
}

StokesResult stokes_check(const QpshFunction& phi, const Smoother& rho, double j, const TestFunction& psi,
                          const Domain& domain, const QuadratureSettings& settings) {
  const int n = phi.dim();
  if (domain_dim(domain) != n) throw InputError("dimension mismatch in stokes_check");
  check_support(psi, domain);
  const BidegreeForm rest = wedge_power(standard_kahler_form(n), n - 1);
  Integrand lhs = [&](const Point& z) -> cplx {
    const double w = psi.value(z);
    if (w == 0.0) return 0.0;
    return w * top_density_complex(wedge(ddc_smoothed(phi, rho, j, z), rest));
  };
  Integrand rhs = [&](const Point& z) -> cplx {
    const RealJet pj = psi.jet(z);
    if (pj.hess.cwiseAbs().maxCoeff() == 0.0) return 0.0;
    const double u = rho.eval(j, phi.eval(z)).value;
    return u * top_density_complex(wedge(hermitian_to_form(pj.hess), rest));
  };
  const std::vector<Band> bands{{phi, j, rho.cutoff().log_a(), rho.cutoff().log_b()}};
  StokesResult out;
  out.lhs = integrate(lhs, domain, bands, settings);
  out.rhs = integrate(rhs, domain, bands, settings);
  out.residual = std::abs(cplx(out.lhs.value - out.rhs.value, out.lhs.imag - out.rhs.imag));
  out.tolerance = std::max(1e-6, 1e-5 * std::max(std::abs(out.lhs.value), std::abs(out.rhs.value)));
  return out;
}

namespace {

double chart_density(const P1Chart& c, const Point& z) { return top_density(c.theta.eval(z)); }

}  // namespace

void check_p1_overlap(const P1Model& model) {
  if (model.z.phi.dim() != 1 || model.w.phi.dim() != 1 || model.z.theta.dim() != 1 || model.w.theta.dim() != 1) {
    throw InputError("P^1 charts must be one-dimensional");
  }
  const double radii[] = {0.6, 1.0, 1.7};
  for (double r : radii) {
    for (int a = 0; a < 5; ++a) {
      const double t = 2.0 * std::numbers::pi * (a + 0.3) / 5.0;
      const cplx zv = std::polar(r, t);
      const Point z{zv};
      const Point w{1.0 / zv};
      const double pz = model.z.phi.eval(z);
      const double pw = model.w.phi.eval(w);
      if (!(std::abs(pz - pw) <= 1e-8 * std::max(1.0, std::abs(pz)))) {
        throw InputError("P^1 charts disagree on phi over the overlap");
      }
      const double dz = chart_density(model.z, z);
      const double dw = chart_density(model.w, w) / std::pow(r, 4);
      if (!(std::abs(dz - dw) <= 1e-8 * std::max(1.0, std::abs(dz)))) {
        throw InputError("P^1 charts disagree on theta over the overlap");
      }
    }
  }
}

Estimate p1_mass(const P1Model& model, const Smoother& rho, double j, const QuadratureSettings& settings) {
  check_p1_overlap(model);
  Estimate total;
  total.converged = true;
  for (const P1Chart* c : {&model.z, &model.w}) {
    Integrand f = [c, &rho, j](const Point& z) -> cplx {
      const CMatrix h = c->theta.hermitian(z) + ddc_smoothed_hermitian(c->phi, rho, j, z);
      return top_density_complex(hermitian_to_form(h));
    };
    const std::vector<Band> bands{{c->phi, j, rho.cutoff().log_a(), rho.cutoff().log_b()}};
    const Estimate e = integrate(f, Polydisc::round(Point{0.0}, 1.0), bands, settings);
    total.value += e.value;
    total.imag += e.imag;
    total.error += e.error;
    total.cells += e.cells;
    total.evals += e.evals;
    total.converged = total.converged && e.converged;
  }
  return total;
}

}  // namespace malab
