#pragma once

#include <span>
#include <vector>

#include "malab/quadrature.hpp"
#include "malab/regularizer.hpp"
#include "malab/residue.hpp"
#include "malab/test_function.hpp"

namespace malab {

/// Throws InputError unless psi vanishes outside the domain.
void check_support(const TestFunction& psi, const Domain& domain);

/// Shell bands of the factors of a product at the given js.
std::vector<Band> product_bands(const ProductSpec& spec, std::span<const double> js);

/// int psi * density(alpha_r ^ ... ^ alpha_1); requires total degree n.
Estimate pair_product(const ProductSpec& spec, std::span<const double> js, const TestFunction& psi,
                      const Domain& domain, const QuadratureSettings& settings);

/// int psi * density(product ^ tau) for a constant (n-p, n-p)-form tau.
Estimate pair_partial(const ProductSpec& spec, std::span<const double> js, const BidegreeForm& tau,
                      const TestFunction& psi, const Domain& domain, const QuadratureSettings& settings);

/// int psi * density(P_r ^ ... ^ P_1 ^ theta); complex-valued.
Estimate pair_residue(std::span<const ResidueFactorSpec> factors, std::span<const double> eps,
                      const BidegreeForm& theta, const TestFunction& psi, const Domain& domain,
                      const QuadratureSettings& settings);

struct StokesResult {
  Estimate lhs;  // int psi dd^c(rho_j o phi) ^ omega0^{n-1}
  Estimate rhs;  // int (rho_j o phi) dd^c psi ^ omega0^{n-1}
  double residual = 0.0;
  double tolerance = 0.0;
};

/// omega0 = (i/2pi) sum dz_k ^ dzbar_k.
BidegreeForm standard_kahler_form(int n);

StokesResult stokes_check(const QpshFunction& phi, const Smoother& rho, double j, const TestFunction& psi,
                          const Domain& domain, const QuadratureSettings& settings);

/// One chart of the two-chart atlas of P^1: phi and theta on the closed unit disk.
struct P1Chart {
  QpshFunction phi;
  ClosedOneOneForm theta;
  bool operator==(const P1Chart&) const = default;
};

/// Chart z and chart w = 1/z.
struct P1Model {
  P1Chart z;
  P1Chart w;
  bool operator==(const P1Model&) const = default;
};

/// Throws InputError if phi or the density of theta disagree on the overlap beyond 1e-8.
void check_p1_overlap(const P1Model& model);

/// int_{P^1} theta + dd^c(rho_j o phi), summed over both closed unit disks.
Estimate p1_mass(const P1Model& model, const Smoother& rho, double j, const QuadratureSettings& settings);

}  // namespace malab
