#include <doctest.h>

#include <cmath>
#include <random>

#include "malab/errors.hpp"
#include "malab/regularizer.hpp"
#include "malab/residue.hpp"
#include "malab/schedule.hpp"
#include "fd.hpp"

using namespace malab;

namespace {

HoloPolynomial coord(int n, int k) { return HoloPolynomial::coordinate(n, k); }

QpshFunction log_abs(int n, std::vector<HoloPolynomial> f, double c = 1.0) {
  return QpshFunction::log_abs_sq(HoloTuple(std::move(f)), c);
}

CMatrix hermitian(std::mt19937_64& rng, int n, double s) {
  std::normal_distribution<double> g(0.0, s);
  CMatrix a(n, n);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) a(p, q) = cplx(g(rng), g(rng));
  }
  return 0.5 * (a + a.adjoint());
}

QpshFunction sample_phi(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  HoloPolynomial::Term a{};
  a.exponents[0] = 1;
  a.coeff = cplx(g(rng), g(rng));
  HoloPolynomial::Term b{};
  b.exponents[static_cast<std::size_t>(n - 1)] = 2;
  b.coeff = cplx(g(rng), g(rng));
  HoloPolynomial::Term c{};
  c.coeff = cplx(0.2 * g(rng), 0.2 * g(rng));
  SmoothPotential::RealPolyTerm r{};
  r.z[0] = 1;
  r.zbar[0] = 1;
  r.coeff = 0.4;
  return QpshFunction(1.0 + 0.5 * std::abs(g(rng)), HoloTuple(HoloPolynomial(n, {a, b, c})),
                      SmoothPotential::real_poly(n, {r}));
}

Point sample_point(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Point z(n);
  for (int k = 0; k < n; ++k) z[k] = cplx(u(rng), u(rng));
  return z;
}

}  // namespace

TEST_CASE("ddc_smoothed vanishes outside the shell for log|z|^2") {
  const Smoother rho;
  const QpshFunction phi = log_abs(1, {coord(1, 0)});
  const double j = 4.0;
  const double big = std::sqrt(rho.cutoff().b() * std::exp(-j)) * 1.5;
  const double small = std::sqrt(rho.cutoff().a() * std::exp(-j)) * 0.5;
  CHECK(ddc_smoothed(phi, rho, j, Point{cplx(0.0, big)}).max_abs_coeff() < 1e-14);
  CHECK(ddc_smoothed(phi, rho, j, Point{small}).is_zero());
  CHECK(ddc_smoothed(phi, rho, j, Point{0.0}).is_zero());
}

TEST_CASE("ddc_smoothed matches finite differences of rho_j o phi") {
  std::mt19937_64 rng(21);
  const Smoother rho;
  std::uniform_real_distribution<double> band(-1.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 3;
    const QpshFunction phi = sample_phi(rng, n);
    const Point z = sample_point(rng, n);
    const double j = -phi.eval(z) + band(rng);
    const CMatrix h = ddc_smoothed_hermitian(phi, rho, j, z);
    const CMatrix fd =
        testing::fd_hessian([&](const Point& w) { return rho.eval(j, phi.eval(w)).value; }, z, 1e-4);
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    CHECK((h - fd).cwiseAbs().maxCoeff() / scale < 1e-5);
    CHECK(ddc_smoothed(phi, rho, j, z).max_abs_diff(hermitian_to_form(h)) == 0.0);
    ++checked;
  }
  CHECK(checked == 60);
}

TEST_CASE("alpha_factor special cases") {
  std::mt19937_64 rng(4);
  const Smoother rho;
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2;
    const QpshFunction phi = sample_phi(rng, n);
    const ClosedOneOneForm theta = ClosedOneOneForm::constant(hermitian(rng, n, 0.5));
    const ClosedOneOneForm eta = ClosedOneOneForm::constant(hermitian(rng, n, 0.5));
    const Point z = sample_point(rng, n);
    const double t = phi.eval(z);

    const FactorSpec same{phi, theta, theta, 2, rho};
    const BidegreeForm direct = wedge_power(theta.eval(z) + ddc_smoothed(phi, rho, -t + 0.3, z), 2);
    CHECK(alpha_factor(same, -t + 0.3, z).max_abs_diff(direct) < 1e-12 * std::max(1.0, direct.max_abs_coeff()));

    const FactorSpec mixed{phi, theta, eta, 2, rho};
    CHECK(alpha_factor(mixed, -t - 5.0, z).max_abs_diff(wedge_power(eta.eval(z), 2)) < 1e-14);
    const RealJet d = phi.derivatives(z);
    const BidegreeForm full = wedge_power(hermitian_to_form(theta.hermitian(z) + d.hess), 2);
    CHECK(alpha_factor(mixed, -t + 5.0, z).max_abs_diff(full) < 1e-12 * std::max(1.0, full.max_abs_coeff()));
  }
}

TEST_CASE("product_form") {
  std::mt19937_64 rng(8);
  const Smoother rho;
  const QpshFunction phi = sample_phi(rng, 2);
  const ClosedOneOneForm theta = ClosedOneOneForm::constant(hermitian(rng, 2, 0.5));
  const FactorSpec f{phi, theta, theta, 1, rho};
  const Point z = sample_point(rng, 2);
  const double j[] = {-phi.eval(z) + 0.2};
  CHECK(product_form(ProductSpec{{f}}, j, z).max_abs_diff(alpha_factor(f, j[0], z)) == 0.0);

  const ClosedOneOneForm e1 = ClosedOneOneForm::constant(hermitian(rng, 2, 0.5));
  const ClosedOneOneForm e2 = ClosedOneOneForm::constant(hermitian(rng, 2, 0.5));
  const FactorSpec g1{phi, theta, e1, 1, rho};
  const FactorSpec g2{phi, theta, e2, 1, rho};
  const double low[] = {-phi.eval(z) - 4.0, -phi.eval(z) - 4.0};
  CHECK(product_form(ProductSpec{{g1, g2}}, low, z).max_abs_diff(wedge(e2.eval(z), e1.eval(z))) < 1e-14);
}

TEST_CASE("product of coordinate shells is supported on the overlap") {
  const Smoother rho;
  const ClosedOneOneForm zero = ClosedOneOneForm::zero(2);
  const FactorSpec f1{log_abs(2, {coord(2, 0)}), zero, zero, 1, rho};
  const FactorSpec f2{log_abs(2, {coord(2, 1)}), zero, zero, 1, rho};
  const ProductSpec spec{{f1, f2}};
  const double js[] = {6.0, 3.0};
  const Cutoff& chi = rho.cutoff();
  auto in_shell = [&](double r2, double j) { return r2 * std::exp(j) >= chi.a() && r2 * std::exp(j) <= chi.b(); };
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  int nonzero = 0;
  for (int i = 0; i < 4000; ++i) {
    const Point z{cplx(0.12 * u(rng), 0.12 * u(rng)), cplx(u(rng), u(rng))};
    const BidegreeForm p = product_form(spec, js, z);
    const bool both = in_shell(std::norm(z[0]), js[0]) && in_shell(std::norm(z[1]), js[1]);
    if (!both) CHECK(p.max_abs_coeff() < 1e-14);
    if (p.max_abs_coeff() > 1e-12) ++nonzero;
  }
  CHECK(nonzero > 0);
}

TEST_CASE("yamuna_route agrees with alpha_factor") {
  std::mt19937_64 rng(13);
  const Smoother rho;
  std::uniform_real_distribution<double> band(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const QpshFunction phi = sample_phi(rng, 2);
    const FactorSpec f{phi, ClosedOneOneForm::constant(hermitian(rng, 2, 0.5)),
                       ClosedOneOneForm::constant(hermitian(rng, 2, 0.5)), 2, rho};
    const Point z = sample_point(rng, 2);
    const double t = phi.eval(z);
    for (double j : {-t + band(rng), -t - 4.0, -t + 4.0}) {
      const BidegreeForm a = alpha_factor(f, j, z);
      CHECK(a.max_abs_diff(yamuna_route(f, j, z)) <= 1e-9 * std::max(1e-300, a.max_abs_coeff()));
    }
  }
  const FactorSpec tuple{log_abs(2, {coord(2, 0), coord(2, 1)}), ClosedOneOneForm::zero(2), ClosedOneOneForm::zero(2),
                         1, rho};
  CHECK_THROWS_AS(yamuna_route(tuple, 0.0, Point{0.5, 0.5}), InputError);
}

TEST_CASE("spec validation") {
  const Smoother rho;
  const FactorSpec bad_m{log_abs(1, {coord(1, 0)}), ClosedOneOneForm::zero(1), ClosedOneOneForm::zero(1), 2, rho};
  CHECK_THROWS_AS(bad_m.validate(), InputError);
  const FactorSpec bad_dim{log_abs(1, {coord(1, 0)}), ClosedOneOneForm::zero(2), ClosedOneOneForm::zero(1), 1, rho};
  CHECK_THROWS_AS(bad_dim.validate(), InputError);
  CMatrix h(1, 1);
  h(0, 0) = cplx(0.0, 1.0);
  CHECK_THROWS_AS(ClosedOneOneForm::constant(h), InputError);
}

TEST_CASE("residue factor support and principal value") {
  ResidueFactorSpec r;
  r.f = coord(1, 0);
  r.v = SmoothPotential::zero(1);
  const BidegreeForm theta = cplx(0.0, -0.5 / 3.14159265358979323846) * BidegreeForm::dz(1, 0);
  const double eps[] = {1e-3};
  const ResidueFactorSpec facs[] = {r};
  const Cutoff& chi = r.cutoff;
  for (double s = 1e-3; s < 1.0; s *= 1.13) {
    const double r2 = s * s;
    const BidegreeForm p = residue_product_form(facs, eps, theta, Point{cplx(s, 0.0)});
    const bool shell = r2 >= chi.a() * eps[0] && r2 <= chi.b() * eps[0];
    if (!shell) CHECK(p.max_abs_coeff() == 0.0);
  }
  ResidueFactorSpec pv = r;
  pv.mode = ResidueMode::principal_value;
  const ResidueFactorSpec pvs[] = {pv};
  const Point z{cplx(0.6, 0.3)};
  const BidegreeForm got = residue_product_form(pvs, eps, theta, z);
  CHECK(got.max_abs_diff((1.0 / z[0]) * theta) < 1e-15);
}

TEST_CASE("check_admissible") {
  CHECK(check_admissible(PathSchedule::polynomial({2, 1})) == Admissibility::admissible);
  CHECK(check_admissible(PathSchedule::polynomial({3, 2, 1})) == Admissibility::admissible);
  CHECK(check_admissible(PathSchedule::polynomial({1, 1})) == Admissibility::inadmissible);
  CHECK(check_admissible(PathSchedule::polynomial({1, 2})) == Admissibility::inadmissible);
  CHECK(check_admissible(PathSchedule::polynomial({1})) == Admissibility::admissible);
  const PathSchedule short_table = PathSchedule::table({1, 2}, {{1, 1}, {4, 2}});
  CHECK(check_admissible(short_table) == Admissibility::undetermined);
  std::vector<double> nus;
  std::vector<std::vector<double>> rows;
  for (int nu = 1; nu <= 12; ++nu) {
    nus.push_back(nu);
    rows.push_back({std::pow(nu, 3.0), double(nu)});
  }
  CHECK(check_admissible(PathSchedule::table(nus, rows)) == Admissibility::admissible);
  for (auto& row : rows) row[0] = row[1];
  CHECK(check_admissible(PathSchedule::table(nus, rows)) == Admissibility::inadmissible);
}

TEST_CASE("schedule evaluation and eps_of_j") {
  const PathSchedule s = PathSchedule::polynomial({2, 1}, {1.0, 0.5});
  const std::vector<double> js = s.js(4.0);
  CHECK(js == std::vector<double>{16.0, 2.0});
  CHECK(eps_of_j({0.0}) == std::vector<double>{1.0});
  for (double e : {1e-1, 1e-4, 1e-9, 3.7e-13}) {
    CHECK(eps_of_j({std::log(1.0 / e)})[0] == doctest::Approx(e).epsilon(1e-15));
  }
  CHECK_THROWS_AS(eps_of_j({-800.0}), RangeError);
  const PathSchedule t = PathSchedule::table({1.0, 2.0}, {{1.0}, {4.0}});
  CHECK(t.js(2.0) == std::vector<double>{4.0});
  CHECK_THROWS_AS(t.js(3.0), LookupError);
  // (2 nu, nu): eps_1 / eps_2^q -> 0 for q < 2
  for (double q : {0.0, 1.0, 1.5}) {
    const auto a = eps_of_j({20.0, 10.0});
    const auto b = eps_of_j({40.0, 20.0});
    CHECK(b[0] / std::pow(b[1], q) < a[0] / std::pow(a[1], q));
  }
}
