#include "malab/scenarios.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "malab/errors.hpp"

namespace malab {

namespace {

constexpr double kPi = std::numbers::pi;

HoloTuple coord(int n, int k) { return HoloTuple(HoloPolynomial::coordinate(n, k)); }

FactorSpec plain_factor(QpshFunction phi, int m = 1) {
  const int n = phi.dim();
  return FactorSpec{std::move(phi), ClosedOneOneForm::zero(n), ClosedOneOneForm::zero(n), m, Smoother()};
}

CMatrix theta_mixed_matrix() {
  CMatrix h(2, 2);
  h << cplx(1.0, 0.0), cplx(0.3, 0.2), cplx(0.3, -0.2), cplx(0.8, 0.0);
  return h;
}

Scenario base(const std::string& name, ScenarioKind kind) {
  Scenario s;
  s.name = name;
  s.kind = kind;
  return s;
}

Scenario lelong_mass_c1() {
  Scenario s = base("lelong_mass_c1", ScenarioKind::product);
  s.product.factors = {plain_factor(QpshFunction::log_abs_sq(coord(1, 0)))};
  s.psi = TestFunction::unit(1);
  s.domain = Polydisc::round(Point{0.0}, 2.0);
  s.schedule = PathSchedule::polynomial({1});
  s.nus = {2, 6, 10};
  // Stokes: rho_j'(phi) = 1 on |z| = 2 once the shell is inside the disk.
  s.oracle = {1.0, 0.0, "Lelong-Poincare (Stokes on the shell)"};
  return s;
}

Scenario dirac_c1() {
  Scenario s = base("dirac_c1", ScenarioKind::product);
  s.product.factors = {plain_factor(QpshFunction::log_abs_sq(coord(1, 0)))};
  s.psi = TestFunction::bump(Point{0.0}, 0.5);
  s.domain = Polydisc::round(Point{0.0}, 2.0);
  s.schedule = PathSchedule::polynomial({1});
  s.nus = {4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14};
  s.oracle = {s.psi.value(Point{0.0}), 0.0, "Lelong-Poincare"};
  return s;
}

Scenario coord_planes_c2() {
  Scenario s = base("coord_planes_c2", ScenarioKind::product);
  s.product.factors = {plain_factor(QpshFunction::log_abs_sq(coord(2, 0))),
                       plain_factor(QpshFunction::log_abs_sq(coord(2, 1)))};
  s.psi = TestFunction::bump(Point{0.0, 0.0}, 1.0);
  s.domain = Polydisc::round(Point{0.0, 0.0}, 1.0);
  s.schedule = PathSchedule::polynomial({2, 1});
  s.nus = {2, 3, 4};
  s.oracle = {s.psi.value(Point{0.0, 0.0}), 0.0, "Lelong-Poincare (transversal coordinate hyperplanes)"};
  return s;
}

Scenario king_c2() {
  Scenario s = base("king_c2", ScenarioKind::product);
  HoloTuple f(std::vector<HoloPolynomial>{HoloPolynomial::coordinate(2, 0), HoloPolynomial::coordinate(2, 1)});
  s.product.factors = {plain_factor(QpshFunction::log_abs_sq(f), 2)};
  s.psi = TestFunction::bump(Point{0.0, 0.0}, 1.0);
  s.domain = Polydisc::round(Point{0.0, 0.0}, 1.0);
  s.schedule = PathSchedule::polynomial({1});
  s.nus = {6, 8, 10};
  s.oracle = {s.psi.value(Point{0.0, 0.0}), 0.0, "King"};
  return s;
}

// With phi_1 = log|z1 z2|^2 innermost, the outer factor restricted to the divisor of z1 z2
// leaves dd^c log|z1|^2 on {z2 = 0}, i.e. the point mass at the origin. Reversed, the
// factor log|z1 z2|^2 acts on [z1 = 0] outside its own unbounded locus, which gives zero.
Scenario noncomm(bool reversed) {
  Scenario s = base(reversed ? "noncomm_B" : "noncomm_A", ScenarioKind::product);
  const HoloTuple z1z2(HoloPolynomial::monomial(2, {1, 1, 0, 0}));
  FactorSpec both = plain_factor(QpshFunction::log_abs_sq(z1z2));
  FactorSpec first = plain_factor(QpshFunction::log_abs_sq(coord(2, 0)));
  s.product.factors = reversed ? std::vector<FactorSpec>{first, both} : std::vector<FactorSpec>{both, first};
  s.psi = TestFunction::bump(Point{0.0, 0.0}, 1.0);
  s.domain = Polydisc::round(Point{0.0, 0.0}, 1.0);
  s.schedule = PathSchedule::polynomial({2, 1});
  s.nus = {2, 3, 4};
  s.oracle = {reversed ? 0.0 : s.psi.value(Point{0.0, 0.0}), 0.0, "current-calculus order computation"};
  return s;
}

Scenario cauchy_a(int a) {
  if (a < 1 || a > 8) throw InputError("cauchy_a needs 1 <= a <= 8");
  Scenario s = base("cauchy_a", ScenarioKind::residue);
  HoloPolynomial::Exponents e{};
  e[0] = static_cast<std::uint8_t>(a);
  ResidueFactorSpec r;
  r.c = 1.0;
  r.f = HoloPolynomial::monomial(1, e);
  r.v = SmoothPotential::zero(1);
  r.mode = ResidueMode::residue;
  s.residue = {r};
  s.residue_theta = (1.0 / cplx(0.0, 2.0 * kPi)) * BidegreeForm::dz(1, 0);
  // u0 = |c|^2 / R^2 is a root of u P'''(u) + 2 P''(u), P the bump polynomial, so that
  // d_z^2 d_zbar psi(0) = 0 and the O(eps^{1/2}) bias of the a = 2 pairing cancels.
  const double u0 = (6.0 - std::sqrt(6.0)) / 10.0;
  s.psi = TestFunction::bump(Point{2.0 * std::sqrt(u0)}, 2.0);
  s.domain = Polydisc::round(Point{0.0}, 3.5);
  // eps = 10^{-nu}.
  s.schedule = PathSchedule::polynomial({1}, {std::log(10.0)});
  s.nus = {2, 3, 4};
  double fact = 1.0;
  for (int i = 2; i < a; ++i) fact *= i;
  const cplx d = s.psi.holomorphic_derivative(0, a - 1, Point{0.0}) / fact;
  s.oracle = {d.real(), d.imag(), "Cauchy-Pompeiu"};
  return s;
}

Scenario p1_mass_scenario() {
  Scenario s = base("p1_mass", ScenarioKind::p1);
  const std::vector<HoloPolynomial> z{HoloPolynomial::coordinate(1, 0)};
  const SmoothPotential fs_pot = SmoothPotential::log_one_plus(z);
  const SmoothPotential minus_fs = SmoothPotential::combination(1, {{-1.0, fs_pot}});
  // phi = log(|z|^2 / (1 + |z|^2)) in the z chart, -log(1 + |w|^2) in the w = 1/z chart.
  s.p1.z = {QpshFunction(1.0, coord(1, 0), minus_fs), ClosedOneOneForm::fubini_study(1)};
  s.p1.w = {QpshFunction(1.0, HoloTuple(HoloPolynomial::constant(1, 1.0)), minus_fs),
            ClosedOneOneForm::fubini_study(1)};
  s.psi = TestFunction::unit(1);
  s.domain = Polydisc::round(Point{0.0}, 1.0);
  s.schedule = PathSchedule::polynomial({1});
  s.nus = {0, 4, 8, 12};
  s.oracle = {1.0, 0.0, "direct integral (Fubini-Study volume of P^1)"};
  return s;
}

Scenario theta_mixed_c2() {
  Scenario s = base("theta_mixed_c2", ScenarioKind::product);
  const ClosedOneOneForm theta = ClosedOneOneForm::constant(theta_mixed_matrix());
  s.product.factors = {FactorSpec{QpshFunction::log_abs_sq(coord(2, 0)), theta, theta, 2, Smoother()}};
  s.psi = TestFunction::bump(Point{0.0, 0.0}, 1.0);
  s.domain = Polydisc::round(Point{0.0, 0.0}, 1.0);
  s.schedule = PathSchedule::polynomial({1});
  s.nus = {4, 6, 8, 10};
  // <theta^2, psi> + 2 <theta ^ [z1 = 0], psi>, with theta = (i/2pi) H constant:
  // density(theta^2) = 2 det H / pi^2 and theta restricted to {z1 = 0} has density H_22 / pi.
  const CMatrix h = theta_mixed_matrix();
  const double det = (h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0)).real();
  const double area = reference_bump_area();
  const double value = 2.0 * det / (kPi * kPi) * area * area + 2.0 * h(1, 1).real() / kPi * area;
  s.oracle = {value, 0.0, "direct integral (reference quadrature of the slice)"};
  return s;
}

}  // namespace

double reference_bump_area() {
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [](double t) { return bump_profile(t); }, 0.0, 1.0, 15, 1e-12, &err);
  return kPi * v;
}

int Scenario::dim() const { return domain_dim(domain); }

int Scenario::arity() const {
  switch (kind) {
    case ScenarioKind::product:
      return product.rank();
    case ScenarioKind::residue:
      return static_cast<int>(residue.size());
    case ScenarioKind::p1:
      return 1;
  }
  return 0;
}

std::vector<std::string> scenario_names() {
  return {"lelong_mass_c1", "dirac_c1", "coord_planes_c2", "king_c2", "noncomm_A",
          "noncomm_B",      "cauchy_a", "p1_mass",         "theta_mixed_c2"};
}

Scenario make_scenario(const std::string& name, const ScenarioOptions& options) {
  if (name == "lelong_mass_c1") return lelong_mass_c1();
  if (name == "dirac_c1") return dirac_c1();
  if (name == "coord_planes_c2") return coord_planes_c2();
  if (name == "king_c2") return king_c2();
  if (name == "noncomm_A") return noncomm(false);
  if (name == "noncomm_B") return noncomm(true);
  if (name == "cauchy_a") return cauchy_a(options.a);
  if (name == "p1_mass") return p1_mass_scenario();
  if (name == "theta_mixed_c2") return theta_mixed_c2();
  throw LookupError("unknown scenario: " + name);
}

OracleValue oracle_value(const std::string& name, const ScenarioOptions& options) {
  return make_scenario(name, options).oracle;
}

Estimate evaluate_scenario(const Scenario& s, const std::vector<double>& js, const QuadratureSettings& settings) {
  if (static_cast<int>(js.size()) != s.arity()) throw InputError("schedule arity does not match the scenario");
  switch (s.kind) {
    case ScenarioKind::product:
      return pair_product(s.product, js, s.psi, s.domain, settings);
    case ScenarioKind::residue:
      return pair_residue(s.residue, eps_of_j(js), s.residue_theta, s.psi, s.domain, settings);
    case ScenarioKind::p1:
      return p1_mass(s.p1, s.p1_smoother, js.front(), settings);
  }
  throw InputError("unknown scenario kind");
}

ConvergenceTable run_scenario(const Scenario& s, const PathSchedule& schedule, const std::vector<double>& nus,
                              const QuadratureSettings& settings) {
  if (schedule.rank() != s.arity()) throw InputError("schedule arity does not match the scenario");
  ConvergenceTable t;
  t.scenario = s.name;
  t.verdict = check_admissible(schedule);
  t.oracle = s.oracle;
  for (double nu : nus) {
    ConvergenceRow row;
    row.nu = nu;
    row.js = schedule.js(nu);
    row.estimate = evaluate_scenario(s, row.js, settings);
    row.abs_dev = std::abs(cplx(row.estimate.value - s.oracle.value, row.estimate.imag - s.oracle.imag));
    t.all_converged = t.all_converged && row.estimate.converged;
    t.rows.push_back(std::move(row));
  }
  if (!t.rows.empty()) t.final_deviation = t.rows.back().abs_dev;
  return t;
}

ConvergenceTable run_scenario(const std::string& name, const PathSchedule& schedule, const std::vector<double>& nus,
                              const QuadratureSettings& settings) {
  return run_scenario(make_scenario(name), schedule, nus, settings);
}

}  // namespace malab
