#include <doctest.h>

#include <cmath>
#include <numbers>

#include "malab/errors.hpp"
#include "malab/scenarios.hpp"
#include "malab/test_function.hpp"

using namespace malab;

namespace {

QuadratureSettings one_worker() {
  QuadratureSettings s;
  s.workers = 1;
  return s;
}

// Composite Simpson on [0, 1], independent of the library quadrature.
double simpson_bump_area() {
  const int n = 20000;
  double acc = bump_profile(0.0) + bump_profile(1.0);
  for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * bump_profile(double(i) / n);
  return std::numbers::pi * acc / (3.0 * n);
}

}  // namespace

TEST_CASE("registry") {
  const auto names = scenario_names();
  CHECK(names.size() == 9);
  for (const auto& n : names) {
    const Scenario s = make_scenario(n);
    CHECK(s.name == n);
    CHECK(s.dim() >= 1);
    CHECK(check_admissible(s.schedule) != Admissibility::inadmissible);
  }
  CHECK_THROWS_AS(make_scenario("no_such"), LookupError);
  ScenarioOptions bad;
  bad.a = 0;
  CHECK_THROWS_AS(make_scenario("cauchy_a", bad), InputError);
}

TEST_CASE("oracle values") {
  CHECK(oracle_value("dirac_c1").value == 1.0);
  CHECK(oracle_value("lelong_mass_c1").value == 1.0);
  CHECK(oracle_value("noncomm_B").value == 0.0);
  CHECK(oracle_value("noncomm_A").value == 1.0);
  CHECK(oracle_value("p1_mass").value == 1.0);
  const Scenario c1 = make_scenario("cauchy_a");
  CHECK(oracle_value("cauchy_a").value == doctest::Approx(c1.psi.value(Point{0.0})).epsilon(1e-14));
  ScenarioOptions two;
  two.a = 2;
  const Scenario c2 = make_scenario("cauchy_a", two);
  // d_z psi(0) by central differences: (f_x - i f_y) / 2
  const double h = 1e-5;
  const double fx = (c2.psi.value(Point{cplx(h, 0)}) - c2.psi.value(Point{cplx(-h, 0)})) / (2 * h);
  const double fy = (c2.psi.value(Point{cplx(0, h)}) - c2.psi.value(Point{cplx(0, -h)})) / (2 * h);
  CHECK(std::abs(cplx(c2.oracle.value, c2.oracle.imag) - 0.5 * cplx(fx, -fy)) < 1e-8);
  const double area = simpson_bump_area();
  CHECK(reference_bump_area() == doctest::Approx(area).epsilon(1e-10));
  // theta = (i/2pi) H, H = [[1, .3+.2i], [.3-.2i, .8]]
  const double det = 0.8 - (0.09 + 0.04);
  const double pi = std::numbers::pi;
  const double expect = 2.0 * det / (pi * pi) * area * area + 2.0 * 0.8 / pi * area;
  CHECK(oracle_value("theta_mixed_c2").value == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("dirac_c1 convergence table") {
  const Scenario s = make_scenario("dirac_c1");
  std::vector<double> nus;
  for (int nu = 4; nu <= 14; ++nu) nus.push_back(nu);
  const ConvergenceTable t = run_scenario(s, s.schedule, nus, one_worker());
  CHECK(t.rows.size() == 11);
  CHECK(t.verdict == Admissibility::admissible);
  CHECK(t.final_deviation <= 1e-3);
  CHECK(t.rows.back().abs_dev == t.final_deviation);
}

TEST_CASE("lelong mass is independent of j") {
  const ConvergenceTable t = run_scenario("lelong_mass_c1", PathSchedule::polynomial({1}), {2, 6, 10}, one_worker());
  for (const auto& r : t.rows) CHECK(std::abs(r.estimate.value - 1.0) <= 1e-6);
}

TEST_CASE("cauchy_a and p1_mass") {
  ScenarioOptions one;
  const Scenario c = make_scenario("cauchy_a", one);
  const Estimate e = evaluate_scenario(c, {std::log(1e4)}, one_worker());
  CHECK(std::abs(e.value - c.oracle.value) <= 1e-3);
  const Scenario p = make_scenario("p1_mass");
  for (double j : {0.0, 8.0}) CHECK(std::abs(evaluate_scenario(p, {j}, one_worker()).value - 1.0) <= 1e-6);
}

TEST_CASE("arity mismatch") {
  const Scenario s = make_scenario("coord_planes_c2");
  CHECK(s.arity() == 2);
  CHECK_THROWS_AS(evaluate_scenario(s, {4.0}, one_worker()), InputError);
  CHECK_THROWS_AS(run_scenario(s, PathSchedule::polynomial({1}), {2.0}, one_worker()), InputError);
}
