#include <doctest.h>

#include <cmath>
#include <random>

#include "malab/cutoff.hpp"
#include "malab/errors.hpp"
#include "malab/qpsh.hpp"
#include "fd.hpp"

using namespace malab;

namespace {

HoloPolynomial coord(int n, int k) { return HoloPolynomial::coordinate(n, k); }

}  // namespace

TEST_CASE("eval_phi examples") {
  const QpshFunction log_z = QpshFunction::log_abs_sq(HoloTuple(coord(1, 0)));
  CHECK(log_z.eval(Point{1.0}) == 0.0);
  CHECK(log_z.eval(Point{0.0}) == -INFINITY);
  const QpshFunction phi(2.0, HoloTuple({coord(2, 0), coord(2, 1)}), SmoothPotential::real_part(2, 0));
  CHECK(phi.eval(Point{1.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("phi_derivatives examples") {
  const QpshFunction log_z = QpshFunction::log_abs_sq(HoloTuple(coord(1, 0)));
  const RealJet j = log_z.derivatives(Point{2.0});
  CHECK(std::abs(j.grad(0) - 0.5) < 1e-15);
  CHECK(std::abs(j.hess(0, 0)) < 1e-15);
  const QpshFunction fs = QpshFunction::log_abs_sq(HoloTuple({coord(2, 0), coord(2, 1)}));
  const RealJet k = fs.derivatives(Point{1.0, 0.0});
  CMatrix expect = CMatrix::Zero(2, 2);
  expect(1, 1) = 1.0;
  CHECK((k.hess - expect).cwiseAbs().maxCoeff() < 1e-14);
  CHECK_THROWS_AS(log_z.derivatives(Point{0.0}), SingularityError);
}

TEST_CASE("hessian matches finite differences") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 3;
    std::vector<HoloPolynomial> comps;
    for (int c = 0; c < 2; ++c) {
      HoloPolynomial::Term t0{};
      t0.coeff = cplx(g(rng), g(rng));
      HoloPolynomial::Term t1{};
      t1.exponents[static_cast<std::size_t>(trial % n)] = 2;
      t1.coeff = cplx(g(rng), g(rng));
      HoloPolynomial::Term t2{};
      t2.exponents[0] = 1;
      t2.coeff = cplx(g(rng), g(rng));
      comps.emplace_back(n, std::vector<HoloPolynomial::Term>{t0, t1, t2});
    }
    SmoothPotential::RealPolyTerm r{};
    r.z[0] = 1;
    r.zbar[0] = 1;
    r.coeff = 0.7;
    const SmoothPotential v = SmoothPotential::combination(
        n, {{1.0, SmoothPotential::real_poly(n, {r})}, {0.5, SmoothPotential::log_one_plus({coord(n, 0)})},
            {0.3, SmoothPotential::real_part(n, n - 1)}});
    const QpshFunction phi(0.5 + 0.25 * (trial % 4), HoloTuple(comps), v);
    Point z(n);
    for (int k = 0; k < n; ++k) z[k] = cplx(u(rng), u(rng));
    const RealJet jet = phi.derivatives(z);
    const CMatrix fd = testing::fd_hessian([&](const Point& w) { return phi.eval(w); }, z, 1e-4);
    const double scale = std::max(1.0, jet.hess.cwiseAbs().maxCoeff());
    CHECK((jet.hess - fd).cwiseAbs().maxCoeff() / scale < 1e-6);
    CHECK((jet.hess - jet.hess.adjoint()).cwiseAbs().maxCoeff() < 1e-12 * scale);
  }
}

TEST_CASE("qpsh validation") {
  CHECK_THROWS_WITH_AS(QpshFunction(-1.0, HoloTuple(coord(1, 0)), SmoothPotential::zero(1)), "c must be positive",
                       InputError);
  CHECK_THROWS_AS(QpshFunction(1.0, HoloTuple(coord(2, 0)), SmoothPotential::zero(1)), InputError);
}

TEST_CASE("cutoff_eval examples") {
  const Cutoff chi(0.5, 2.0);
  CHECK(chi.eval(0.25).value == 0.0);
  CHECK(chi.eval(0.25).derivative == 0.0);
  CHECK(chi.eval(4.0).value == 1.0);
  CHECK(chi.eval(4.0).derivative == 0.0);
  CHECK(chi.eval(1.0).value == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(Cutoff(2.0, 1.0), InputError);
  CHECK_THROWS_AS(chi.eval(0.0), InputError);
  const Cutoff e(0.5, 2.0, CutoffProfile::exponential);
  CHECK(e.eval(1.0).value == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("cutoff derivative matches finite differences") {
  for (const CutoffProfile prof : {CutoffProfile::quintic, CutoffProfile::exponential}) {
    const Cutoff chi(0.3, 3.0, prof);
    for (double t = 0.35; t < 2.9; t += 0.05) {
      const double h = 1e-6 * t;
      const double fd = (chi.eval(t + h).value - chi.eval(t - h).value) / (2.0 * h);
      CHECK(chi.eval(t).derivative == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("smoother_eval examples") {
  const Smoother rho;
  const double la = rho.cutoff().log_a();
  const double lb = rho.cutoff().log_b();
  const SmootherJet id = rho.eval(2.0, lb - 2.0 + 0.5);
  CHECK(id.value == doctest::Approx(lb - 1.5).epsilon(1e-15));
  CHECK(id.first == 1.0);
  CHECK(id.second == 0.0);
  const SmootherJet lo = rho.eval(2.0, la - 2.0 - 1.0);
  CHECK(lo.first == 0.0);
  CHECK(lo.second == 0.0);
  CHECK(lo.value == doctest::Approx(rho.floor_value() - 2.0).epsilon(1e-15));
  for (double t = -5.0; t <= 5.0; t += 0.01) {
    for (double j = -3.0; j <= 3.0; j += 0.25) {
      CHECK(rho.eval(j + 1.0, t).value <= rho.eval(j, t).value + 1e-14);
    }
  }
}

TEST_CASE("smoother derivatives match finite differences") {
  const Smoother rho;
  for (double t = -1.5; t <= 1.5; t += 0.05) {
    const double h = 1e-5;
    const SmootherJet c = rho.eval(0.3, t);
    const double d1 = (rho.eval(0.3, t + h).value - rho.eval(0.3, t - h).value) / (2 * h);
    const double d2 = (rho.eval(0.3, t + h).first - rho.eval(0.3, t - h).first) / (2 * h);
    CHECK(std::abs(c.first - d1) < 1e-8);
    CHECK(std::abs(c.second - d2) < 1e-7);
  }
}

TEST_CASE("chi identity") {
  const Smoother rho;
  const QpshFunction log_z = QpshFunction::log_abs_sq(HoloTuple(coord(1, 0)));
  for (double j : {-3.0, 0.0, 0.4, 5.0}) CHECK(chi_identity_check(log_z, rho, j, Point{1.0}) == 0.0);
  const QpshFunction phi(2.0, HoloTuple(coord(1, 0)), SmoothPotential::real_part(1, 0));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const Point z{cplx(u(rng), u(rng))};
    CHECK(chi_identity_check(phi, rho, -phi.eval(z) + u(rng), z) <= 1e-12);
  }
  CHECK_THROWS_AS(chi_identity_check(log_z, rho, 0.0, Point{0.0}), SingularityError);
}

TEST_CASE("interval enclosures contain samples") {
  const QpshFunction phi(1.5, HoloTuple({coord(2, 0), HoloPolynomial::constant(2, 0.3)}),
                         SmoothPotential::log_one_plus({coord(2, 1)}));
  const CInterval box[2] = {CInterval{{0.1, 0.4}, {-0.2, 0.3}}, CInterval{{-1.0, -0.5}, {0.0, 0.5}}};
  const Interval e = phi.enclose(box);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const Point z{cplx(0.1 + 0.3 * u(rng), -0.2 + 0.5 * u(rng)), cplx(-1.0 + 0.5 * u(rng), 0.5 * u(rng))};
    const double v = phi.eval(z);
    CHECK(v >= e.lo - 1e-12);
    CHECK(v <= e.hi + 1e-12);
  }
}
