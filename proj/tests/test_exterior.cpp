#include <doctest.h>

#include <numbers>
#include <random>

#include "malab/errors.hpp"
#include "malab/exterior.hpp"

using namespace malab;

namespace {

const double kPi = std::numbers::pi;

BidegreeForm dd(int n, int k) { return wedge(BidegreeForm::dz(n, k), BidegreeForm::dzbar(n, k)); }

}  // namespace

TEST_CASE("repeated one-form wedges to zero") {
  CHECK(wedge(BidegreeForm::dz(1, 0), BidegreeForm::dz(1, 0)).is_zero());
  CHECK(wedge(BidegreeForm::dzbar(2, 1), BidegreeForm::dzbar(2, 1)).is_zero());
}

TEST_CASE("one-forms anticommute") {
  const BidegreeForm a = wedge(BidegreeForm::dz(1, 0), BidegreeForm::dzbar(1, 0));
  const BidegreeForm b = wedge(BidegreeForm::dzbar(1, 0), BidegreeForm::dz(1, 0));
  CHECK(a.max_abs_diff(-1.0 * b) == 0.0);
  CHECK(!a.is_zero());
}

TEST_CASE("square of the standard form in C^2") {
  const BidegreeForm s = dd(2, 0) + dd(2, 1);
  const BidegreeForm sq = wedge(s, s);
  CHECK(sq.max_abs_diff(2.0 * wedge(dd(2, 0), dd(2, 1))) == 0.0);
  // dz1 dzb1 dz2 dzb2 = -dz1 dz2 dzb1 dzb2
  CHECK(sq.coeff(0b11, 0b11) == cplx(-2.0, 0.0));
}

TEST_CASE("wedge_power") {
  const BidegreeForm a = dd(2, 0);
  CHECK(wedge_power(a, 0).max_abs_diff(BidegreeForm::scalar(2, 1.0)) == 0.0);
  CHECK(wedge_power(a, 2).is_zero());
  const BidegreeForm omega = hermitian_to_form(CMatrix::Identity(2, 2));
  const BidegreeForm sq = wedge_power(omega, 2);
  const BidegreeForm expect = (2.0 * kDdcFactor * kDdcFactor) * wedge(dd(2, 0), dd(2, 1));
  CHECK(sq.max_abs_diff(expect) < 1e-18);
  CHECK(top_density(sq) == doctest::Approx(2.0 / (kPi * kPi)).epsilon(1e-14));
}

TEST_CASE("top_density") {
  CHECK(top_density(kDdcFactor * dd(1, 0)) == doctest::Approx(1.0 / kPi).epsilon(1e-15));
  CHECK(top_density(BidegreeForm(1, 1, 1)) == 0.0);
  const BidegreeForm two = (2.0 * kDdcFactor * kDdcFactor) * wedge(dd(2, 0), dd(2, 1));
  CHECK(top_density(two) == doctest::Approx(2.0 / (kPi * kPi)).epsilon(1e-14));
  CHECK_THROWS_AS(top_density(BidegreeForm(2, 1, 1)), InputError);
  CHECK_THROWS_AS(top_density(cplx(1.0, 0.0) * dd(1, 0)), ConjugateSymmetryError);
}

TEST_CASE("hermitian_to_form") {
  CMatrix one(1, 1);
  one(0, 0) = 1.0;
  CHECK(hermitian_to_form(one).max_abs_diff(kDdcFactor * dd(1, 0)) < 1e-18);
  CHECK(hermitian_to_form(CMatrix::Zero(3, 3)).is_zero());
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 4;
    CMatrix a(n, n);
    for (int p = 0; p < n; ++p) {
      for (int q = 0; q < n; ++q) a(p, q) = cplx(g(rng), g(rng));
    }
    const CMatrix h = 0.5 * (a + a.adjoint());
    const BidegreeForm f = hermitian_to_form(h);
    CHECK(f.is_real());
    CHECK((form_to_hermitian(f) - h).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("dimension and degree checks") {
  CHECK_THROWS_AS(wedge(BidegreeForm::dz(1, 0), BidegreeForm::dz(2, 0)), InputError);
  CHECK(wedge(BidegreeForm(1, 1, 0), BidegreeForm::dz(1, 0)).is_zero());
  CHECK_THROWS_AS(wedge_power(dd(1, 0), -1), InputError);
}

TEST_CASE("graded commutativity with Gaussian-integer coefficients") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> c(-3, 3);
  for (int trial = 0; trial < 100; ++trial) {
    BidegreeForm a(3, 1, 0);
    BidegreeForm b(3, 1, 1);
    for (int k = 0; k < 3; ++k) {
      a.add(static_cast<BidegreeForm::Mask>(1 << k), 0, cplx(c(rng), c(rng)));
      for (int l = 0; l < 3; ++l) {
        b.add(static_cast<BidegreeForm::Mask>(1 << k), static_cast<BidegreeForm::Mask>(1 << l), cplx(c(rng), c(rng)));
      }
    }
    CHECK(wedge(a, b).max_abs_diff(wedge(b, a)) == 0.0);
    CHECK(wedge(a, a).is_zero());
  }
}
