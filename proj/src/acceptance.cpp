#include "malab/acceptance.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "malab/run.hpp"
#include "malab/scenarios.hpp"

namespace malab {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

QuadratureSettings settings_with(int workers) {
  QuadratureSettings s;
  s.workers = workers;
  return s;
}

// ---------------------------------------------------------------------------
// Property suites (A9)

struct Suite {
  std::vector<std::string> lines;
  int failures = 0;

  void check(const std::string& name, bool ok, const std::string& detail = {}) {
    if (ok) {
      lines.push_back(name + ": ok");
    } else {
      lines.push_back(name + ": FAILED" + (detail.empty() ? "" : " (" + detail + ")"));
      ++failures;
    }
  }
};

std::string fmt(const char* f, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Forms with small Gaussian-integer coefficients, so every product and sum is exact.
BidegreeForm random_form(std::mt19937_64& rng, int n, int p, int q) {
  std::uniform_int_distribution<int> c(-4, 4);
  std::uniform_int_distribution<int> mask(0, (1 << n) - 1);
  BidegreeForm f(n, p, q);
  for (int t = 0; t < 6; ++t) {
    const int h = mask(rng);
    const int a = mask(rng);
    if (std::popcount(static_cast<unsigned>(h)) != p || std::popcount(static_cast<unsigned>(a)) != q) continue;
    f.add(static_cast<BidegreeForm::Mask>(h), static_cast<BidegreeForm::Mask>(a), cplx(c(rng), c(rng)));
  }
  return f;
}

CMatrix random_hermitian(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  CMatrix a(n, n);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) a(p, q) = cplx(g(rng), g(rng));
  }
  return 0.5 * (a + a.adjoint());
}

void exterior_suite(Suite& s, std::mt19937_64& rng) {
  bool comm = true;
  bool assoc = true;
  bool bilin = true;
  bool power = true;
  bool cap = true;
  bool real = true;
  std::uniform_int_distribution<int> deg(0, 2);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 3;
    auto pick = [&] { return std::min(deg(rng), n); };
    const BidegreeForm a = random_form(rng, n, pick(), pick());
    const BidegreeForm b = random_form(rng, n, pick(), pick());
    const BidegreeForm c = random_form(rng, n, pick(), pick());
    const int sign = (((a.p() + a.q()) * (b.p() + b.q())) & 1) ? -1 : 1;
    if (wedge(a, b).max_abs_diff(static_cast<double>(sign) * wedge(b, a)) != 0.0) comm = false;
    if (wedge(wedge(a, b), c).max_abs_diff(wedge(a, wedge(b, c))) != 0.0) assoc = false;
    const BidegreeForm b2 = random_form(rng, n, b.p(), b.q());
    const cplx k(2.0, -1.0);
    if (wedge(a, b + k * b2).max_abs_diff(wedge(a, b) + k * wedge(a, b2)) != 0.0) bilin = false;
    const BidegreeForm h = random_form(rng, n, 1, 1);
    BidegreeForm it = BidegreeForm::scalar(n, 1.0);
    for (int m = 0; m <= 4; ++m) {
      if (wedge_power(h, m).max_abs_diff(it) != 0.0) power = false;
      it = wedge(h, it);
    }
    const BidegreeForm top = random_form(rng, n, n, 0);
    const BidegreeForm one = random_form(rng, n, 1, 0);
    const BidegreeForm over = wedge(top, one);
    if (!over.is_zero()) cap = false;
    const BidegreeForm r1 = hermitian_to_form(random_hermitian(rng, n));
    const BidegreeForm r2 = hermitian_to_form(random_hermitian(rng, n));
    if (!r1.is_real() || !wedge(r1, r2).is_real(1e-12)) real = false;
  }
  s.check("exterior graded commutativity (exact)", comm);
  s.check("exterior associativity (exact)", assoc);
  s.check("exterior bilinearity (exact)", bilin);
  s.check("wedge_power equals iterated wedge (exact, m <= 4)", power);
  s.check("degree cap", cap);
  s.check("real (1,1) forms wedge to real forms", real);
}

void smoother_suite(Suite& s) {
  for (const CutoffProfile prof : {CutoffProfile::quintic, CutoffProfile::exponential}) {
    const std::string tag = prof == CutoffProfile::quintic ? "quintic" : "exponential";
    const Cutoff chi(std::exp(-1.0), std::exp(1.0), prof);
    const Smoother rho(chi);
    bool mono = true;
    bool range = true;
    double prev = -1.0;
    for (int i = 0; i <= 4000; ++i) {
      const double t = std::exp(-3.0 + 6.0 * i / 4000.0);
      const auto e = chi.eval(t);
      if (e.value < prev - 1e-15) mono = false;
      if (e.value < 0.0 || e.value > 1.0 || e.derivative < 0.0) range = false;
      if ((t <= chi.a() && (e.value != 0.0 || e.derivative != 0.0)) || (t >= chi.b() && e.value != 1.0)) range = false;
      prev = e.value;
    }
    s.check(tag + " cutoff monotone", mono);
    s.check(tag + " cutoff range and support", range);
    bool convex = true;
    bool slope = true;
    bool above = true;
    bool nonincr = true;
    bool decay = true;
    for (int i = 0; i <= 400; ++i) {
      const double t = -6.0 + 12.0 * i / 400.0;
      for (double j = -2.0; j <= 6.0; j += 0.5) {
        const SmootherJet a = rho.eval(j, t);
        const SmootherJet b = rho.eval(j + 1.0, t);
        if (a.second < 0.0) convex = false;
        if (a.first < 0.0 || a.first > 1.0) slope = false;
        if (a.value < t - 1e-13) above = false;
        if (b.value > a.value + 1e-13) nonincr = false;
      }
      if (std::abs(rho.eval(40.0, t).value - t) > 1e-12) decay = false;
    }
    s.check(tag + " smoother convex", convex);
    s.check(tag + " smoother slope in [0, 1]", slope);
    s.check(tag + " smoother rho_j(t) >= t", above);
    s.check(tag + " smoother nonincreasing in j", nonincr);
    s.check(tag + " smoother rho_j(t) -> t", decay);
  }
}

// Random qpsh data: tuples of low-degree polynomials in n variables, optional smooth v.
QpshFunction random_qpsh(std::mt19937_64& rng, int n, bool with_v, bool single) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_int_distribution<int> e(0, 2);
  const int count = single ? 1 : 1 + static_cast<int>(rng() % 2);
  std::vector<HoloPolynomial> comps;
  for (int i = 0; i < count; ++i) {
    std::vector<HoloPolynomial::Term> terms;
    for (int t = 0; t < 3; ++t) {
      HoloPolynomial::Term term{};
      for (int k = 0; k < n; ++k) term.exponents[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(e(rng));
      term.coeff = cplx(g(rng), g(rng));
      terms.push_back(term);
    }
    comps.emplace_back(n, terms);
  }
  SmoothPotential v = SmoothPotential::zero(n);
  if (with_v) {
    std::vector<SmoothPotential::RealPolyTerm> terms;
    SmoothPotential::RealPolyTerm t1{};
    t1.z[0] = 1;
    t1.coeff = cplx(0.4 * g(rng), 0.4 * g(rng));
    SmoothPotential::RealPolyTerm t2{};
    t2.z[0] = 1;
    t2.zbar[0] = 1;
    t2.coeff = 0.3;
    terms = {t1, t2};
    v = SmoothPotential::real_poly(n, terms);
  }
  const double c = 0.5 + std::uniform_real_distribution<double>(0.0, 1.5)(rng);
  return QpshFunction(c, HoloTuple(std::move(comps)), std::move(v));
}

Point random_point(std::mt19937_64& rng, int n, double radius = 1.0) {
  std::uniform_real_distribution<double> u(-radius, radius);
  Point z(n);
  for (int k = 0; k < n; ++k) z[k] = cplx(u(rng), u(rng));
  return z;
}

void psh_suite(Suite& s, std::mt19937_64& rng) {
  const Smoother rho;
  double worst = 0.0;
  double chi_worst = 0.0;
  std::uniform_real_distribution<double> band(-1.2, 1.2);
  for (int trial = 0; trial < 400; ++trial) {
    const int n = 1 + trial % 3;
    const QpshFunction phi = random_qpsh(rng, n, false, false);
    const Point z = random_point(rng, n);
    const double t = phi.eval(z);
    if (!std::isfinite(t)) continue;
    const double j = -t + band(rng);
    const CMatrix h = ddc_smoothed_hermitian(phi, rho, j, z);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    worst = std::min(worst, es.eigenvalues().minCoeff() / scale);
    const QpshFunction phv = random_qpsh(rng, n, true, false);
    const double tv = phv.eval(z);
    if (std::isfinite(tv)) chi_worst = std::max(chi_worst, chi_identity_check(phv, rho, -tv + band(rng), z));
  }
  s.check("PSD of dd^c(rho_j o phi) for psh phi", worst >= -1e-10, fmt("min eigenvalue %.3g", worst));
  s.check("chi identity rho_j'(phi) = chi(|f|^2c e^v e^j)", chi_worst <= 1e-12, fmt("max residual %.3g", chi_worst));
}

FactorSpec random_factor(std::mt19937_64& rng, int n, int m, bool same_theta) {
  const ClosedOneOneForm theta = ClosedOneOneForm::constant(random_hermitian(rng, n, 0.5));
  const ClosedOneOneForm eta = same_theta ? theta : ClosedOneOneForm::constant(random_hermitian(rng, n, 0.5));
  return FactorSpec{random_qpsh(rng, n, true, true), theta, eta, m, Smoother()};
}

void route_suite(Suite& s, std::mt19937_64& rng) {
  double yamuna = 0.0;
  double binom = 0.0;
  double identity = 0.0;
  bool real = true;
  const Smoother rho;
  std::uniform_real_distribution<double> band(-1.2, 1.2);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 3;
    const int m = 1 + static_cast<int>(rng() % static_cast<unsigned>(n));
    const FactorSpec f = random_factor(rng, n, m, false);
    const Point z = random_point(rng, n);
    const double t = f.phi.eval(z);
    if (!std::isfinite(t)) continue;
    const double j = -t + band(rng);
    const BidegreeForm a = alpha_factor(f, j, z);
    const BidegreeForm y = yamuna_route(f, j, z);
    yamuna = std::max(yamuna, a.max_abs_diff(y) / std::max(1e-300, a.max_abs_coeff()));
    if (!a.is_real(1e-12 * std::max(1.0, a.max_abs_coeff()))) real = false;

    FactorSpec g = random_factor(rng, n, m, true);
    const double tg = g.phi.eval(z);
    if (!std::isfinite(tg)) continue;
    const double jg = -tg + band(rng);
    const BidegreeForm ag = alpha_factor(g, jg, z);
    binom = std::max(binom, ag.max_abs_diff(binomial_expansion(g, jg, z)) / std::max(1.0, ag.max_abs_coeff()));

    // Identity regions.
    const BidegreeForm low = alpha_factor(f, -t - 3.0, z);
    const BidegreeForm eta_m = wedge_power(f.eta.eval(z), m);
    identity = std::max(identity, low.max_abs_diff(eta_m));
    const RealJet d = f.phi.derivatives(z);
    const BidegreeForm high = alpha_factor(f, -t + 3.0, z);
    const BidegreeForm full = wedge_power(hermitian_to_form(f.theta.hermitian(z) + d.hess), m);
    identity = std::max(identity, high.max_abs_diff(full) / std::max(1.0, full.max_abs_coeff()));
  }
  s.check("alpha_factor equals yamuna_route", yamuna <= 1e-9, fmt("max relative difference %.3g", yamuna));
  s.check("binomial expansion for theta = eta", binom <= 1e-12, fmt("max difference %.3g", binom));
  s.check("identity regions eta^m and (theta + dd^c phi)^m", identity <= 1e-12, fmt("max difference %.3g", identity));
  s.check("alpha_factor outputs are real", real);
}

void stokes_suite(Suite& s, int workers) {
  const QuadratureSettings q = settings_with(workers);
  const Smoother rho;
  const QpshFunction log_z = QpshFunction::log_abs_sq(HoloTuple(HoloPolynomial::coordinate(1, 0)));
  const StokesResult a = stokes_check(log_z, rho, 6.0, TestFunction::bump(Point{0.0}, 1.0),
                                      Polydisc::round(Point{0.0}, 1.5), q);
  s.check("Stokes residual, log|z|^2 at j = 6", a.residual <= 1e-6, fmt("residual %.3g", a.residual));
  // f = 1 + z/2 does not vanish on the box; chi = 1 throughout at j = 10.
  const HoloPolynomial f(1, {{{0, 0, 0, 0}, 1.0}, {{1, 0, 0, 0}, 0.5}});
  const QpshFunction smooth(1.0, HoloTuple(f), SmoothPotential::real_part(1, 0));
  const StokesResult b =
      stokes_check(smooth, rho, 10.0, TestFunction::bump(Point{0.0}, 1.0), Box::cube(Point{0.0}, 1.0), q);
  s.check("Stokes residual, smooth phi on a box", b.residual <= 1e-8, fmt("residual %.3g", b.residual));
  const StokesResult c = stokes_check(log_z, rho, 6.0, TestFunction::bump(Point{0.0}, std::vector<std::optional<double>>{0.5}),
                                      Polydisc::round(Point{0.0}, 1.0), q);
  s.check("Stokes residual within magnitude tolerance", c.residual <= c.tolerance, fmt("residual %.3g", c.residual));
}

void admissibility_suite(Suite& s) {
  s.check("(nu^2, nu) admissible", check_admissible(PathSchedule::polynomial({2, 1})) == Admissibility::admissible);
  s.check("(nu, nu) inadmissible", check_admissible(PathSchedule::polynomial({1, 1})) == Admissibility::inadmissible);
  s.check("(nu, nu^2) inadmissible", check_admissible(PathSchedule::polynomial({1, 2})) == Admissibility::inadmissible);
}

// ---------------------------------------------------------------------------

CriterionResult make(const std::string& id, const std::string& title) {
  CriterionResult r;
  r.id = id;
  r.title = title;
  return r;
}

double pair_at(const std::string& name, const std::vector<double>& js, int workers, Estimate* est = nullptr,
               const ScenarioOptions& opts = {}) {
  const Scenario s = make_scenario(name, opts);
  const Estimate e = evaluate_scenario(s, js, settings_with(workers));
  if (est) *est = e;
  return std::abs(cplx(e.value - s.oracle.value, e.imag - s.oracle.imag));
}

std::string a3_csv(int workers) {
  const Scenario s = make_scenario("coord_planes_c2");
  return table_csv(run_scenario(s, PathSchedule::polynomial({2, 1}), {4.0}, settings_with(workers)), true);
}

}  // namespace

std::vector<std::string> run_property_suites(std::uint64_t seed, int workers, int* failures) {
  Suite s;
  std::mt19937_64 rng(seed);
  exterior_suite(s, rng);
  smoother_suite(s);
  psh_suite(s, rng);
  route_suite(s, rng);
  stokes_suite(s, workers);
  admissibility_suite(s);
  if (failures) *failures = s.failures;
  return s.lines;
}

std::string format_result_line(const CriterionResult& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%-3s %s  %-44s measured=%.3e tol=%.1e (%.1fs)%s%s", r.id.c_str(),
                r.passed ? "PASS" : "FAIL", r.title.c_str(), r.measured, r.tolerance, r.seconds,
                r.detail.empty() ? "" : "  ", r.detail.c_str());
  return buf;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& o) {
  std::vector<CriterionResult> out;
  const int w = o.workers;
  auto emit = [&](const CriterionResult& r) {
    out.push_back(r);
    if (o.on_result) o.on_result(r);
  };

  {
    auto r = make("A1", "mass invariance, log|z|^2 over |z| <= 2");
    r.tolerance = 1e-6;
    const auto t0 = Clock::now();
    bool ok = true;
    double worst_time = 0.0;
    for (double j : {2.0, 6.0, 10.0}) {
      const auto t1 = Clock::now();
      Estimate e;
      const double dev = pair_at("lelong_mass_c1", {j}, w, &e);
      const double dt = seconds_since(t1);
      worst_time = std::max(worst_time, dt);
      r.measured = std::max(r.measured, dev);
      ok = ok && e.converged && dev <= 1e-6 && dt < 5.0;
    }
    r.seconds = seconds_since(t0);
    r.passed = ok;
    r.detail = "j in {2, 6, 10}; slowest run " + fmt("%.2fs (limit 5s)", worst_time);
    emit(r);
  }
  {
    auto r = make("A2", "Dirac limit at j = 14");
    r.tolerance = 1e-3;
    const auto t0 = Clock::now();
    r.measured = pair_at("dirac_c1", {14.0}, w);
    r.seconds = seconds_since(t0);
    r.passed = r.measured <= r.tolerance;
    emit(r);
  }
  std::string csv3;
  {
    auto r = make("A3", "coord_planes_c2 along (nu^2, nu), nu = 4");
    r.tolerance = 1e-2;
    const auto t0 = Clock::now();
    const Scenario s = make_scenario("coord_planes_c2");
    const ConvergenceTable t = run_scenario(s, PathSchedule::polynomial({2, 1}), {4.0}, settings_with(w));
    csv3 = table_csv(t, true);
    r.seconds = seconds_since(t0);
    r.measured = t.final_deviation;
    r.passed = r.measured <= r.tolerance && r.seconds < 120.0 && t.verdict == Admissibility::admissible;
    r.detail = fmt("runtime limit 120s, took %.1fs", r.seconds);
    emit(r);
  }
  {
    auto r = make("A4", "order dependence noncomm_A / noncomm_B");
    r.tolerance = 5e-3;
    const auto t0 = Clock::now();
    // Quadrature tolerance well below the criterion; band edges of log|z1 z2|^2 are diagonal in the chart.
    QuadratureSettings q = settings_with(w);
    q.rel_tol = 1e-5;
    auto final_dev = [&](const std::string& name) {
      const Scenario s = make_scenario(name);
      const ConvergenceTable t = run_scenario(s, s.schedule, s.nus, q);
      return t.final_deviation;
    };
    const double a = final_dev("noncomm_A");
    const double b = final_dev("noncomm_B");
    r.seconds = seconds_since(t0);
    r.measured = std::max(a, b);
    r.passed = a <= r.tolerance && b <= r.tolerance;
    r.detail = "nu in {2, 3, 4}; " + fmt("|A - 1| = %.3g", a) + fmt(", |B - 0| = %.3g", b);
    emit(r);
  }
  {
    auto r = make("A5", "King mass at j = 10");
    r.tolerance = 1e-3;
    const auto t0 = Clock::now();
    r.measured = pair_at("king_c2", {10.0}, w);
    r.seconds = seconds_since(t0);
    r.passed = r.measured <= r.tolerance;
    emit(r);
  }
  {
    auto r = make("A6", "P^1 mass formula, j in {0, 4, 8, 12}");
    r.tolerance = 1e-6;
    const auto t0 = Clock::now();
    bool ok = true;
    for (double j : {0.0, 4.0, 8.0, 12.0}) {
      Estimate e;
      const double dev = pair_at("p1_mass", {j}, w, &e);
      r.measured = std::max(r.measured, dev);
      ok = ok && e.converged && dev <= r.tolerance;
    }
    r.seconds = seconds_since(t0);
    r.passed = ok;
    emit(r);
  }
  {
    auto r = make("A7", "theta_mixed_c2 along nu");
    r.tolerance = 1e-2;
    const auto t0 = Clock::now();
    const Scenario s = make_scenario("theta_mixed_c2");
    const ConvergenceTable t = run_scenario(s, s.schedule, s.nus, settings_with(w));
    r.seconds = seconds_since(t0);
    r.measured = t.final_deviation;
    r.passed = r.measured <= r.tolerance;
    r.detail = fmt("oracle %.10g", s.oracle.value);
    emit(r);
  }
  {
    auto r = make("A8", "cauchy_a residues at eps = 1e-4");
    const auto t0 = Clock::now();
    ScenarioOptions o1;
    o1.a = 1;
    ScenarioOptions o2;
    o2.a = 2;
    const double j = std::log(1e4);
    const double d1 = pair_at("cauchy_a", {j}, w, nullptr, o1);
    const double d2 = pair_at("cauchy_a", {j}, w, nullptr, o2);
    r.seconds = seconds_since(t0);
    r.measured = std::max(d1 / 1e-3, d2 / 5e-3);
    r.tolerance = 1.0;
    r.passed = d1 <= 1e-3 && d2 <= 5e-3;
    r.detail = fmt("a = 1: %.3g (tol 1e-3)", d1) + fmt(", a = 2: %.3g (tol 5e-3); measured is the worst ratio", d2);
    emit(r);
  }
  {
    auto r = make("A9", "property suites");
    const auto t0 = Clock::now();
    int failures = 0;
    const auto lines = run_property_suites(o.seed, w, &failures);
    r.seconds = seconds_since(t0);
    r.measured = failures;
    r.tolerance = 0.0;
    r.passed = failures == 0;
    r.detail = std::to_string(lines.size() - static_cast<std::size_t>(failures)) + "/" + std::to_string(lines.size()) +
               " checks green";
    for (const auto& l : lines) {
      if (l.find("FAILED") != std::string::npos) r.detail += "; " + l;
    }
    emit(r);
  }
  {
    auto r = make("A10", "determinism of the A3 CSV");
    const auto t0 = Clock::now();
    const std::string again = a3_csv(w);
    const std::string single = a3_csv(1);
    const std::string dual = a3_csv(2);
    r.seconds = seconds_since(t0);
    const int mismatches = (again != csv3) + (single != csv3) + (dual != csv3);
    r.measured = mismatches;
    r.tolerance = 0.0;
    r.passed = mismatches == 0;
    r.detail = "repeat, 1 worker and 2 workers compared byte for byte";
    emit(r);
  }
  return out;
}

}  // namespace malab
