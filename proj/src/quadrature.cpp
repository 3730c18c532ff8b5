#include "malab/quadrature.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <string>
#include <thread>

#include "malab/errors.hpp"
#include "malab/gauss_legendre.hpp"

namespace malab {

Box Box::cube(Point center, double half_width) {
  Box b;
  b.center = center;
  b.half_widths.assign(static_cast<std::size_t>(2 * center.dim()), half_width);
  return b;
}

Polydisc Polydisc::round(Point center, double radius) {
  Polydisc p;
  p.center = center;
  p.radii.assign(static_cast<std::size_t>(center.dim()), radius);
  return p;
}

int domain_dim(const Domain& d) {
  return std::visit([](const auto& x) { return x.dim(); }, d);
}

void QuadratureSettings::validate() const {
  if (order < 4 || order > 32) throw InputError("quadrature order must be in [4, 32]");
  if (max_depth < 1 || max_depth > 40) throw InputError("max_depth must be in [1, 40]");
  if (!(rel_tol > 0.0)) throw InputError("rel_tol must be positive");
  if (!(abs_tol > 0.0)) throw InputError("abs_tol must be positive");
  if (max_evals < 1) throw InputError("max_evals must be positive");
  if (workers < 0) throw InputError("workers must be nonnegative");
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("MALAB_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

namespace {

constexpr int kMaxAxes = 2 * kMaxDim;
constexpr std::size_t kMaxPrerefineCells = 400'000;

struct Cell {
  std::array<double, kMaxAxes> lo{};
  std::array<double, kMaxAxes> hi{};
  std::array<std::uint8_t, kMaxAxes> depth{};
  double re = 0.0;
  double im = 0.0;
  double err = 0.0;
  std::array<double, kMaxAxes> axis_err{};
  bool evaluated = false;
};

struct Chart {
  bool polar = false;
  int n = 0;
  int axes = 0;
  Point center;

  // Maps reference coordinates to a point; returns the Jacobian factor.
  double map(const double* x, Point& z) const {
    if (!polar) {
      for (int k = 0; k < n; ++k) z[k] = cplx(x[2 * k], x[2 * k + 1]);
      return 1.0;
    }
    double jac = 1.0;
    for (int k = 0; k < n; ++k) {
      const double r = std::exp(x[2 * k]);
      z[k] = center[k] + cplx(r * std::cos(x[2 * k + 1]), r * std::sin(x[2 * k + 1]));
      jac *= r * r;
    }
    return jac;
  }
};

std::vector<Cell> initial_cells(const Domain& domain, Chart& chart) {
  std::vector<Cell> cells;
  if (const auto* box = std::get_if<Box>(&domain)) {
    chart.polar = false;
    chart.n = box->dim();
    chart.axes = 2 * chart.n;
    chart.center = box->center;
    if (static_cast<int>(box->half_widths.size()) != chart.axes) throw InputError("box needs 2n half-widths");
    Cell c;
    for (int k = 0; k < chart.n; ++k) {
      const double h0 = box->half_widths[static_cast<std::size_t>(2 * k)];
      const double h1 = box->half_widths[static_cast<std::size_t>(2 * k + 1)];
      if (!(h0 > 0.0) || !(h1 > 0.0)) throw InputError("box half-widths must be positive");
      c.lo[2 * k] = box->center[k].real() - h0;
      c.hi[2 * k] = box->center[k].real() + h0;
      c.lo[2 * k + 1] = box->center[k].imag() - h1;
      c.hi[2 * k + 1] = box->center[k].imag() + h1;
    }
    cells.push_back(c);
    return cells;
  }
  const auto& pd = std::get<Polydisc>(domain);
  chart.polar = true;
  chart.n = pd.dim();
  chart.axes = 2 * chart.n;
  chart.center = pd.center;
  if (static_cast<int>(pd.radii.size()) != chart.n) throw InputError("polydisc needs one radius per coordinate");
  Cell c;
  for (int k = 0; k < chart.n; ++k) {
    const double r = pd.radii[static_cast<std::size_t>(k)];
    if (!(r > 0.0)) throw InputError("polydisc radii must be positive");
    if (!(std::log(r) > pd.log_r_min)) throw InputError("polydisc radius below log_r_min");
    c.lo[2 * k] = pd.log_r_min;
    c.hi[2 * k] = std::log(r);
    c.lo[2 * k + 1] = 0.0;
    c.hi[2 * k + 1] = 2.0 * std::numbers::pi;
  }
  cells.push_back(c);
  return cells;
}

std::pair<Cell, Cell> split(const Cell& c, int axis, double at = std::numeric_limits<double>::quiet_NaN()) {
  Cell a = c;
  Cell b = c;
  const double mid = std::isnan(at) ? 0.5 * (c.lo[axis] + c.hi[axis]) : at;
  a.hi[axis] = mid;
  b.lo[axis] = mid;
  a.depth[axis] = b.depth[axis] = static_cast<std::uint8_t>(c.depth[axis] + 1);
  a.evaluated = b.evaluated = false;
  a.re = a.im = a.err = b.re = b.im = b.err = 0.0;
  return {a, b};
}

// Range of g = phi + j over a cell, and per-axis variation, from a sample grid.
struct BandProbe {
  bool meets = false;
  double width = 0.0;
  std::array<double, kMaxAxes> variation{};
};

BandProbe probe_band(const Band& band, const Cell& c, const Chart& chart) {
  BandProbe out;
  const int axes = chart.axes;
  const double neg_inf = -std::numeric_limits<double>::infinity();
  if (!chart.polar) {
    std::array<CInterval, kMaxDim> box;
    for (int k = 0; k < chart.n; ++k) {
      box[static_cast<std::size_t>(k)] = CInterval{Interval{c.lo[2 * k], c.hi[2 * k]},
                                                   Interval{c.lo[2 * k + 1], c.hi[2 * k + 1]}};
    }
    const Interval g = band.phi.enclose(CBox(box.data(), static_cast<std::size_t>(chart.n))) + Interval{band.j, band.j};
    out.meets = !(g.hi < band.log_a || g.lo > band.log_b);
    out.width = g.hi - g.lo;
    if (!std::isfinite(out.width)) out.width = std::numeric_limits<double>::infinity();
    // Longest axis in Cartesian charts.
    for (int d = 0; d < axes; ++d) out.variation[d] = c.hi[d] - c.lo[d];
    return out;
  }
  const int pts = axes <= 4 ? 5 : 3;
  int total = 1;
  for (int d = 0; d < axes; ++d) total *= pts;
  std::vector<double> g(static_cast<std::size_t>(total));
  double gmin = std::numeric_limits<double>::infinity();
  double gmax = neg_inf;
  Point z(chart.n);
  std::array<double, kMaxAxes> x{};
  for (int idx = 0; idx < total; ++idx) {
    int rest = idx;
    for (int d = 0; d < axes; ++d) {
      const int i = rest % pts;
      rest /= pts;
      x[d] = c.lo[d] + (c.hi[d] - c.lo[d]) * i / (pts - 1);
    }
    chart.map(x.data(), z);
    double v = band.phi.eval(z) + band.j;
    if (v == neg_inf) v = -1e300;
    g[static_cast<std::size_t>(idx)] = v;
    gmin = std::min(gmin, v);
    gmax = std::max(gmax, v);
  }
  // Samples miss extrema between nodes; pad by a fraction of the observed spread.
  const double pad = 0.25 * (gmax - gmin);
  out.meets = !(gmax + pad < band.log_a || gmin - pad > band.log_b);
  out.width = gmax - gmin;
  int stride = 1;
  for (int d = 0; d < axes; ++d) {
    double var = 0.0;
    for (int idx = 0; idx < total; ++idx) {
      if ((idx / stride) % pts != 0) continue;
      double lmin = std::numeric_limits<double>::infinity();
      double lmax = neg_inf;
      for (int i = 0; i < pts; ++i) {
        const double v = g[static_cast<std::size_t>(idx + i * stride)];
        lmin = std::min(lmin, v);
        lmax = std::max(lmax, v);
      }
      var = std::max(var, lmax - lmin);
    }
    out.variation[d] = var;
    stride *= pts;
  }
  return out;
}

double band_value(const Band& band, const Chart& chart, const double* x) {
  Point z(chart.n);
  chart.map(x, z);
  const double v = band.phi.eval(z) + band.j;
  return v == -std::numeric_limits<double>::infinity() ? -1e300 : v;
}

// Position along `axis` (on the line through the cell center) where phi + j crosses a band edge,
// kept away from the cell ends; NaN if there is none.
double edge_crossing(const Band& band, const Cell& c, const Chart& chart, int axis) {
  constexpr int kSamples = 9;
  const double len = c.hi[axis] - c.lo[axis];
  const double margin = 0.02 * len;
  std::array<double, kMaxAxes> x{};
  for (int d = 0; d < chart.axes; ++d) x[d] = 0.5 * (c.lo[d] + c.hi[d]);
  auto g = [&](double t) {
    x[axis] = t;
    return band_value(band, chart, x.data());
  };
  std::array<double, kSamples> ts{};
  std::array<double, kSamples> gs{};
  for (int i = 0; i < kSamples; ++i) {
    ts[i] = c.lo[axis] + len * i / (kSamples - 1);
    gs[i] = g(ts[i]);
  }
  for (const double edge : {band.log_a, band.log_b}) {
    for (int i = 0; i + 1 < kSamples; ++i) {
      const double f0 = gs[i] - edge;
      const double f1 = gs[i + 1] - edge;
      if (f0 == 0.0 || (f0 < 0.0) == (f1 < 0.0)) continue;
      double lo = ts[i];
      double hi = ts[i + 1];
      const bool rising = f0 < 0.0;
      for (int it = 0; it < 60 && hi - lo > 1e-13 * len; ++it) {
        const double m = 0.5 * (lo + hi);
        if ((g(m) - edge < 0.0) == rising) {
          lo = m;
        } else {
          hi = m;
        }
      }
      const double t = 0.5 * (lo + hi);
      if (t > c.lo[axis] + margin && t < c.hi[axis] - margin) return t;
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

// Splits cells until every band is resolved: cells meeting a band are made no wider than it
// (in phi + j), and band edges crossing a cell interior become cell faces.
std::vector<Cell> prerefine(std::vector<Cell> cells, std::span<const Band> bands, const Chart& chart,
                            const QuadratureSettings& s) {
  if (!s.shell_refine || bands.empty()) return cells;
  std::vector<Cell> done;
  std::vector<Cell> work = std::move(cells);
  while (!work.empty()) {
    Cell c = work.back();
    work.pop_back();
    int axis = -1;
    double at = std::numeric_limits<double>::quiet_NaN();
    double best = 0.0;
    const Band* wide = nullptr;
    for (const auto& band : bands) {
      const BandProbe p = probe_band(band, c, chart);
      if (!p.meets || !(p.width > band.log_b - band.log_a)) continue;
      for (int d = 0; d < chart.axes; ++d) {
        if (c.depth[d] >= s.max_depth) continue;
        if (p.variation[d] > best) {
          best = p.variation[d];
          axis = d;
          wide = &band;
        }
      }
    }
    if (wide != nullptr) {
      at = edge_crossing(*wide, c, chart, axis);
    } else {
      for (const auto& band : bands) {
        if (!probe_band(band, c, chart).meets) continue;
        for (int d = 0; d < chart.axes && axis < 0; ++d) {
          if (c.depth[d] >= s.max_depth) continue;
          const double t = edge_crossing(band, c, chart, d);
          if (!std::isnan(t)) {
            axis = d;
            at = t;
          }
        }
        if (axis >= 0) break;
      }
    }
    if (axis < 0 || done.size() + work.size() > kMaxPrerefineCells) {
      done.push_back(c);
      continue;
    }
    auto [a, b] = split(c, axis, at);
    work.push_back(b);
    work.push_back(a);
  }
  return done;
}

class CellEvaluator {
 public:
  CellEvaluator(const Integrand& f, const Chart& chart, const GaussLegendreRule& rule)
      : f_(f), chart_(chart), rule_(rule) {
    const int p = rule.order;
    points_ = 1;
    for (int d = 0; d < chart.axes; ++d) points_ *= p;
  }

  long long points_per_cell() const { return points_; }

  void eval(Cell& c, std::vector<cplx>& buf) const {
    const int p = rule_.order;
    const int axes = chart_.axes;
    buf.resize(static_cast<std::size_t>(points_));
    std::array<double, kMaxAxes> half{};
    std::array<double, kMaxAxes> mid{};
    double jac_ref = 1.0;
    for (int d = 0; d < axes; ++d) {
      half[d] = 0.5 * (c.hi[d] - c.lo[d]);
      mid[d] = 0.5 * (c.hi[d] + c.lo[d]);
      jac_ref *= half[d];
    }
    Point z(chart_.n);
    std::array<double, kMaxAxes> x{};
    std::array<int, kMaxAxes> idx{};
    double sum_re = 0.0;
    double sum_im = 0.0;
    double sum_abs = 0.0;
    for (long long flat = 0; flat < points_; ++flat) {
      double w = 1.0;
      for (int d = 0; d < axes; ++d) {
        const int i = idx[d];
        x[d] = mid[d] + half[d] * rule_.nodes[static_cast<std::size_t>(i)];
        w *= rule_.weights[static_cast<std::size_t>(i)];
      }
      const double jac = chart_.map(x.data(), z);
      const cplx v = f_(z) * jac;
      buf[static_cast<std::size_t>(flat)] = v;
      sum_re += w * v.real();
      sum_im += w * v.imag();
      sum_abs += w * std::abs(v);
      for (int d = 0; d < axes; ++d) {
        if (++idx[d] < p) break;
        idx[d] = 0;
      }
    }
    c.re = jac_ref * sum_re;
    c.im = jac_ref * sum_im;

    // Per-axis trailing Legendre coefficients, averaged over the other axes.
    double total_err = 0.0;
    long long stride = 1;
    for (int d = 0; d < axes; ++d) {
      double tail = 0.0;
      double prev = 0.0;
      for (long long flat = 0; flat < points_; ++flat) {
        if ((flat / stride) % p != 0) continue;
        double w_others = 1.0;
        long long rest = flat;
        for (int e = 0; e < axes; ++e) {
          const int i = static_cast<int>(rest % p);
          rest /= p;
          if (e != d) w_others *= rule_.weights[static_cast<std::size_t>(i)];
        }
        std::array<double, 4> mag{};
        for (int t = 0; t < 4; ++t) {
          const int k = p - 1 - t;
          cplx ck = 0.0;
          for (int i = 0; i < p; ++i) {
            ck += rule_.weights[static_cast<std::size_t>(i)] * rule_.p(k, i) *
                  buf[static_cast<std::size_t>(flat + i * stride)];
          }
          mag[static_cast<std::size_t>(t)] = std::abs(ck) * (2.0 * k + 1.0) / 2.0;
        }
        tail += w_others * (mag[0] + mag[1]);
        prev += w_others * (mag[2] + mag[3]);
      }
      double ratio = 1.0;
      if (prev > 0.0) ratio = std::min(1.0, tail / prev);
      const double e = 2.0 * jac_ref * tail * ratio;
      c.axis_err[d] = e;
      total_err += e;
      stride *= p;
    }
    c.err = total_err + 1e-14 * jac_ref * sum_abs;
    c.evaluated = true;
  }

 private:
  const Integrand& f_;
  const Chart& chart_;
  const GaussLegendreRule& rule_;
  long long points_ = 0;
  
};

void evaluate_pending(std::vector<Cell>& cells, const CellEvaluator& ev, int workers) {
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!cells[i].evaluated) pending.push_back(i);
  }
  if (pending.empty()) return;
  const int nt = std::max(1, std::min<int>(workers, static_cast<int>(pending.size())));
  if (nt == 1) {
    std::vector<cplx> buf;
    for (std::size_t i : pending) ev.eval(cells[i], buf);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(nt));
  for (int t = 0; t < nt; ++t) {
    threads.emplace_back([&] {
      std::vector<cplx> buf;
      for (;;) {
        const std::size_t k = next.fetch_add(1);
        if (k >= pending.size()) break;
        ev.eval(cells[pending[k]], buf);
      }
    });
  }
  for (auto& th : threads) th.join();
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t h = v.size() / 2;
  return pairwise_sum(v.subspan(0, h)) + pairwise_sum(v.subspan(h));
}

struct Totals {
  double re = 0.0;
  double im = 0.0;
  double err = 0.0;
};

Totals canonical_totals(std::vector<Cell>& cells) {
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    if (a.lo != b.lo) return a.lo < b.lo;
    return a.hi < b.hi;
  });
  std::vector<double> re(cells.size());
  std::vector<double> im(cells.size());
  std::vector<double> er(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    re[i] = cells[i].re;
    im[i] = cells[i].im;
    er[i] = cells[i].err;
  }
  return {pairwise_sum(re), pairwise_sum(im), pairwise_sum(er)};
}

bool splittable(const Cell& c, int axes, int max_depth) {
  for (int d = 0; d < axes; ++d) {
    if (c.depth[d] < max_depth) return true;
  }
  return false;
}

int split_axis(const Cell& c, int axes, int max_depth) {
  int axis = -1;
  double best = -1.0;
  for (int d = 0; d < axes; ++d) {
    if (c.depth[d] >= max_depth) continue;
    if (c.axis_err[d] > best) {
      best = c.axis_err[d];
      axis = d;
    }
  }
  return axis;
}

}  // namespace

Estimate integrate(const Integrand& f, const Domain& domain, std::span<const Band> bands,
                   const QuadratureSettings& settings) {
  settings.validate();
  Chart chart;
  std::vector<Cell> cells = initial_cells(domain, chart);
  for (const auto& b : bands) {
    if (b.phi.dim() != chart.n) throw InputError("band dimension does not match the domain");
  }
  cells = prerefine(std::move(cells), bands, chart, settings);

  const GaussLegendreRule& rule = gauss_legendre(settings.order);
  const CellEvaluator ev(f, chart, rule);
  const int workers = resolve_workers(settings.workers);
  const long long ppc = ev.points_per_cell();

  Estimate est;
  long long evals = 0;
  bool over_budget = false;
  if (static_cast<long long>(cells.size()) * ppc > settings.max_evals) {
    over_budget = true;
    // Evaluate what the budget allows; the rest contribute nothing.
    cells.resize(static_cast<std::size_t>(std::max<long long>(1, settings.max_evals / ppc)));
  }
  evaluate_pending(cells, ev, workers);
  evals += static_cast<long long>(cells.size()) * ppc;

  bool converged = false;
  while (!over_budget) {
    double val_re = 0.0;
    double val_im = 0.0;
    double tot_err = 0.0;
    double stuck_err = 0.0;
    for (const auto& c : cells) {
      val_re += c.re;
      val_im += c.im;
      tot_err += c.err;
      if (!splittable(c, chart.axes, settings.max_depth)) stuck_err += c.err;
    }
    const double target = std::max(settings.rel_tol * std::abs(cplx(val_re, val_im)), settings.abs_tol);
    if (tot_err <= target) {
      converged = true;
      break;
    }
    if (stuck_err > target) break;

    std::vector<std::size_t> order(cells.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (cells[a].err != cells[b].err) return cells[a].err > cells[b].err;
      return a < b;
    });
    std::vector<std::size_t> chosen;
    double acc = 0.0;
    for (std::size_t i : order) {
      if (acc >= 0.5 * tot_err) break;
      if (!splittable(cells[i], chart.axes, settings.max_depth)) continue;
      chosen.push_back(i);
      acc += cells[i].err;
    }
    if (chosen.empty()) break;
    if (evals + 2 * static_cast<long long>(chosen.size()) * ppc > settings.max_evals) {
      over_budget = true;
      break;
    }
    std::vector<Cell> fresh;
    fresh.reserve(2 * chosen.size());
    std::vector<bool> drop(cells.size(), false);
    for (std::size_t i : chosen) {
      auto [a, b] = split(cells[i], split_axis(cells[i], chart.axes, settings.max_depth));
      fresh.push_back(a);
      fresh.push_back(b);
      drop[i] = true;
    }
    std::vector<Cell> next;
    next.reserve(cells.size() + chosen.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (!drop[i]) next.push_back(cells[i]);
    }
    for (auto& c : fresh) next.push_back(c);
    cells = std::move(next);
    evaluate_pending(cells, ev, workers);
    evals += static_cast<long long>(fresh.size()) * ppc;
  }

  const Totals t = canonical_totals(cells);
  est.value = t.re;
  est.imag = t.im;
  est.error = t.err;
  est.cells = static_cast<long long>(cells.size());
  est.evals = evals;
  est.converged = converged && !over_budget;
  if (est.converged) {
    const double target = std::max(settings.rel_tol * std::abs(cplx(est.value, est.imag)), settings.abs_tol);
    est.converged = est.error <= target;
  }
  return est;
}

}  // namespace malab
