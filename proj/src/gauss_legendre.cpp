#include "malab/gauss_legendre.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "malab/errors.hpp"

namespace malab {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
void legendre_eval(int n, double x, double& p, double& dp) {
  double p0 = 1.0;
  double p1 = x;
  if (n == 0) {
    p = 1.0;
    dp = 0.0;
    return;
  }
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  dp = n * (x * p1 - p0) / (x * x - 1.0);
}

GaussLegendreRule build(int order) {
  GaussLegendreRule r;
  r.order = order;
  r.nodes.resize(static_cast<std::size_t>(order));
  r.weights.resize(static_cast<std::size_t>(order));
  for (int i = 0; i < order; ++i) {
    double x = -std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double p = 0.0;
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      legendre_eval(order, x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre_eval(order, x, p, dp);
    r.nodes[static_cast<std::size_t>(i)] = x;
    r.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  r.legendre.resize(static_cast<std::size_t>(order * order));
  for (int i = 0; i < order; ++i) {
    const double x = r.nodes[static_cast<std::size_t>(i)];
    double p0 = 1.0;
    double p1 = x;
    for (int k = 0; k < order; ++k) {
      double v;
      if (k == 0) {
        v = 1.0;
      } else if (k == 1) {
        v = x;
      } else {
        v = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = v;
      }
      r.legendre[static_cast<std::size_t>(k * order + i)] = v;
    }
  }
  return r;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int order) {
  if (order < 2 || order > 64) throw InputError("Gauss-Legendre order must be in [2, 64]");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussLegendreRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<GaussLegendreRule>(build(order));
  return *slot;
}

}  // namespace malab
