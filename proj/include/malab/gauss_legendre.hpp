#pragma once

#include <vector>

namespace malab {

/// Gauss-Legendre rule on [-1, 1] with Legendre values at the nodes.
struct GaussLegendreRule {
  int order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
  /// legendre[k * order + i] = P_k(nodes[i]), k < order.
  std::vector<double> legendre;

  double p(int k, int i) const { return legendre[static_cast<std::size_t>(k * order + i)]; }
};

/// Cached; order in [2, 64].
const GaussLegendreRule& gauss_legendre(int order);

}  // namespace malab
