#pragma once

#include <cstddef>
#include <vector>

namespace fclt {

/// Gauss-Legendre nodes and weights on [0,1]; exact for polynomials of
/// degree 2n-1. Nodes by Newton iteration on the Legendre recurrence.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendreRule(std::size_t n);

  template <class F>
  double integrate(F&& f) const {
    double s = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

}  // namespace fclt
