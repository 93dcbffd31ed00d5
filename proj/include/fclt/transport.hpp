#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "fclt/measures.hpp"

namespace fclt {

/// Feasible transport plan between two discrete measures, row marginals
/// matching the source weights and column marginals the target weights.
struct TransportPlan {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::vector<double>> mass;
  double cost = 0;

  /// Max deviation of row/column sums from the given marginals.
  double feasibility_residual(const DiscreteMeasure& source,
                              const DiscreteMeasure& target) const;

  std::string to_text() const;
};

/// Exact minimum-cost transport between the atom sets of m1 and m2 under
/// an arbitrary cost function, by the transportation simplex on the dense
/// bipartite cost matrix.
TransportPlan min_cost_plan(
    const DiscreteMeasure& m1, const DiscreteMeasure& m2,
    const std::function<double(const Point&, const Point&)>& cost);

/// W_ell for ell > 0: (min plan cost)^{1/(ell v 1)} with cost |x-y|^ell.
/// For d=1 and ell >= 1 the sorted quantile coupling is optimal and is
/// used directly; the general solver path is exposed separately for
/// cross-checks.
std::pair<double, TransportPlan> wasserstein(const DiscreteMeasure& m1,
                                             const DiscreteMeasure& m2, double ell);

/// Same value, always through the transportation simplex.
std::pair<double, TransportPlan> wasserstein_general(const DiscreteMeasure& m1,
                                                     const DiscreteMeasure& m2,
                                                     double ell);

/// W_0: optimal cost with c(x,y) = 1 ^ |x-y|, no outer root.
double wasserstein0(const DiscreteMeasure& m1, const DiscreteMeasure& m2);

/// W_ell between measures on R^d x R^d, pairs treated as points of R^{2d}.
double product_wasserstein(const ProductMeasure2d& p1, const ProductMeasure2d& p2,
                           double ell);

/// d_{V,beta}(theta, sigma) = sum over the union support of
/// |theta(x) - sigma(x)| (1 + beta V(x)), the atomwise extremal phi.
double d_v_beta(const DiscreteMeasure& theta, const DiscreteMeasure& sigma,
                const std::function<double(const Point&)>& V, double beta);

}  // namespace fclt
