#include "fclt/transport.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include "fclt/errors.hpp"

namespace fclt {

namespace {

constexpr std::size_t kSolverAtomLimit = 2048;
constexpr double kReducedCostTol = 1e-12;

/// Transportation simplex on a dense cost matrix. Supplies and demands
/// must have equal totals. Degenerate pivots (theta = 0) are allowed;
/// the basis always stays a spanning tree of rows + columns.
class TransportSimplex {
 public:
  TransportSimplex(std::vector<double> supply, std::vector<double> demand,
                   std::vector<std::vector<double>> cost)
      : n_(supply.size()),
        m_(demand.size()),
        supply_(std::move(supply)),
        demand_(std::move(demand)),
        cost_(std::move(cost)),
        mass_(n_, std::vector<double>(m_, 0.0)),
        basic_(n_, std::vector<char>(m_, 0)) {}

  std::vector<std::vector<double>> solve() {
    northwest_corner();
    const std::size_t max_iter = 2000 * (n_ + m_) + 10000;
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
      compute_potentials();
      auto [ei, ej, red] = entering_cell();
      if (red >= -kReducedCostTol) return mass_;
      pivot(ei, ej);
    }
    throw ConvergenceFailureError("transportation simplex iteration cap reached");
  }

 private:
  void northwest_corner() {
    std::vector<double> s = supply_, d = demand_;
    std::size_t i = 0, j = 0;
    // advance exactly one index per step so n+m-1 cells become basic,
    // degenerate zero cells included
    while (true) {
      double q = std::min(s[i], d[j]);
      mass_[i][j] = q;
      basic_[i][j] = 1;
      s[i] -= q;
      d[j] -= q;
      if (i + 1 == n_ && j + 1 == m_) break;
      if (i + 1 < n_ && (s[i] <= d[j] || j + 1 == m_))
        ++i;
      else
        ++j;
    }
  }

  void compute_potentials() {
    u_.assign(n_, 0.0);
    v_.assign(m_, 0.0);
    std::vector<char> ru(n_, 0), rv(m_, 0);
    // adjacency from the basic cells
    std::vector<std::vector<std::size_t>> row_adj(n_), col_adj(m_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < m_; ++j)
        if (basic_[i][j]) {
          row_adj[i].push_back(j);
          col_adj[j].push_back(i);
        }
    // traversal of the spanning tree from row 0, u[0] = 0
    ru[0] = 1;
    std::vector<std::pair<char, std::size_t>> work = {{1, 0}};
    while (!work.empty()) {
      auto [is_row, idx] = work.back();
      work.pop_back();
      if (is_row) {
        for (std::size_t j : row_adj[idx])
          if (!rv[j]) {
            v_[j] = cost_[idx][j] - u_[idx];
            rv[j] = 1;
            work.push_back({0, j});
          }
      } else {
        for (std::size_t i : col_adj[idx])
          if (!ru[i]) {
            u_[i] = cost_[i][idx] - v_[idx];
            ru[i] = 1;
            work.push_back({1, i});
          }
      }
    }
  }

  std::tuple<std::size_t, std::size_t, double> entering_cell() const {
    double best = 0;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < m_; ++j) {
        if (basic_[i][j]) continue;
        double red = cost_[i][j] - u_[i] - v_[j];
        if (red < best) {
          best = red;
          bi = i;
          bj = j;
        }
      }
    return {bi, bj, best};
  }

  /// Finds the unique cycle created by adding (ei, ej) and shifts mass
  /// around it.
  void pivot(std::size_t ei, std::size_t ej) {
    // Path in the basis tree from row ei to col ej. Nodes: rows [0,n),
    // cols [n, n+m). Parent pointers store the basic cell used.
    const std::size_t nn = n_ + m_;
    std::vector<std::ptrdiff_t> parent(nn, -1);
    std::vector<char> seen(nn, 0);
    std::vector<std::size_t> queue = {ei};
    seen[ei] = 1;
    while (!queue.empty()) {
      std::size_t node = queue.back();
      queue.pop_back();
      if (node < n_) {
        std::size_t i = node;
        for (std::size_t j = 0; j < m_; ++j)
          if (basic_[i][j] && !seen[n_ + j]) {
            seen[n_ + j] = 1;
            parent[n_ + j] = static_cast<std::ptrdiff_t>(i);
            queue.push_back(n_ + j);
          }
      } else {
        std::size_t j = node - n_;
        for (std::size_t i = 0; i < n_; ++i)
          if (basic_[i][j] && !seen[i]) {
            seen[i] = 1;
            parent[i] = static_cast<std::ptrdiff_t>(n_ + j);
            queue.push_back(i);
          }
      }
    }
    // Reconstruct path col ej -> row ei as alternating cells.
    std::vector<std::pair<std::size_t, std::size_t>> cycle = {{ei, ej}};
    std::size_t node = n_ + ej;
    while (node != ei) {
      std::size_t par = static_cast<std::size_t>(parent[node]);
      if (node >= n_)
        cycle.push_back({par, node - n_});  // row par -> col node
      else
        cycle.push_back({node, par - n_});  // col par -> row node
      node = par;
    }
    // Odd positions of the cycle lose mass.
    double theta = std::numeric_limits<double>::infinity();
    std::size_t leave = 1;
    for (std::size_t k = 1; k < cycle.size(); k += 2) {
      auto [i, j] = cycle[k];
      if (mass_[i][j] < theta) {
        theta = mass_[i][j];
        leave = k;
      }
    }
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      auto [i, j] = cycle[k];
      if (k % 2 == 0)
        mass_[i][j] += theta;
      else
        mass_[i][j] -= theta;
    }
    auto [li, lj] = cycle[leave];
    basic_[li][lj] = 0;
    mass_[li][lj] = 0.0;
    basic_[ei][ej] = 1;
  }

  std::size_t n_, m_;
  std::vector<double> supply_, demand_;
  std::vector<std::vector<double>> cost_;
  std::vector<std::vector<double>> mass_;
  std::vector<std::vector<char>> basic_;
  std::vector<double> u_, v_;
};

double plan_cost(const std::vector<std::vector<double>>& mass,
                 const std::vector<std::vector<double>>& cost) {
  double s = 0;
  for (std::size_t i = 0; i < mass.size(); ++i)
    for (std::size_t j = 0; j < mass[i].size(); ++j) s += mass[i][j] * cost[i][j];
  return s;
}

TransportPlan diagonal_plan(const DiscreteMeasure& m) {
  TransportPlan plan;
  plan.rows = plan.cols = m.size();
  plan.mass.assign(plan.rows, std::vector<double>(plan.cols, 0.0));
  for (std::size_t i = 0; i < plan.rows; ++i) plan.mass[i][i] = m.atoms()[i].weight;
  plan.cost = 0.0;
  return plan;
}

void check_pair(const DiscreteMeasure& m1, const DiscreteMeasure& m2) {
  if (m1.dim() != m2.dim())
    throw DimensionMismatchError("transport between measures of different dimensions");
  if (m1.size() + m2.size() > kSolverAtomLimit)
    throw ExactSolverLimitError("combined support exceeds the exact solver bound");
}

}  // namespace

double TransportPlan::feasibility_residual(const DiscreteMeasure& source,
                                           const DiscreteMeasure& target) const {
  double worst = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    double s = 0;
    for (std::size_t j = 0; j < cols; ++j) s += mass[i][j];
    worst = std::max(worst, std::abs(s - source.atoms()[i].weight));
  }
  for (std::size_t j = 0; j < cols; ++j) {
    double s = 0;
    for (std::size_t i = 0; i < rows; ++i) s += mass[i][j];
    worst = std::max(worst, std::abs(s - target.atoms()[j].weight));
  }
  return worst;
}

std::string TransportPlan::to_text() const {
  std::ostringstream out;
  out << "plan rows=" << rows << " cols=" << cols << "\n";
  char buf[64];
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (mass[i][j] != 0.0) {
        std::snprintf(buf, sizeof(buf), "%zu %zu %.17g\n", i, j, mass[i][j]);
        out << buf;
      }
  return out.str();
}

TransportPlan min_cost_plan(
    const DiscreteMeasure& m1, const DiscreteMeasure& m2,
    const std::function<double(const Point&, const Point&)>& cost) {
  check_pair(m1, m2);
  const std::size_t n = m1.size(), m = m2.size();
  std::vector<double> supply(n), demand(m);
  for (std::size_t i = 0; i < n; ++i) supply[i] = m1.atoms()[i].weight;
  for (std::size_t j = 0; j < m; ++j) demand[j] = m2.atoms()[j].weight;
  std::vector<std::vector<double>> c(n, std::vector<double>(m));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      c[i][j] = cost(m1.atoms()[i].point, m2.atoms()[j].point);

  TransportSimplex solver(supply, demand, c);
  TransportPlan plan;
  plan.rows = n;
  plan.cols = m;
  plan.mass = solver.solve();
  plan.cost = plan_cost(plan.mass, c);
  return plan;
}

std::pair<double, TransportPlan> wasserstein_general(const DiscreteMeasure& m1,
                                                     const DiscreteMeasure& m2,
                                                     double ell) {
  if (ell <= 0) throw Error("wasserstein requires ell > 0");
  if (m1 == m2) return {0.0, diagonal_plan(m1)};
  TransportPlan plan = min_cost_plan(m1, m2, [ell](const Point& x, const Point& y) {
    return std::pow(distance(x, y), ell);
  });
  return {std::pow(plan.cost, 1.0 / std::max(ell, 1.0)), plan};
}

namespace {

/// Monotone quantile coupling for d = 1; optimal for convex costs
/// (ell >= 1) on the canonically sorted atoms.
TransportPlan quantile_plan(const DiscreteMeasure& m1, const DiscreteMeasure& m2,
                            double ell) {
  TransportPlan plan;
  plan.rows = m1.size();
  plan.cols = m2.size();
  plan.mass.assign(plan.rows, std::vector<double>(plan.cols, 0.0));
  std::size_t i = 0, j = 0;
  double ri = m1.atoms()[0].weight, rj = m2.atoms()[0].weight;
  double total = 0;
  while (i < plan.rows && j < plan.cols) {
    double q = std::min(ri, rj);
    plan.mass[i][j] += q;
    total += q * std::pow(distance(m1.atoms()[i].point, m2.atoms()[j].point), ell);
    ri -= q;
    rj -= q;
    if (ri <= 0 && i + 1 < plan.rows) ri = m1.atoms()[++i].weight;
    else if (ri <= 0) ++i;
    if (rj <= 0 && j + 1 < plan.cols) rj = m2.atoms()[++j].weight;
    else if (rj <= 0) ++j;
  }
  plan.cost = total;
  return plan;
}

}  // namespace

std::pair<double, TransportPlan> wasserstein(const DiscreteMeasure& m1,
                                             const DiscreteMeasure& m2, double ell) {
  if (ell <= 0) throw Error("wasserstein requires ell > 0");
  check_pair(m1, m2);
  if (m1 == m2) return {0.0, diagonal_plan(m1)};
  if (m1.dim() == 1 && ell >= 1.0) {
    TransportPlan plan = quantile_plan(m1, m2, ell);
    return {std::pow(plan.cost, 1.0 / std::max(ell, 1.0)), plan};
  }
  return wasserstein_general(m1, m2, ell);
}

double wasserstein0(const DiscreteMeasure& m1, const DiscreteMeasure& m2) {
  if (m1 == m2) return 0.0;
  TransportPlan plan = min_cost_plan(m1, m2, [](const Point& x, const Point& y) {
    return std::min(1.0, distance(x, y));
  });
  return plan.cost;
}

double product_wasserstein(const ProductMeasure2d& p1, const ProductMeasure2d& p2,
                           double ell) {
  return wasserstein(p1.flatten(), p2.flatten(), ell).first;
}

double d_v_beta(const DiscreteMeasure& theta, const DiscreteMeasure& sigma,
                const std::function<double(const Point&)>& V, double beta) {
  if (theta.dim() != sigma.dim())
    throw DimensionMismatchError("d_v_beta between measures of different dimensions");
  if (beta <= 0) throw InvalidBetaError("d_v_beta requires beta > 0");
  std::map<Point, double> diff;
  for (const Atom& a : theta.atoms()) diff[a.point] += a.weight;
  for (const Atom& a : sigma.atoms()) diff[a.point] -= a.weight;
  double s = 0;
  for (const auto& [p, w] : diff) s += std::abs(w) * (1.0 + beta * V(p));
  return s;
}

}  // namespace fclt
