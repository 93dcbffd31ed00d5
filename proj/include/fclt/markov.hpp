#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "fclt/functionals.hpp"
#include "fclt/measures.hpp"
#include "fclt/rng.hpp"

namespace fclt {

/// Finite-state Markov kernel with a state embedding into R^d and its
/// (unique) invariant measure, computed and verified at construction.
class MarkovModel {
 public:
  /// Throws NotErgodicError when the invariant measure is not unique.
  static MarkovModel create(std::vector<Point> states,
                            std::vector<std::vector<double>> transition);

  std::size_t state_count() const { return states_.size(); }
  std::size_t dim() const { return states_.empty() ? 0 : states_.front().dim(); }
  const std::vector<Point>& states() const { return states_; }
  const std::vector<std::vector<double>>& transition() const { return P_; }

  /// Invariant weights in state order (not consolidated).
  const std::vector<double>& invariant_weights() const { return mu_weights_; }
  /// The invariant measure as a consolidated DiscreteMeasure.
  const DiscreteMeasure& invariant_measure() const { return mu_; }

  /// (P g)(state i) for a state-indexed function g.
  std::vector<double> apply_kernel(const std::vector<double>& g) const;
  /// mu(g) for a state-indexed function g.
  double mu_integral(const std::vector<double>& g) const;

  /// Evaluates a point function on the state embedding.
  std::vector<double> on_states(const std::function<double(const Point&)>& f) const;

  /// Occupation weights of sigma P^n for a start distribution sigma
  /// (state-indexed weights).
  std::vector<double> push_forward(const std::vector<double>& sigma,
                                   std::size_t n_steps) const;

  DiscreteMeasure weights_as_measure(const std::vector<double>& w) const;

  std::string to_text() const;
  static MarkovModel from_text(std::istream& in);
  static MarkovModel from_text(const std::string& text);

 private:
  MarkovModel() = default;

  std::vector<Point> states_;
  std::vector<std::vector<double>> P_;
  std::vector<double> mu_weights_;
  DiscreteMeasure mu_ = DiscreteMeasure::dirac(Point{0.0});
};

/// Verified Lyapunov/minorization certificate for a finite-state kernel.
struct LyapunovCertificate {
  enum class Variant { L2, L2prime };

  std::vector<double> V;
  double gamma = 0;
  double K = 0;
  double R = 0;
  double rho = 0;
  Variant variant = Variant::L2;
  double C_ell = 0;      // max over states of |x|^ell / (1+V)
  double ell = 0;
  double beta_max = 0;   // rho / K for L2, rho / sqrt(K) for L2prime

  /// chi(rho, beta, gamma, K, R) = (1 - rho + beta K) v
  /// (2 + beta gamma R + 2 beta K)/(2 + beta R); throws InvalidBetaError
  /// outside the admissible interval.
  double contraction_factor(double beta) const;
};

/// Checks L1 (PV <= gamma V + K), the radius condition of the chosen
/// variant, the minorization over all pairs in the sublevel set, the
/// invariant-mean bound mu(V) <= K/(1-gamma) and the sqrt-V drift.
/// Throws Error naming the witnessing state/pair on failure.
LyapunovCertificate verify_lyapunov(const MarkovModel& model, std::vector<double> V,
                                    double gamma, double K, double R, double rho,
                                    LyapunovCertificate::Variant variant,
                                    double ell);

/// Solution of F - PF = f - mu(f) with the centering mu(F) = 0.
struct PoissonSolution {
  std::vector<double> f;
  std::vector<double> F;
  std::vector<double> PF;
  double residual = 0;   // max |F - PF - f + mu(f)|
  double variance = 0;   // mu(P(F^2)) - mu((PF)^2)
};

/// Direct linear solve of the Poisson equation on the zero-mean subspace.
PoissonSolution solve_poisson_direct(const MarkovModel& model,
                                     const std::vector<double>& f);

/// Neumann series F = sum_n (P^n f - mu(f)), truncated when the term
/// norm ||.||_{sqrt(V),1} falls below tol. V may be empty (weight 1).
PoissonSolution solve_poisson_neumann(const MarkovModel& model,
                                      const std::vector<double>& f, double tol,
                                      const std::vector<double>& V = {});

/// Asymptotic variance of the Markov CLT for the functional U:
/// f = dU/dm(mu, .) on states, then mu(P(F^2)) - mu((PF)^2).
double asymptotic_variance_markov(const MarkovModel& model, const Functional& U);

/// Truncated covariance-series oracle
/// Var_mu(f) + 2 sum_{k<=lags} Cov_mu(f(X_0), f(X_k)).
double covariance_series_variance(const MarkovModel& model,
                                  const std::vector<double>& f, std::size_t lags);

/// X_1 ~ nu1, X_{i+1} ~ P(X_i, .) by inverse CDF in canonical state
/// order; deterministic given the stream.
std::vector<Point> sample_chain(const MarkovModel& model,
                                const std::vector<double>& nu1_weights,
                                std::size_t n, RngStream& rng);

}  // namespace fclt
