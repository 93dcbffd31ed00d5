#pragma once

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "fclt/markov.hpp"
#include "fclt/measures.hpp"
#include "fclt/rng.hpp"

namespace fclt {

/// Limit data of an independent family: the limiting measure mu, the
/// product limit eta of (1/N) sum nu_i x nu_i, and the signed limit
/// sigma of sqrt(N)(nu_bar_N - mu).
struct LimitData {
  DiscreteMeasure mu;
  ProductMeasure2d eta;
  SignedDiscreteMeasure sigma;
};

/// The sampling regimes: i.i.d., cyclic marginals, decaying
/// perturbations, sqrt-scaled perturbations (the nonzero-sigma branch),
/// finite-state Markov chains, and the continuous AR(1) recursion.
class SequenceFamily {
 public:
  struct Iid {
    DiscreteMeasure mu;
  };
  struct Cyclic {
    std::vector<DiscreteMeasure> thetas;
  };
  struct Decaying {
    DiscreteMeasure mu;
    SignedDiscreteMeasure tau;   // total mass 0
    double alpha;                // > 1/2
    double c;                    // ||nu_i - mu||_ell <= c / i^alpha
  };
  struct SqrtPerturbed {
    DiscreteMeasure mu;
    SignedDiscreteMeasure tau;   // total mass 0; mu + tau must stay >= 0
  };
  struct MarkovFamily {
    std::shared_ptr<const MarkovModel> model;
    std::vector<double> nu1;
  };
  struct Ar1 {
    double a;          // |a| < 1
    double noise_sd;   // standard deviation of the Gaussian innovation
  };

  static SequenceFamily iid(DiscreteMeasure mu, double ell);
  static SequenceFamily cyclic(std::vector<DiscreteMeasure> thetas, double ell);
  static SequenceFamily decaying(DiscreteMeasure mu, SignedDiscreteMeasure tau,
                                 double alpha, double c, double ell);
  static SequenceFamily sqrt_perturbed(DiscreteMeasure mu, SignedDiscreteMeasure tau,
                                       double ell);
  static SequenceFamily markov(std::shared_ptr<const MarkovModel> model,
                               std::vector<double> nu1, double ell);
  static SequenceFamily ar1(double a, double noise_sd, double ell);

  double ell() const { return ell_; }
  bool is_markov() const { return std::holds_alternative<MarkovFamily>(kind_); }
  bool is_ar1() const { return std::holds_alternative<Ar1>(kind_); }
  bool is_independent() const { return !is_markov() && !is_ar1(); }

  const MarkovFamily& markov_family() const;

  /// Exact law of X_i (independent kinds only).
  DiscreteMeasure marginal(std::size_t i) const;

  /// (mu, eta, sigma) of the CLT hypotheses (independent kinds only).
  LimitData limit_data() const;

  /// The limiting measure for any kind (invariant measure for Markov).
  DiscreteMeasure limit_measure() const;

  /// nu_bar_N = (1/N) sum marginal(i), exact measure algebra.
  DiscreteMeasure average_marginal(std::size_t n) const;

  std::vector<Point> sample(std::size_t n, RngStream& rng) const;

  /// Partial sum of the TX / SRCI diagnostic
  /// sum_{i<=I} (1/i) E((|X_i|^ell - i^beta) 1{|X_i|^ell > i^beta}).
  double tx_condition_partial_sum(double beta, std::size_t i_max) const;

  /// (1/N) sum_{i<=N} E(|X_i|^ell 1{|X_i|^ell > N eps}).
  double lindeberg_partial(std::size_t n, double eps) const;

 private:
  using Kind = std::variant<Iid, Cyclic, Decaying, SqrtPerturbed, MarkovFamily, Ar1>;

  SequenceFamily(Kind kind, double ell) : kind_(std::move(kind)), ell_(ell) {}

  Kind kind_;
  double ell_ = 2.0;
};

/// Draws one point from a discrete measure by inverse CDF over the
/// canonical atom order.
Point draw_from(const DiscreteMeasure& m, RngStream& rng);

}  // namespace fclt
