#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fclt/functionals.hpp"
#include "fclt/sequences.hpp"

namespace fclt {

struct ExperimentConfig {
  SequenceFamily family;
  std::string functional_id;
  std::size_t path_length = 0;       // N
  std::size_t replications = 0;      // M
  std::uint64_t master_seed = 0;
  double ell = 2.0;
  std::size_t threads = 0;           // 0 = auto
  bool decomposition_trace = false;
  std::vector<std::size_t> n_grid;

  /// Throws on violated bounds (N >= 10, M >= 100, ell consistency).
  void validate() const;
};

struct Prediction {
  double mean = 0;
  double variance = 0;
  std::string source;  // "IndependentTheorem" or "MarkovTheorem"
};

struct DecompositionPoint {
  std::size_t path_length;
  double median_abs_sqrt_n_remainder;
};

struct CltReport {
  std::vector<double> samples;  // Z_j = sqrt(N)(U(mu_N^(j)) - U(mu))
  Prediction predicted;
  double empirical_mean = 0;
  double empirical_variance = 0;
  double ks_statistic = 0;
  double ks_pvalue = 0;
  bool degenerate = false;
  std::vector<DecompositionPoint> decomposition;
};

/// The theorem's (mean, variance) from exact finite sums; asserts the
/// variance inequality predicted <= Var_mu(dU/dm(mu, .)).
Prediction predict(const SequenceFamily& family, const Functional& U);

/// M independent replications of Z = sqrt(N)(U(mu_N) - U(mu)),
/// aggregated in fixed replication order; deterministic given the
/// master seed regardless of thread count.
CltReport run_experiment(const ExperimentConfig& cfg);

/// The martingale linearization of one path: Q_N from the functional
/// derivative along the proof's interpolating measures, and the
/// remainder R_N = (U(mu_N) - U(base)) - Q_N with base = mu for Markov
/// families and nu_bar_N for independent ones. `truncated` reports
/// I_N <= N (the interpolation left the derivative ball of radius r).
struct PathDecomposition {
  double q_n = 0;
  double r_n = 0;
  bool truncated = false;
};

PathDecomposition decompose_path(const std::vector<Point>& path,
                                 const SequenceFamily& family, const Functional& U,
                                 double radius_override = -1.0);

/// One Z sample per line, 17 significant digits.
std::string samples_to_csv(const std::vector<double>& samples);

/// report.json body, schema 1; byte-stable for identical reports.
std::string report_to_json(const CltReport& report);

}  // namespace fclt
