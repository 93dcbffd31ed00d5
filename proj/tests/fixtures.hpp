#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "fclt/markov.hpp"
#include "fclt/measures.hpp"
#include "fclt/rng.hpp"
#include "fclt/sequences.hpp"

namespace fclt::fixtures {

/// Measure on R^1 from (weight, coordinate) pairs.
inline DiscreteMeasure measure1d(std::vector<std::pair<double, double>> atoms) {
  std::vector<Atom> raw;
  for (auto [w, x] : atoms) raw.push_back({Point{x}, w});
  return DiscreteMeasure::consolidate(1, std::move(raw));
}

inline SignedDiscreteMeasure signed1d(std::vector<std::pair<double, double>> atoms) {
  std::vector<Atom> raw;
  for (auto [w, x] : atoms) raw.push_back({Point{x}, w});
  return SignedDiscreteMeasure::consolidate(1, std::move(raw));
}

/// Two-state chain on {0, 1} with P(0->1) = 0.3, P(1->0) = 0.2;
/// invariant measure (0.4, 0.6), spectral gap 0.5.
inline std::shared_ptr<const MarkovModel> two_state_model() {
  return std::make_shared<const MarkovModel>(
      MarkovModel::create({Point{0.0}, Point{1.0}}, {{0.7, 0.3}, {0.2, 0.8}}));
}

inline SequenceFamily two_state_family(double ell) {
  auto model = two_state_model();
  std::vector<double> nu1 = model->invariant_weights();
  return SequenceFamily::markov(std::move(model), std::move(nu1), ell);
}

/// Three cyclic marginals on {0, 1, 2} whose average is uniform; the
/// variance U-statistic is non-degenerate on this family.
inline SequenceFamily cyclic3_family(double ell) {
  return SequenceFamily::cyclic({measure1d({{0.5, 0.0}, {0.5, 1.0}}),
                                 measure1d({{0.5, 1.0}, {0.5, 2.0}}),
                                 measure1d({{0.5, 0.0}, {0.5, 2.0}})},
                                ell);
}

/// The fully deterministic two-point cyclic family (degenerate for the
/// variance U-statistic).
inline SequenceFamily cyclic2_family(double ell) {
  return SequenceFamily::cyclic(
      {DiscreteMeasure::dirac(Point{0.0}), DiscreteMeasure::dirac(Point{1.0})}, ell);
}

inline SequenceFamily iid_family(double ell) {
  return SequenceFamily::iid(measure1d({{0.25, 0.0}, {0.75, 1.0}}), ell);
}

inline SequenceFamily decaying_family(double ell) {
  return SequenceFamily::decaying(measure1d({{0.5, 0.0}, {0.5, 1.0}}),
                                  signed1d({{-0.2, 0.0}, {0.2, 1.0}}), 1.0, 1.0, ell);
}

inline SequenceFamily sqrt_perturbed_family(double ell) {
  return SequenceFamily::sqrt_perturbed(measure1d({{0.5, 0.0}, {0.5, 1.0}}),
                                        signed1d({{-0.1, 0.0}, {0.1, 1.0}}), ell);
}

/// Random measure with `max_atoms` distinct points in [-1, 1]^d and
/// uniform random weights.
inline DiscreteMeasure random_measure(RngStream& rng, std::size_t dim,
                                      std::size_t max_atoms) {
  std::size_t n = 1 + rng.next_u64() % max_atoms;
  std::vector<Atom> raw;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> coords;
    for (std::size_t c = 0; c < dim; ++c) coords.push_back(2 * rng.next_double() - 1);
    raw.push_back({Point(std::move(coords)), 0.1 + rng.next_double()});
  }
  return DiscreteMeasure::consolidate(dim, std::move(raw));
}

/// Uniform measure on exactly n distinct random points.
inline DiscreteMeasure random_uniform_measure(RngStream& rng, std::size_t dim,
                                              std::size_t n) {
  std::vector<Atom> raw;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> coords;
    for (std::size_t c = 0; c < dim; ++c) coords.push_back(2 * rng.next_double() - 1);
    raw.push_back({Point(std::move(coords)), 1.0});
  }
  return DiscreteMeasure::consolidate(dim, std::move(raw));
}

/// Random ergodic chain: k states embedded at random points of R^1,
/// rows of uniform draws floored at 0.05 and normalized.
inline MarkovModel random_chain(RngStream& rng, std::size_t k) {
  std::vector<Point> states;
  for (std::size_t i = 0; i < k; ++i) states.push_back(Point{2 * rng.next_double() - 1});
  std::vector<std::vector<double>> kernel(k, std::vector<double>(k));
  for (std::size_t i = 0; i < k; ++i) {
    double total = 0;
    for (std::size_t j = 0; j < k; ++j) {
      kernel[i][j] = 0.05 + rng.next_double();
      total += kernel[i][j];
    }
    for (std::size_t j = 0; j < k; ++j) kernel[i][j] /= total;
  }
  return MarkovModel::create(std::move(states), std::move(kernel));
}

}  // namespace fclt::fixtures
