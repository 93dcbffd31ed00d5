#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "fclt/errors.hpp"
#include "fclt/transport.hpp"
#include "fixtures.hpp"

using namespace fclt;
using fixtures::measure1d;
using fixtures::random_measure;
using fixtures::random_uniform_measure;

namespace {

// Minimum mean assignment cost over all permutations; valid for uniform
// measures with equal atom counts (Birkhoff: extreme points of the
// doubly stochastic polytope are permutation matrices).
double brute_force_uniform(const DiscreteMeasure& m1, const DiscreteMeasure& m2,
                           double ell) {
  REQUIRE(m1.size() == m2.size());
  std::vector<std::size_t> perm(m1.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double cost = 0;
    for (std::size_t i = 0; i < perm.size(); ++i)
      cost += std::pow(distance(m1.atoms()[i].point, m2.atoms()[perm[i]].point), ell);
    best = std::min(best, cost / static_cast<double>(perm.size()));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::pow(best, 1.0 / std::max(ell, 1.0));
}

}  // namespace

TEST_CASE("identical measures are at distance zero") {
  DiscreteMeasure m = measure1d({{0.3, -1.0}, {0.7, 2.5}});
  CHECK(wasserstein(m, m, 2.0).first == 0.0);
  CHECK(wasserstein0(m, m) == 0.0);
}

TEST_CASE("two diracs") {
  DiscreteMeasure a = DiscreteMeasure::dirac(Point{-1.0});
  DiscreteMeasure b = DiscreteMeasure::dirac(Point{3.0});
  CHECK(wasserstein(a, b, 1.0).first == doctest::Approx(4.0));
  CHECK(wasserstein(a, b, 2.0).first == doctest::Approx(4.0));
  CHECK(wasserstein(a, b, 3.0).first == doctest::Approx(4.0));
  CHECK(wasserstein0(a, b) == doctest::Approx(1.0));  // cost capped at 1
}

TEST_CASE("simplex matches permutation enumeration on uniform pairs") {
  RngStream rng = RngStream::derive(11, 0);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t dim = 1 + rng.next_u64() % 2;
    std::size_t n = 2 + rng.next_u64() % 4;
    double ell = 1.0 + static_cast<double>(rng.next_u64() % 2);
    DiscreteMeasure m1 = random_uniform_measure(rng, dim, n);
    DiscreteMeasure m2 = random_uniform_measure(rng, dim, n);
    double oracle = brute_force_uniform(m1, m2, ell);
    auto [dist, plan] = wasserstein_general(m1, m2, ell);
    CHECK(dist == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(plan.feasibility_residual(m1, m2) < 1e-12);
  }
}

TEST_CASE("1d fast path agrees with the general solver") {
  RngStream rng = RngStream::derive(12, 0);
  for (int trial = 0; trial < 20; ++trial) {
    DiscreteMeasure m1 = random_measure(rng, 1, 5);
    DiscreteMeasure m2 = random_measure(rng, 1, 5);
    for (double ell : {1.0, 2.0, 6.0}) {
      double fast = wasserstein(m1, m2, ell).first;
      double general = wasserstein_general(m1, m2, ell).first;
      CHECK(fast == doctest::Approx(general).epsilon(1e-9));
    }
  }
}

TEST_CASE("metric properties on random triples") {
  RngStream rng = RngStream::derive(13, 0);
  for (int trial = 0; trial < 10; ++trial) {
    DiscreteMeasure a = random_measure(rng, 2, 4);
    DiscreteMeasure b = random_measure(rng, 2, 4);
    DiscreteMeasure c = random_measure(rng, 2, 4);
    for (double ell : {1.0, 2.0}) {
      double ab = wasserstein(a, b, ell).first;
      double ba = wasserstein(b, a, ell).first;
      double ac = wasserstein(a, c, ell).first;
      double cb = wasserstein(c, b, ell).first;
      CHECK(ab == doctest::Approx(ba).epsilon(1e-10));
      CHECK(ab <= ac + cb + 1e-10);
      CHECK(ab >= 0.0);
    }
    double w0 = wasserstein0(a, b);
    CHECK(w0 <= two_total_variation(a, b) + 1e-12);
    CHECK(w0 <= wasserstein(a, b, 1.0).first + 1e-12);
  }
}

TEST_CASE("mixture interpolation shrinks distance") {
  RngStream rng = RngStream::derive(14, 0);
  DiscreteMeasure a = random_measure(rng, 1, 4);
  DiscreteMeasure b = random_measure(rng, 1, 4);
  double full = wasserstein(a, b, 2.0).first;
  double prev = full;
  for (double s : {0.75, 0.5, 0.25}) {
    double part = wasserstein(DiscreteMeasure::mixture(s, a, b), b, 2.0).first;
    CHECK(part <= prev + 1e-10);
    prev = part;
  }
}

TEST_CASE("product measure distance via flattening") {
  DiscreteMeasure m1 = measure1d({{0.5, 0.0}, {0.5, 1.0}});
  DiscreteMeasure m2 = measure1d({{0.5, 0.0}, {0.5, 2.0}});
  ProductMeasure2d p1 = ProductMeasure2d::tensor(m1, m1);
  ProductMeasure2d p2 = ProductMeasure2d::tensor(m1, m2);
  CHECK(product_wasserstein(p1, p1, 2.0) == 0.0);
  CHECK(product_wasserstein(p1, p2, 1.0) > 0.0);
}

TEST_CASE("d_V_beta hand oracle") {
  DiscreteMeasure theta = measure1d({{0.5, 0.0}, {0.5, 1.0}});
  DiscreteMeasure sigma = measure1d({{0.25, 0.0}, {0.75, 1.0}});
  auto V = [](const Point& x) { return x[0]; };  // V(0)=0, V(1)=1
  // |0.5-0.25|(1+0) + |0.5-0.75|(1+2*1)
  CHECK(d_v_beta(theta, sigma, V, 2.0) == doctest::Approx(0.25 + 0.25 * 3.0));
  CHECK(d_v_beta(theta, theta, V, 2.0) == 0.0);
}

TEST_CASE("support bound enforced") {
  std::vector<Atom> raw;
  for (int i = 0; i < 2049; ++i)
    raw.push_back({Point{static_cast<double>(i), 0.5}, 1.0});
  DiscreteMeasure big = DiscreteMeasure::consolidate(2, std::move(raw));
  DiscreteMeasure target = DiscreteMeasure::dirac(Point{0.0, 0.0});
  CHECK_THROWS_AS(wasserstein(big, target, 2.0), ExactSolverLimitError);
}
