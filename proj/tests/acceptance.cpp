// End-to-end acceptance checks. Each criterion prints a single
// pass/fail line; the process exits nonzero when any fails. argv[1]
// is the path of the command-line binary (used by the determinism
// criterion).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "fclt/config.hpp"
#include "fclt/harness.hpp"
#include "fclt/markov.hpp"
#include "fclt/stats.hpp"
#include "fclt/transport.hpp"
#include "fixtures.hpp"

using namespace fclt;
using namespace fclt::fixtures;

namespace {

bool g_all_pass = true;

void report(int idx, bool pass, const std::string& what, double seconds) {
  g_all_pass = g_all_pass && pass;
  std::printf("criterion %2d: %s - %s (%.1fs)\n", idx, pass ? "PASS" : "FAIL",
              what.c_str(), seconds);
  std::fflush(stdout);
}

template <class F>
void run(int idx, const std::string& what, F&& body) {
  auto t0 = std::chrono::steady_clock::now();
  bool pass = false;
  std::string note;
  try {
    pass = body();
  } catch (const std::exception& e) {
    note = std::string(" [exception: ") + e.what() + "]";
  }
  double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(idx, pass, what + note, seconds);
}

double brute_force_uniform(const DiscreteMeasure& m1, const DiscreteMeasure& m2,
                           double ell) {
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

struct CltThresholds {
  bool variance_ok = false;
  bool mean_ok = false;
  bool ks_ok = false;
  bool all() const { return variance_ok && mean_ok && ks_ok; }
};

CltThresholds check_clt(const CltReport& r, std::size_t m_reps) {
  CltThresholds t;
  t.variance_ok = std::abs(r.empirical_variance - r.predicted.variance) <=
                  0.10 * r.predicted.variance;
  t.mean_ok = std::abs(r.empirical_mean - r.predicted.mean) <=
              4.0 * std::sqrt(r.predicted.variance / static_cast<double>(m_reps));
  t.ks_ok = !r.degenerate && r.ks_pvalue > 0.01;
  return t;
}

std::string read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

constexpr std::size_t kN = 10000;
constexpr std::size_t kM = 10000;
constexpr std::uint64_t kSeed = 20260826;

}  // namespace

int main(int argc, char** argv) {
  const std::string cli_path = argc > 1 ? argv[1] : "";

  run(1, "exact transport matches permutation enumeration", [] {
    RngStream rng = RngStream::derive(kSeed, 101);
    for (int trial = 0; trial < 50; ++trial) {
      std::size_t dim = 1 + rng.next_u64() % 2;
      std::size_t n = 2 + rng.next_u64() % 5;  // up to 6 atoms
      double ell = 1.0 + static_cast<double>(rng.next_u64() % 2);
      DiscreteMeasure m1 = random_uniform_measure(rng, dim, n);
      DiscreteMeasure m2 = random_uniform_measure(rng, dim, n);
      double oracle = brute_force_uniform(m1, m2, ell);
      if (std::abs(wasserstein_general(m1, m2, ell).first - oracle) > 1e-9) return false;
      if (std::abs(wasserstein(m1, m2, ell).first - oracle) > 1e-9) return false;
    }
    return true;
  });

  run(2, "functional derivative identity residual <= 1e-12", [] {
    RngStream rng = RngStream::derive(kSeed, 102);
    for (int trial = 0; trial < 100; ++trial) {
      DiscreteMeasure m = random_measure(rng, 1, 5);
      DiscreteMeasure mp = random_measure(rng, 1, 5);
      if (catalog_lookup("linear:identity").finite_difference_identity_residual(m, mp, 1) > 1e-12)
        return false;
      if (catalog_lookup("ustat2:variance").finite_difference_identity_residual(m, mp, 2) > 1e-12)
        return false;
      if (catalog_lookup("ustat3:product").finite_difference_identity_residual(m, mp, 3) > 1e-12)
        return false;
    }
    return true;
  });

  run(3, "poisson solvers agree and match the covariance series", [] {
    RngStream rng = RngStream::derive(kSeed, 103);
    for (int trial = 0; trial < 20; ++trial) {
      MarkovModel model = random_chain(rng, 2 + rng.next_u64() % 9);
      std::vector<double> f;
      for (std::size_t i = 0; i < model.state_count(); ++i)
        f.push_back(2 * rng.next_double() - 1);
      PoissonSolution direct = solve_poisson_direct(model, f);
      PoissonSolution neumann = solve_poisson_neumann(model, f, 1e-13);
      for (std::size_t i = 0; i < f.size(); ++i)
        if (std::abs(direct.F[i] - neumann.F[i]) > 1e-9) return false;
      if (direct.residual > 1e-10) return false;
      if (std::abs(direct.variance - covariance_series_variance(model, f, 500)) > 1e-6)
        return false;
    }
    return true;
  });

  run(4, "d_{V,beta} contracts at rate chi over 30 steps", [] {
    auto model = two_state_model();
    LyapunovCertificate cert =
        verify_lyapunov(*model, {0.0, 1.0}, 0.85, 0.31, 5.0, 0.5,
                        LyapunovCertificate::Variant::L2, 2.0);
    auto V = [](const Point& x) { return x[0]; };
    RngStream rng = RngStream::derive(kSeed, 104);
    for (double frac : {0.25, 0.5, 0.9}) {
      double beta = frac * cert.beta_max;
      double chi = cert.contraction_factor(beta);
      if (!(chi > 0 && chi < 1)) return false;
      for (int trial = 0; trial < 20; ++trial) {
        double s0 = rng.next_double();
        std::vector<double> sigma = {s0, 1 - s0};
        double base = d_v_beta(model->weights_as_measure(sigma),
                               model->invariant_measure(), V, beta);
        for (std::size_t n = 1; n <= 30; ++n) {
          double dist =
              d_v_beta(model->weights_as_measure(model->push_forward(sigma, n)),
                       model->invariant_measure(), V, beta);
          if (dist > std::pow(chi, static_cast<double>(n)) * base + 1e-12) return false;
        }
      }
    }
    return true;
  });

  run(5, "markov clt: variance, mean and ks thresholds", [] {
    ExperimentConfig linear{two_state_family(2.0), "linear:identity", kN, kM,
                            kSeed, 2.0, 0, false, {}};
    CltReport lr = run_experiment(linear);
    CltThresholds lt = check_clt(lr, kM);
    ExperimentConfig ustat{two_state_family(6.0), "ustat2:variance", kN, kM,
                           kSeed + 1, 6.0, 0, false, {}};
    CltReport ur = run_experiment(ustat);
    CltThresholds ut = check_clt(ur, kM);
    if (!(lt.all() && ut.all())) {
      auto detail = [](const char* name, const CltReport& r,
                       const CltThresholds& t) {
        std::printf(
            "    %s: mean %+.5f (%s, window %.5f) variance %.5f (%s, predicted "
            "%.5f) ks p %.5f (%s)\n",
            name, r.empirical_mean, t.mean_ok ? "ok" : "out",
            4.0 * std::sqrt(r.predicted.variance / static_cast<double>(kM)),
            r.empirical_variance, t.variance_ok ? "ok" : "out",
            r.predicted.variance, r.ks_pvalue, t.ks_ok ? "ok" : "out");
      };
      detail("linear", lr, lt);
      detail("variance u-statistic", ur, ut);
      // the variance functional of the occupation measure has the exact
      // finite-N expectation 0.24 - Var(mean occupation), so Z carries a
      // deterministic offset -0.72/sqrt(N) = -0.0072 at N=10^4, slightly
      // outside the 4-standard-error window 0.00679; see README
      std::printf(
          "    (the u-statistic offset is the deterministic finite-N bias "
          "-0.72/sqrt(N); it exceeds the mean window for ~90%% of seeds)\n");
    }
    return lt.all() && ut.all();
  });

  run(6, "independent clt: cyclic families and the variance inequality", [] {
    // the two-point cyclic family is fully deterministic: prediction and
    // every sample are exactly zero
    ExperimentConfig flat{cyclic2_family(6.0), "ustat2:variance", kN, kM,
                          kSeed + 2, 6.0, 0, false, {}};
    CltReport degenerate = run_experiment(flat);
    if (!degenerate.degenerate) return false;
    if (std::abs(degenerate.predicted.variance) > 1e-14) return false;
    if (std::abs(degenerate.empirical_mean) > 1e-10) return false;
    if (std::abs(degenerate.empirical_variance) > 1e-10) return false;

    ExperimentConfig cyc{cyclic3_family(6.0), "ustat2:variance", kN, kM,
                         kSeed + 3, 6.0, 0, false, {}};
    CltReport r = run_experiment(cyc);
    // Remark 2: cyclic variance below the i.i.d. specialization
    DiscreteMeasure mu = cyc.family.limit_measure();
    const Functional& U = catalog_lookup("ustat2:variance");
    double mean_d = mu.integrate([&](const Point& x) { return U.derivative(mu, x); });
    double second_d = mu.integrate([&](const Point& x) {
      double v = U.derivative(mu, x);
      return v * v;
    });
    if (r.predicted.variance > second_d - mean_d * mean_d + 1e-12) return false;
    return check_clt(r, kM).all();
  });

  run(7, "sqrt-perturbed drift: sigma = 2 tau and the nonzero mean", [] {
    SequenceFamily fam = sqrt_perturbed_family(2.0);
    LimitData limit = fam.limit_data();
    SignedDiscreteMeasure drift =
        SignedDiscreteMeasure::difference(fam.average_marginal(kN), limit.mu)
            .scaled(std::sqrt(static_cast<double>(kN)));
    if (drift.plus(limit.sigma.scaled(-1.0)).norm_ell(2.0) > 0.05) return false;

    ExperimentConfig cfg{fam, "linear:identity", kN, kM, kSeed + 4, 2.0, 0, false, {}};
    CltReport r = run_experiment(cfg);
    double target = limit.sigma.integrate([](const Point& x) { return x[0]; });
    double se = std::sqrt(r.predicted.variance / static_cast<double>(kM));
    return std::abs(r.empirical_mean - target) <= 4.0 * se;
  });

  run(8, "sqrt(N) remainder decays in both regimes; linear is exact", [] {
    const Functional& U = catalog_lookup("ustat2:variance");
    const std::vector<std::size_t> grid = {250, 500, 1000, 2000, 4000};
    int family_index = 0;
    for (const SequenceFamily& fam : {iid_family(6.0), two_state_family(6.0)}) {
      std::vector<double> logs_n, logs_med;
      double prev = std::numeric_limits<double>::infinity();
      for (std::size_t n : grid) {
        std::vector<double> vals;
        for (std::uint64_t rep = 0; rep < 200; ++rep) {
          RngStream rng =
              RngStream::derive(kSeed + 5, (static_cast<std::uint64_t>(family_index) << 32) + rep);
          std::vector<Point> path = fam.sample(n, rng);
          vals.push_back(std::sqrt(static_cast<double>(n)) *
                         std::abs(decompose_path(path, fam, U).r_n));
        }
        double med = median(vals);
        if (med >= prev) return false;  // strictly decreasing medians
        prev = med;
        logs_n.push_back(std::log(static_cast<double>(n)));
        logs_med.push_back(std::log(med));
      }
      double slope = fit_slope(logs_n, logs_med);
      if (slope < -0.8 || slope > -0.2) return false;
      ++family_index;
    }
    // linear functionals linearize exactly
    const Functional& L = catalog_lookup("linear:identity");
    for (const SequenceFamily& fam : {iid_family(2.0), two_state_family(2.0)}) {
      RngStream rng = RngStream::derive(kSeed + 6, 0);
      std::vector<Point> path = fam.sample(1000, rng);
      if (std::abs(decompose_path(path, fam, L).r_n) > 1e-12) return false;
    }
    return true;
  });

  run(9, "empirical measures reach the limit: W_1 < 0.05 at N=1e5", [] {
    std::uint64_t stream = 0;
    for (const SequenceFamily& fam :
         {iid_family(2.0), cyclic3_family(2.0), decaying_family(2.0),
          sqrt_perturbed_family(2.0), two_state_family(2.0)}) {
      RngStream rng = RngStream::derive(kSeed + 7, stream++);
      DiscreteMeasure mu_n = DiscreteMeasure::empirical(fam.sample(100000, rng));
      if (wasserstein(mu_n, fam.limit_measure(), 1.0).first >= 0.05) return false;
    }
    // a chain started far from equilibrium still converges
    auto model = two_state_model();
    SequenceFamily cold =
        SequenceFamily::markov(model, {1.0, 0.0}, 2.0);
    RngStream rng = RngStream::derive(kSeed + 7, stream);
    DiscreteMeasure mu_n = DiscreteMeasure::empirical(cold.sample(100000, rng));
    return wasserstein(mu_n, model->invariant_measure(), 1.0).first < 0.05;
  });

  run(10, "cli reruns are byte-identical", [&cli_path] {
    if (cli_path.empty()) return false;
    namespace fs = std::filesystem;
    fs::path work = fs::temp_directory_path() / "fclt_acceptance";
    fs::remove_all(work);
    fs::create_directories(work);

    const std::string markov_cfg = R"({
      "family": {"kind": "markov",
                 "model": {"states": [[0.0], [1.0]],
                           "kernel": [[0.7, 0.3], [0.2, 0.8]]}},
      "functional": {"id": "linear:identity"},
      "run": {"N": 500, "M": 200, "master_seed": 77, "ell": 2.0}
    })";
    const std::string cyclic_cfg = R"({
      "family": {"kind": "cyclic",
                 "thetas": [{"dim": 1, "atoms": [[0.5, 0.0], [0.5, 1.0]]},
                            {"dim": 1, "atoms": [[0.5, 1.0], [0.5, 2.0]]},
                            {"dim": 1, "atoms": [[0.5, 0.0], [0.5, 2.0]]}]},
      "functional": {"id": "ustat2:variance"},
      "run": {"N": 500, "M": 200, "master_seed": 78, "ell": 6.0,
              "decomposition_trace": true, "N_grid": [100, 200]}
    })";

    int cfg_index = 0;
    for (const std::string& cfg : {markov_cfg, cyclic_cfg}) {
      fs::path cfg_path = work / ("config" + std::to_string(cfg_index) + ".json");
      std::ofstream(cfg_path) << cfg;
      fs::path out_a = work / ("a" + std::to_string(cfg_index));
      fs::path out_b = work / ("b" + std::to_string(cfg_index));
      for (const fs::path& out : {out_a, out_b}) {
        std::string cmd = cli_path + " clt-run --config " + cfg_path.string() +
                          " --out " + out.string();
        if (std::system(cmd.c_str()) != 0) return false;
      }
      for (const char* name : {"samples.csv", "report.json"}) {
        std::string a = read_bytes(out_a / name);
        if (a.empty() || a != read_bytes(out_b / name)) return false;
      }
      ++cfg_index;
    }
    return true;
  });

  std::printf("%s\n", g_all_pass ? "ACCEPTANCE: ALL PASS" : "ACCEPTANCE: FAILURES");
  return g_all_pass ? 0 : 1;
}
