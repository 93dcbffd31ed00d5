#include "fclt/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "fclt/errors.hpp"
#include "fclt/stats.hpp"
#include "fclt/transport.hpp"

namespace fclt {

namespace {

constexpr double kDegenerateVariance = 1e-12;
// decomposition replications live in a disjoint stream-id space
constexpr std::uint64_t kDecompositionStreamBase = 0x8000000000000000ULL;
constexpr std::size_t kDecompositionReps = 200;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

DiscreteMeasure measure_from_map(std::size_t dim, const std::map<Point, double>& w) {
  std::vector<Atom> atoms;
  for (const auto& [p, weight] : w)
    if (weight > 1e-15) atoms.push_back({p, weight});
  return DiscreteMeasure::consolidate(dim, std::move(atoms));
}

std::size_t resolve_threads(std::size_t requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return std::max(1u, std::min(hw, 16u));
}

}  // namespace

void ExperimentConfig::validate() const {
  if (path_length < 10) throw Error("N must be at least 10");
  if (replications < 100) throw Error("M must be at least 100");
  const Functional& u = catalog_lookup(functional_id);
  if (ell > u.certificate().ell + 1e-12)
    throw Error("family moment order exceeds the functional certificate");
  if (decomposition_trace && n_grid.empty())
    throw Error("decomposition trace requested without an N grid");
}

Prediction predict(const SequenceFamily& family, const Functional& U) {
  Prediction pred;
  if (family.is_markov()) {
    pred.source = "MarkovTheorem";
    pred.mean = 0.0;
    pred.variance = asymptotic_variance_markov(*family.markov_family().model, U);
  } else {
    pred.source = "IndependentTheorem";
    LimitData limit = family.limit_data();
    auto dudm = [&](const Point& x) { return U.derivative(limit.mu, x); };
    pred.mean = limit.sigma.integrate(dudm);
    double second = limit.mu.integrate([&](const Point& x) {
      double v = dudm(x);
      return v * v;
    });
    double cross = limit.eta.integrate(
        [&](const Point& x, const Point& y) { return dudm(x) * dudm(y); });
    pred.variance = second - cross;
  }
  if (pred.variance < -1e-10) throw Error("negative predicted variance");
  pred.variance = std::max(pred.variance, 0.0);

  // variance inequality against the i.i.d. specialization; it is part
  // of the independent theorem only (Markov variances can exceed it)
  if (family.is_independent()) {
    DiscreteMeasure mu = family.limit_measure();
    double mean_d = mu.integrate([&](const Point& x) { return U.derivative(mu, x); });
    double second_d = mu.integrate([&](const Point& x) {
      double v = U.derivative(mu, x);
      return v * v;
    });
    if (pred.variance > second_d - mean_d * mean_d + 1e-9)
      throw Error("predicted variance exceeds the i.i.d. bound");
  }
  return pred;
}

CltReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const Functional& U = catalog_lookup(cfg.functional_id);
  const DiscreteMeasure mu = cfg.family.limit_measure();
  const double u_at_mu = U.evaluate(mu);
  const double sqrt_n = std::sqrt(static_cast<double>(cfg.path_length));

  CltReport report;
  report.predicted = predict(cfg.family, U);
  report.samples.assign(cfg.replications, 0.0);

  const std::size_t n_threads = resolve_threads(cfg.threads);
  auto worker = [&](std::size_t first, std::size_t last) {
    for (std::size_t rep = first; rep < last; ++rep) {
      RngStream rng = RngStream::derive(cfg.master_seed, rep);
      std::vector<Point> path = cfg.family.sample(cfg.path_length, rng);
      DiscreteMeasure mu_n = DiscreteMeasure::empirical(path);
      report.samples[rep] = sqrt_n * (U.evaluate(mu_n) - u_at_mu);
    }
  };
  if (n_threads <= 1) {
    worker(0, cfg.replications);
  } else {
    std::vector<std::thread> pool;
    std::size_t chunk = (cfg.replications + n_threads - 1) / n_threads;
    for (std::size_t t = 0; t < n_threads; ++t) {
      std::size_t first = t * chunk;
      std::size_t last = std::min(cfg.replications, first + chunk);
      if (first >= last) break;
      pool.emplace_back(worker, first, last);
    }
    for (std::thread& th : pool) th.join();
  }

  auto [mean, variance] = sample_moments(report.samples);
  report.empirical_mean = mean;
  report.empirical_variance = variance;

  if (report.predicted.variance <= kDegenerateVariance) {
    report.degenerate = true;
  } else {
    auto [stat, pvalue] =
        ks_test(report.samples, report.predicted.mean, report.predicted.variance);
    report.ks_statistic = stat;
    report.ks_pvalue = pvalue;
  }

  if (cfg.decomposition_trace) {
    for (std::size_t gi = 0; gi < cfg.n_grid.size(); ++gi) {
      const std::size_t n = cfg.n_grid[gi];
      std::vector<double> values(kDecompositionReps);
      auto decomp_worker = [&](std::size_t first, std::size_t last) {
        for (std::size_t rep = first; rep < last; ++rep) {
          RngStream rng = RngStream::derive(
              cfg.master_seed,
              kDecompositionStreamBase + (static_cast<std::uint64_t>(gi) << 32) + rep);
          std::vector<Point> path = cfg.family.sample(n, rng);
          PathDecomposition d = decompose_path(path, cfg.family, U);
          values[rep] = std::sqrt(static_cast<double>(n)) * std::abs(d.r_n);
        }
      };
      if (n_threads <= 1) {
        decomp_worker(0, kDecompositionReps);
      } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (kDecompositionReps + n_threads - 1) / n_threads;
        for (std::size_t t = 0; t < n_threads; ++t) {
          std::size_t first = t * chunk;
          std::size_t last = std::min(kDecompositionReps, first + chunk);
          if (first >= last) break;
          pool.emplace_back(decomp_worker, first, last);
        }
        for (std::thread& th : pool) th.join();
      }
      report.decomposition.push_back({n, median(values)});
    }
  }
  return report;
}

PathDecomposition decompose_path(const std::vector<Point>& path,
                                 const SequenceFamily& family, const Functional& U,
                                 double radius_override) {
  if (path.empty()) throw Error("cannot decompose an empty path");
  const std::size_t n = path.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  const DiscreteMeasure mu = family.limit_measure();
  const std::size_t dim = mu.dim();
  const bool markov = family.is_markov();
  const double ell = family.ell();
  const double radius =
      radius_override > 0 ? radius_override : U.certificate().radius;
  const bool track_exit = std::isfinite(radius);

  // running net weights of mu_N^{i,0}
  std::map<Point, double> weights;
  if (markov) {
    for (const Atom& a : mu.atoms()) weights[a.point] += a.weight;
  } else {
    for (std::size_t i = 1; i <= n; ++i) {
      DiscreteMeasure nu_i = family.marginal(i);
      for (const Atom& a : nu_i.atoms()) weights[a.point] += inv_n * a.weight;
    }
  }
  const DiscreteMeasure base =
      markov ? mu : measure_from_map(dim, weights);  // nu_bar_N for independent

  PathDecomposition out;
  double q = 0;
  bool frozen = false;
  DiscreteMeasure frozen_measure = mu;
  for (std::size_t i = 1; i <= n; ++i) {
    DiscreteMeasure m_i = frozen ? frozen_measure : measure_from_map(dim, weights);
    if (track_exit && !frozen &&
        wasserstein(m_i, mu, std::max(ell, 1e-9)).first >= radius) {
      frozen = true;
      frozen_measure = m_i;
      out.truncated = true;
      m_i = frozen_measure;
    }

    double at_sample = U.derivative(m_i, path[i - 1]);
    double ref_integral;
    if (markov) {
      ref_integral = mu.integrate([&](const Point& x) { return U.derivative(m_i, x); });
    } else {
      ref_integral = family.marginal(i).integrate(
          [&](const Point& x) { return U.derivative(m_i, x); });
    }
    q += inv_n * (at_sample - ref_integral);

    // advance to mu_N^{i+1,0} = mu_N^{i,1}
    weights[path[i - 1]] += inv_n;
    if (markov) {
      for (const Atom& a : mu.atoms()) weights[a.point] -= inv_n * a.weight;
    } else {
      DiscreteMeasure nu_i = family.marginal(i);
      for (const Atom& a : nu_i.atoms()) weights[a.point] -= inv_n * a.weight;
    }
  }
  if (track_exit && !frozen) {
    DiscreteMeasure final_m = measure_from_map(dim, weights);
    if (wasserstein(final_m, mu, std::max(ell, 1e-9)).first >= radius)
      out.truncated = true;
  }

  DiscreteMeasure mu_n = DiscreteMeasure::empirical(path);
  out.q_n = q;
  out.r_n = (U.evaluate(mu_n) - U.evaluate(base)) - q;
  return out;
}

std::string samples_to_csv(const std::vector<double>& samples) {
  std::ostringstream out;
  for (double z : samples) out << format_double(z) << "\n";
  return out.str();
}

std::string report_to_json(const CltReport& report) {
  nlohmann::json j;
  j["schema"] = 1;
  j["predicted"] = {{"mean", report.predicted.mean},
                    {"variance", report.predicted.variance},
                    {"source", report.predicted.source}};
  j["empirical"] = {{"mean", report.empirical_mean},
                    {"variance", report.empirical_variance}};
  j["degenerate"] = report.degenerate;
  if (!report.degenerate)
    j["ks"] = {{"statistic", report.ks_statistic}, {"pvalue", report.ks_pvalue}};
  if (!report.decomposition.empty()) {
    nlohmann::json d = nlohmann::json::array();
    for (const DecompositionPoint& p : report.decomposition)
      d.push_back({p.path_length, p.median_abs_sqrt_n_remainder});
    j["decomposition"] = d;
  }
  return j.dump(2) + "\n";
}

}  // namespace fclt
