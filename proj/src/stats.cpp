#include "fclt/stats.hpp"

#include <algorithm>
#include <cmath>

#include "fclt/errors.hpp"

namespace fclt {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

namespace {

/// P(K > lambda) by the alternating Kolmogorov series.
double kolmogorov_survival(double lambda) {
  if (lambda <= 0) return 1.0;
  double sum = 0;
  for (int k = 1; k <= 100; ++k) {
    double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace

std::pair<double, double> ks_test(const std::vector<double>& samples, double mean,
                                  double variance) {
  if (variance <= 0) throw DegenerateError("KS test against a degenerate normal");
  if (samples.size() < 100) throw DegenerateError("KS test needs at least 100 samples");
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  const double sd = std::sqrt(variance);
  double d = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    double cdf = normal_cdf((sorted[i] - mean) / sd);
    double lo = static_cast<double>(i) / n;
    double hi = static_cast<double>(i + 1) / n;
    d = std::max({d, std::abs(cdf - lo), std::abs(cdf - hi)});
  }
  // Stephens' small-sample adjustment of the asymptotic distribution
  double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
  return {d, kolmogorov_survival(lambda)};
}

std::pair<double, double> sample_moments(const std::vector<double>& samples) {
  if (samples.empty()) throw Error("moments of an empty sample");
  double mean = 0;
  for (double v : samples) mean += v;
  mean /= static_cast<double>(samples.size());
  double var = 0;
  for (double v : samples) var += (v - mean) * (v - mean);
  var /= static_cast<double>(samples.size());
  return {mean, var};
}

double median(std::vector<double> values) {
  if (values.empty()) throw Error("median of an empty sample");
  std::sort(values.begin(), values.end());
  std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error("slope fit needs paired data");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double num = 0, den = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  return num / den;
}

}  // namespace fclt
