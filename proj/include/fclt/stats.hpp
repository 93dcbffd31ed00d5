#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace fclt {

/// Standard normal CDF via the complementary error function
/// (absolute error well below 1e-7).
double normal_cdf(double z);

/// One-sample Kolmogorov-Smirnov statistic of the samples against
/// Normal(mean, variance), with the asymptotic Kolmogorov p-value
/// (series truncated at 100 terms). Throws DegenerateError when
/// variance <= 0 or fewer than 100 samples.
std::pair<double, double> ks_test(const std::vector<double>& samples, double mean,
                                  double variance);

/// Mean and (population) variance of a sample.
std::pair<double, double> sample_moments(const std::vector<double>& samples);

/// Median (averaged middle pair for even sizes).
double median(std::vector<double> values);

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace fclt
