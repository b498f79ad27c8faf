#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace kts {

double normal_cdf(double x);
double normal_quantile(double p);

double mean_of(std::span<const double> values);
// Unbiased (n - 1) sample variance.
double sample_variance(std::span<const double> values);

// 1-based order statistic at index ceil((1 - alpha) n), clamped to [1, n].
// `values` need not be sorted.
double upper_quantile(std::vector<double> values, double alpha);

// sup_t |F_a(t) - F_b(t)| between two empirical distributions.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

// sup_t |F_emp(t) - cdf(t)|.
double ks_one_sample(std::vector<double> values, const std::function<double(double)>& cdf);

// sup_t (F_emp(t) - t) for values in [0, 1]: how far the sample sits above
// the uniform CDF. Small for super-uniform p-values.
double ks_excess_over_uniform(std::vector<double> values);

// Empirical quantiles of `empirical` and `reference` at levels (i - 0.5)/count,
// i = 1..count, paired for Q-Q plotting.
std::vector<std::pair<double, double>> qq_pairs(std::vector<double> empirical, std::vector<double> reference,
                                                std::size_t count);

// Quantile at level p in [0, 1] of sorted data by linear interpolation.
double interpolated_quantile(std::span<const double> sorted, double p);

}  // namespace kts
