#include "kts/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/normal.hpp>

#include "kts/error.hpp"

namespace kts {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ParameterError("normal quantile: p must lie in (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double mean_of(std::span<const double> values) {
  if (values.empty()) throw ParameterError("mean of an empty sequence");
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

double sample_variance(std::span<const double> values) {
  if (values.size() < 2) throw ParameterError("sample variance needs at least two values");
  const double m = mean_of(values);
  double s = 0.0;
  for (double v : values) s += (v - m) * (v - m);
  return s / static_cast<double>(values.size() - 1);
}

double upper_quantile(std::vector<double> values, double alpha) {
  if (values.empty()) throw ParameterError("quantile of an empty sequence");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");
  const auto n = static_cast<double>(values.size());
  auto k = static_cast<std::size_t>(std::ceil((1.0 - alpha) * n - 1e-9));
  k = std::clamp<std::size_t>(k, 1, values.size());
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k - 1), values.end());
  return values[k - 1];
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw ParameterError("KS distance needs non-empty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double t = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= t) ++i;
    while (j < b.size() && b[j] <= t) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_one_sample(std::vector<double> values, const std::function<double(double)>& cdf) {
  if (values.empty()) throw ParameterError("KS distance needs a non-empty sample");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = cdf(values[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_excess_over_uniform(std::vector<double> values) {
  if (values.empty()) throw ParameterError("KS distance needs a non-empty sample");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    // Right-continuous ECDF: count of values <= values[i].
    std::size_t k = i + 1;
    while (k < values.size() && values[k] == values[i]) ++k;
    d = std::max(d, static_cast<double>(k) / n - values[i]);
  }
  return d;
}

double interpolated_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw ParameterError("quantile of an empty sequence");
  const double pos = std::clamp(p, 0.0, 1.0) * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::vector<std::pair<double, double>> qq_pairs(std::vector<double> empirical, std::vector<double> reference,
                                                std::size_t count) {
  if (count == 0) throw ParameterError("qq_pairs: count must be positive");
  std::sort(empirical.begin(), empirical.end());
  std::sort(reference.begin(), reference.end());
  std::vector<std::pair<double, double>> out;
  out.reserve(count);
  for (std::size_t i = 1; i <= count; ++i) {
    const double p = (static_cast<double>(i) - 0.5) / static_cast<double>(count);
    out.emplace_back(interpolated_quantile(empirical, p), interpolated_quantile(reference, p));
  }
  return out;
}

}  // namespace kts
