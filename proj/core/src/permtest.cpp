#include "kts/permtest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <utility>

#include "kts/error.hpp"
#include "kts/parallel.hpp"
#include "kts/random.hpp"
#include "kts/stats.hpp"

namespace kts {

PooledStatistic::PooledStatistic(Matrix gram, std::size_t nx) : gram_(std::move(gram)), nx_(nx) {
  if (gram_.rows() != gram_.cols()) throw ShapeError("pooled Gram matrix must be square");
  const auto n = static_cast<std::size_t>(gram_.rows());
  if (nx > n) throw ShapeError("nX exceeds the pooled sample size");
  ny_ = n - nx;
  require_estimable(nx_, ny_);
  off_diagonal_row_sums_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    long double s = 0.0L;
    const double* row = gram_.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) s += row[j];
    }
    off_diagonal_row_sums_[i] = s;
    off_diagonal_total_ += s;
  }
}

double PooledStatistic::from_small_group(std::span<const std::size_t> small) const {
  const auto n = static_cast<std::size_t>(gram_.rows());
  // within = sum over ordered pairs i != j in the small group; rows = sum of
  // their off-diagonal pooled row sums. Then the cross sum is rows - within
  // and the large group's within sum is total - within - 2 cross.
  long double within = 0.0L;
  long double rows = 0.0L;
  for (std::size_t a = 0; a < small.size(); ++a) {
    const double* row = gram_.data() + small[a] * n;
    long double s = 0.0L;
    for (std::size_t b = 0; b < a; ++b) s += row[small[b]];
    within += 2.0L * s;
    rows += off_diagonal_row_sums_[small[a]];
  }
  const long double cross = rows - within;
  const long double large_within = off_diagonal_total_ - within - 2.0L * cross;

  const long double ns = static_cast<long double>(small.size());
  const long double nl = static_cast<long double>(n - small.size());
  const long double value = within / (ns * (ns - 1.0L)) + large_within / (nl * (nl - 1.0L)) -
                            2.0L * cross / (ns * nl);
  return static_cast<double>(value);
}

double PooledStatistic::evaluate(std::span<const std::size_t> x_indices) const {
  if (x_indices.size() != nx_) throw ShapeError("index set size must equal nX");
  if (nx_ <= ny_) return from_small_group(x_indices);
  std::vector<char> in_x(nx_ + ny_, 0);
  for (std::size_t i : x_indices) in_x[i] = 1;
  std::vector<std::size_t> y;
  y.reserve(ny_);
  for (std::size_t i = 0; i < in_x.size(); ++i) {
    if (!in_x[i]) y.push_back(i);
  }
  return from_small_group(y);
}

double PooledStatistic::evaluate_complement(std::span<const std::size_t> y_indices) const {
  if (y_indices.size() != ny_) throw ShapeError("index set size must equal nY");
  if (ny_ <= nx_) return from_small_group(y_indices);
  std::vector<char> in_y(nx_ + ny_, 0);
  for (std::size_t i : y_indices) in_y[i] = 1;
  std::vector<std::size_t> x;
  x.reserve(nx_);
  for (std::size_t i = 0; i < in_y.size(); ++i) {
    if (!in_y[i]) x.push_back(i);
  }
  return from_small_group(x);
}

TestResult permutation_test(const SampleSet& samples, const KernelSpec& spec, double alpha,
                            std::size_t permutations, std::uint64_t seed, std::size_t threads) {
  require_estimable(samples.nx(), samples.ny());
  if (permutations == 0) throw ParameterError("number of permutations must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");

  const std::size_t nx = samples.nx();
  const std::size_t ny = samples.ny();
  const std::size_t n = nx + ny;
  const PooledStatistic stat(pooled_gram(spec, samples, threads), nx);
  const std::size_t small = std::min(nx, ny);
  const bool small_is_x = nx <= ny;

  std::vector<std::size_t> observed(small);
  std::iota(observed.begin(), observed.end(), small_is_x ? std::size_t{0} : nx);
  const double t_obs = small_is_x ? stat.evaluate(observed) : stat.evaluate_complement(observed);

  std::vector<double> permuted(permutations);
  const std::size_t workers = std::min(resolve_threads(threads), permutations);
  const std::size_t chunk = (permutations + workers - 1) / workers;
  parallel_for(workers, workers, [&](std::size_t w) {
    std::vector<std::size_t> index(n);
    const std::size_t end = std::min(permutations, (w + 1) * chunk);
    for (std::size_t b = w * chunk; b < end; ++b) {
      std::iota(index.begin(), index.end(), std::size_t{0});
      Rng rng = make_rng(seed, b);
      // Partial Fisher-Yates: the first `small` slots are a uniform subset.
      for (std::size_t i = 0; i < small; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(index[i], index[pick(rng)]);
      }
      const std::span<const std::size_t> group(index.data(), small);
      permuted[b] = small_is_x ? stat.evaluate(group) : stat.evaluate_complement(group);
    }
  });

  const auto exceed = static_cast<std::size_t>(
      std::count_if(permuted.begin(), permuted.end(), [t_obs](double t) { return t >= t_obs; }));

  TestResult r;
  r.statistic = t_obs;
  r.p_value = static_cast<double>(1 + exceed) / static_cast<double>(1 + permutations);
  r.threshold = upper_quantile(std::move(permuted), alpha);
  r.reject = r.p_value <= alpha;
  r.alpha = alpha;
  r.num_permutations = permutations;
  r.seed = seed;
  r.nx = nx;
  r.ny = ny;
  return r;
}

std::vector<double> simulate_p_values(const SimulationConfig& config, std::size_t nx, std::size_t threads) {
  if (config.reps == 0) throw ParameterError("reps must be positive");
  std::vector<double> out(config.reps);
  const std::uint64_t point_seed = derive_seed(config.seed, nx);
  parallel_for(config.reps, threads, [&](std::size_t r) {
    const SampleSet s = draw_samples(config.p, config.q, nx, config.ny, point_seed, r);
    const std::uint64_t test_seed = derive_seed(point_seed, config.reps + r);
    out[r] = permutation_test(s, config.kernel, config.alpha, config.permutations, test_seed, 1).p_value;
  });
  return out;
}

std::vector<RatePoint> rejection_rate(const SimulationConfig& config, std::size_t threads) {
  if (config.reps == 0) throw ParameterError("reps must be positive");
  if (config.nx_sweep.empty()) throw ParameterError("nX sweep must be non-empty");
  std::vector<RatePoint> curve;
  for (std::size_t nx : config.nx_sweep) {
    const std::vector<double> p = simulate_p_values(config, nx, threads);
    const auto rejected =
        std::count_if(p.begin(), p.end(), [&](double v) { return v <= config.alpha; });
    const double reps = static_cast<double>(config.reps);
    const double rate = static_cast<double>(rejected) / reps;
    curve.push_back({nx, rate, std::sqrt(rate * (1.0 - rate) / reps)});
  }
  return curve;
}

}  // namespace kts
