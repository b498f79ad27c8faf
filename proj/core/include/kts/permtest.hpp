#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "kts/kernels.hpp"
#include "kts/samples.hpp"
#include "kts/simulation.hpp"

namespace kts {

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  double threshold = 0.0;
  bool reject = false;
  double alpha = 0.05;
  std::size_t num_permutations = 0;
  std::uint64_t seed = 0;
  std::size_t nx = 0;
  std::size_t ny = 0;
};

// mmd_unbiased for an arbitrary relabeling of a pooled Gram matrix, given the
// indices of the X group. Evaluates only sums over the smaller group, using
// precomputed pooled row sums; accumulates in extended precision.
class PooledStatistic {
 public:
  PooledStatistic(Matrix gram, std::size_t nx);

  std::size_t nx() const noexcept { return nx_; }
  std::size_t ny() const noexcept { return ny_; }
  const Matrix& gram() const noexcept { return gram_; }

  // `x_indices` has exactly nX distinct entries in [0, nX + nY).
  double evaluate(std::span<const std::size_t> x_indices) const;

  // Same as evaluate but takes the indices of the Y group.
  double evaluate_complement(std::span<const std::size_t> y_indices) const;

 private:
  double from_small_group(std::span<const std::size_t> small) const;

  Matrix gram_;
  std::size_t nx_;
  std::size_t ny_;
  std::vector<long double> off_diagonal_row_sums_;
  long double off_diagonal_total_ = 0.0L;
};

inline constexpr std::size_t kDefaultPermutations = 200;

// Permutation test with p = (1 + #{T_b >= T_obs}) / (1 + B); threshold is the
// order statistic ceil((1 - alpha) B) of the permuted values. Each
// permutation draws from the stream (seed, b), so the result does not depend
// on `threads`.
TestResult permutation_test(const SampleSet& samples, const KernelSpec& spec, double alpha,
                            std::size_t permutations, std::uint64_t seed, std::size_t threads = 1);

struct SimulationConfig {
  Sampler p = Sampler::normal(0.0, 1.0);
  Sampler q = Sampler::normal(0.0, 1.0);
  KernelSpec kernel = KernelSpec::gaussian(1.0);
  std::vector<std::size_t> nx_sweep{50, 100, 200, 400, 800};
  std::size_t ny = 50;
  double alpha = 0.05;
  std::size_t permutations = kDefaultPermutations;
  std::size_t reps = 2000;
  std::uint64_t seed = 0;
};

struct RatePoint {
  std::size_t nx = 0;
  double rate = 0.0;
  double std_error = 0.0;
};

// For each nX, runs `reps` tests on fresh draws and reports the rejection
// frequency with its binomial standard error sqrt(r (1 - r) / reps).
// Replications run in parallel; each uses data stream (seed, nX, rep).
std::vector<RatePoint> rejection_rate(const SimulationConfig& config, std::size_t threads = 1);

// Per-replication p-values for one sweep point; the input to rejection_rate.
std::vector<double> simulate_p_values(const SimulationConfig& config, std::size_t nx, std::size_t threads = 1);

}  // namespace kts
