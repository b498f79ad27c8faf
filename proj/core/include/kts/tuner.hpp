#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kts/kernels.hpp"
#include "kts/samples.hpp"

namespace kts {

inline constexpr double kDefaultLambdaReg = 1e-8;
inline constexpr double kDefaultTrainFraction = 0.5;
inline constexpr std::size_t kDefaultRefineSteps = 12;

struct TuneConfig {
  KernelFamily family = KernelFamily::gaussian;
  // Candidate values per parameter, sorted ascending. Parameterless families
  // take an empty map.
  std::map<std::string, std::vector<double>> param_grid;
  double lambda_reg = kDefaultLambdaReg;
  std::size_t refine_steps = kDefaultRefineSteps;
  double train_fraction = kDefaultTrainFraction;
  std::uint64_t seed = 0;
  // Sample sizes used for rho_X, rho_Y in sigma_hat. Unset means the sizes of
  // the training split itself.
  std::optional<std::pair<std::size_t, std::size_t>> sigma_sizes;
};

struct TraceEntry {
  KernelSpec spec;
  double objective = 0.0;
};

struct TuneResult {
  KernelSpec best_spec;
  double objective = 0.0;
  std::vector<TraceEntry> trace;
};

// count values log-spaced between lo and hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t count);

// Gaussian family over log_grid(1e-2, 1e3, 16).
TuneConfig default_tune_config();

// mmd_unbiased / (sigma_hat + lambda_reg), with rho computed from
// `sigma_sizes` when given, otherwise from the sample sizes.
double snr_objective(const SampleSet& samples, const KernelSpec& spec, double lambda_reg,
                     std::optional<std::pair<std::size_t, std::size_t>> sigma_sizes = std::nullopt);

// The two halves of a train/test split. Distinct types so that code which
// tunes cannot be handed held-out data and vice versa.
class TrainingSet {
 public:
  explicit TrainingSet(SampleSet samples) : samples_(std::move(samples)) {}
  const SampleSet& samples() const noexcept { return samples_; }

 private:
  SampleSet samples_;
};

class HeldOutSet {
 public:
  explicit HeldOutSet(SampleSet samples) : samples_(std::move(samples)) {}
  const SampleSet& samples() const noexcept { return samples_; }

 private:
  SampleSet samples_;
};

struct SplitIndices {
  std::vector<std::size_t> train_x, test_x, train_y, test_y;
};

struct Split {
  TrainingSet train;
  HeldOutSet test;
  SplitIndices indices;
};

// Shuffles each group with stream (seed, group) and puts the first
// round(fraction * n) rows in the training half. Throws ParameterError unless
// both halves keep >= 2 rows per group.
Split split_samples(const SampleSet& samples, double train_fraction, std::uint64_t seed);

// Grid search, then refine_steps golden-section steps on log(value) inside the
// bracket around the best grid point, one continuous parameter at a time.
// Ties go to the smaller parameter value. Every distinct evaluated spec
// appears once in the trace, grid points first in grid order.
TuneResult tune(const TrainingSet& train, const TuneConfig& config, std::size_t threads = 1);

// split_samples with the config's fraction and seed, then tune on the
// training half.
std::pair<TuneResult, HeldOutSet> tune_with_split(const SampleSet& samples, const TuneConfig& config,
                                                   std::size_t threads = 1);

}  // namespace kts
