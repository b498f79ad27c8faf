#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "kts/kernels.hpp"
#include "kts/oracle.hpp"
#include "kts/random.hpp"
#include "kts/types.hpp"

namespace kts {

// Data-generating distributions for simulation harnesses. Coordinates are
// i.i.d. when dim > 1.
class Sampler {
 public:
  enum class Family { normal, laplace, discrete };

  // N(mean, variance) per coordinate.
  static Sampler normal(double mean, double variance, std::size_t dim = 1);
  // Laplace(location, scale): density exp(-|x - loc| / scale) / (2 scale).
  static Sampler laplace(double location, double scale, std::size_t dim = 1);
  static Sampler discrete(DiscreteDistribution dist);

  Family family() const noexcept { return family_; }
  double location() const noexcept { return location_; }
  // Variance for normal, scale for laplace.
  double spread() const noexcept { return spread_; }
  std::size_t dim() const noexcept { return dim_; }
  const std::optional<DiscreteDistribution>& distribution() const noexcept { return discrete_; }

  Matrix sample(std::size_t count, Rng& rng) const;

 private:
  Sampler() = default;

  Family family_ = Family::normal;
  double location_ = 0.0;
  double spread_ = 1.0;
  std::size_t dim_ = 1;
  std::optional<DiscreteDistribution> discrete_;
};

std::string_view to_string(Sampler::Family family);

// One draw of (X ~ P^nX, Y ~ Q^nY) per replication, from stream (seed, rep).
SampleSet draw_samples(const Sampler& p, const Sampler& q, std::size_t nx, std::size_t ny, std::uint64_t seed,
                       std::uint64_t rep);

// mmd_unbiased over `reps` independent draws; deterministic in seed for any
// thread count.
std::vector<double> simulate_mmd(const Sampler& p, const Sampler& q, const KernelSpec& spec, std::size_t nx,
                                 std::size_t ny, std::size_t reps, std::uint64_t seed, std::size_t threads = 1);

}  // namespace kts
