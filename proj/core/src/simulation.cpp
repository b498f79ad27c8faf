#include "kts/simulation.hpp"

#include <cmath>
#include <random>
#include <utility>

#include "kts/error.hpp"
#include "kts/estimators.hpp"
#include "kts/parallel.hpp"
#include "kts/samples.hpp"

namespace kts {

Sampler Sampler::normal(double mean, double variance, std::size_t dim) {
  if (!(variance > 0.0)) throw ParameterError("normal sampler: variance must be > 0");
  if (dim == 0) throw ParameterError("sampler dimension must be positive");
  Sampler s;
  s.family_ = Family::normal;
  s.location_ = mean;
  s.spread_ = variance;
  s.dim_ = dim;
  return s;
}

Sampler Sampler::laplace(double location, double scale, std::size_t dim) {
  if (!(scale > 0.0)) throw ParameterError("laplace sampler: scale must be > 0");
  if (dim == 0) throw ParameterError("sampler dimension must be positive");
  Sampler s;
  s.family_ = Family::laplace;
  s.location_ = location;
  s.spread_ = scale;
  s.dim_ = dim;
  return s;
}

Sampler Sampler::discrete(DiscreteDistribution dist) {
  Sampler s;
  s.family_ = Family::discrete;
  s.dim_ = dist.dim();
  s.discrete_ = std::move(dist);
  return s;
}

std::string_view to_string(Sampler::Family family) {
  switch (family) {
    case Sampler::Family::normal: return "normal";
    case Sampler::Family::laplace: return "laplace";
    case Sampler::Family::discrete: return "discrete";
  }
  return "unknown";
}

Matrix Sampler::sample(std::size_t count, Rng& rng) const {
  Matrix out(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(dim_));
  double* data = out.data();
  const std::size_t total = count * dim_;
  switch (family_) {
    case Family::normal: {
      std::normal_distribution<double> dist(location_, std::sqrt(spread_));
      for (std::size_t i = 0; i < total; ++i) data[i] = dist(rng);
      break;
    }
    case Family::laplace: {
      std::uniform_real_distribution<double> u(-0.5, 0.5);
      for (std::size_t i = 0; i < total; ++i) {
        const double v = u(rng);
        const double sign = v < 0.0 ? -1.0 : 1.0;
        data[i] = location_ - spread_ * sign * std::log1p(-2.0 * std::abs(v));
      }
      break;
    }
    case Family::discrete: {
      const auto& probs = discrete_->probs();
      std::discrete_distribution<std::size_t> pick(probs.begin(), probs.end());
      for (std::size_t i = 0; i < count; ++i) {
        out.row(static_cast<Eigen::Index>(i)) = discrete_->support().row(static_cast<Eigen::Index>(pick(rng)));
      }
      break;
    }
  }
  return out;
}

SampleSet draw_samples(const Sampler& p, const Sampler& q, std::size_t nx, std::size_t ny, std::uint64_t seed,
                       std::uint64_t rep) {
  if (p.dim() != q.dim()) throw ShapeError("samplers differ in dimension");
  Rng rng = make_rng(seed, rep);
  Matrix x = p.sample(nx, rng);
  Matrix y = q.sample(ny, rng);
  return SampleSet(std::move(x), std::move(y));
}

std::vector<double> simulate_mmd(const Sampler& p, const Sampler& q, const KernelSpec& spec, std::size_t nx,
                                 std::size_t ny, std::size_t reps, std::uint64_t seed, std::size_t threads) {
  std::vector<double> out(reps);
  parallel_for(reps, threads, [&](std::size_t r) {
    out[r] = mmd_unbiased_streaming(spec, draw_samples(p, q, nx, ny, seed, r));
  });
  return out;
}

}  // namespace kts
