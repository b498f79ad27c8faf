#include "kts/corpus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "kts/error.hpp"
#include "kts/genustat.hpp"
#include "kts/random.hpp"
#include "kts/variance.hpp"

namespace kts {

namespace {

DiscreteDistribution random_distribution(Rng& rng) {
  std::uniform_int_distribution<std::size_t> size(2, 3);
  std::uniform_real_distribution<double> location(-1.5, 1.5);
  std::uniform_real_distribution<double> weight(0.1, 1.0);
  const std::size_t m = size(rng);
  Matrix support(static_cast<Eigen::Index>(m), 1);
  for (std::size_t i = 0; i < m; ++i) {
    double v = 0.0;
    bool fresh = false;
    while (!fresh) {
      v = location(rng);
      fresh = true;
      for (std::size_t k = 0; k < i; ++k) fresh = fresh && std::abs(support(static_cast<Eigen::Index>(k), 0) - v) > 1e-3;
    }
    support(static_cast<Eigen::Index>(i), 0) = v;
  }
  std::vector<double> probs(m);
  double total = 0.0;
  for (double& w : probs) total += (w = weight(rng));
  for (double& w : probs) w /= total;
  return DiscreteDistribution(std::move(support), std::move(probs));
}

}  // namespace

CorpusInstance make_corpus_instance(std::uint64_t seed, std::size_t index) {
  Rng rng = make_rng(seed, index);
  std::uniform_int_distribution<std::size_t> n(2, 4);
  std::uniform_real_distribution<double> lengthscale(0.5, 2.0);
  KernelSpec kernel = KernelSpec::linear();
  switch (index % 3) {
    case 0: kernel = KernelSpec::gaussian(lengthscale(rng)); break;
    case 1: kernel = KernelSpec::linear(); break;
    default: kernel = KernelSpec::triangle(); break;
  }
  DiscreteDistribution p = random_distribution(rng);
  DiscreteDistribution q = random_distribution(rng);
  const std::size_t nx = n(rng);
  const std::size_t ny = n(rng);
  return CorpusInstance{std::move(p), std::move(q), kernel, nx, ny};
}

double relative_error(double value, double reference) {
  return std::abs(value - reference) / std::max(std::abs(reference), 1e-12);
}

CorpusReport run_oracle_corpus(const CorpusConfig& config) {
  if (config.instances == 0) throw ParameterError("corpus needs at least one instance");
  std::array<FormulaError, 5> errors{{{"mean"}, {"unbiased_variance"}, {"ustat_variance"}, {"sen_variance"},
                                      {"zeta_table"}}};
  auto note = [&](std::size_t slot, double err) {
    errors[slot].max_relative_error = std::max(errors[slot].max_relative_error, err);
    ++errors[slot].checked;
  };

  for (std::size_t i = 0; i < config.instances; ++i) {
    const CorpusInstance c = make_corpus_instance(config.seed, i);
    const PopulationFunctionals f = population_functionals(c.p, c.q, c.kernel);
    const Moments brute = brute_force_moments(c.p, c.q, c.kernel, c.nx, c.ny, EstimatorKind::unbiased);

    note(0, std::abs(brute.mean - f.mmd_sq) / std::max(std::abs(f.mmd_sq), 1e-12));

    const VarianceReport report = mmd_unbiased_variance(f, c.nx, c.ny);
    double closed = *report.total;
    if (config.perturb) closed += 1e-6 * 4.0 * f.zeta_x / static_cast<double>(c.nx);
    note(1, relative_error(closed, brute.variance));

    if (c.nx == c.ny) {
      const Moments paired = brute_force_moments(c.p, c.q, c.kernel, c.nx, c.ny, EstimatorKind::ustat);
      note(2, relative_error(mmd_ustat_variance(f, c.nx), paired.variance));
    }

    const GenUSpec genu = mmd_genu_spec(c.kernel);
    const std::array<std::size_t, 2> sizes{c.nx, c.ny};
    note(3, relative_error(sen_variance(genu, mmd_zeta_table(f), sizes), brute.variance));

    const std::array<DiscreteDistribution, 2> dists{c.p, c.q};
    const ZetaTable exact = exact_zeta_table(genu, dists);
    const ZetaTable closed_table = mmd_zeta_table(f);
    double worst = 0.0;
    for (const auto& [depth, value] : exact.values()) {
      worst = std::max(worst, relative_error(closed_table.at(depth), value));
    }
    note(4, worst);
  }

  CorpusReport report;
  report.instances = config.instances;
  for (auto& e : errors) {
    e.pass = e.max_relative_error <= config.tolerance;
    report.pass = report.pass && e.pass;
    report.formulas.push_back(e);
  }
  return report;
}

}  // namespace kts
