#include "kts/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kts/error.hpp"
#include "kts/estimators.hpp"
#include "kts/parallel.hpp"
#include "kts/random.hpp"
#include "kts/variance.hpp"

namespace kts {

namespace {

using Params = KernelSpec::Params;

// Lexicographic by parameter value in map order: "smaller" for tie-breaking.
bool params_less(const Params& a, const Params& b) {
  for (auto ia = a.begin(), ib = b.begin(); ia != a.end() && ib != b.end(); ++ia, ++ib) {
    if (ia->second != ib->second) return ia->second < ib->second;
  }
  return false;
}

bool better(const TraceEntry& candidate, const TraceEntry& incumbent) {
  if (candidate.objective != incumbent.objective) return candidate.objective > incumbent.objective;
  return params_less(candidate.spec.params(), incumbent.spec.params());
}

class Evaluator {
 public:
  Evaluator(const SampleSet& samples, const TuneConfig& config) : samples_(samples), config_(config) {}

  // Returns the objective, recording spec in the trace on first sight.
  double operator()(const Params& params) {
    for (const auto& e : trace_) {
      if (e.spec.params() == params) return e.objective;
    }
    const KernelSpec spec = KernelSpec::make(config_.family, params);
    const double value = snr_objective(samples_, spec, config_.lambda_reg, config_.sigma_sizes);
    trace_.push_back({spec, value});
    return value;
  }

  void record(TraceEntry entry) { trace_.push_back(std::move(entry)); }
  std::vector<TraceEntry>& trace() { return trace_; }

 private:
  const SampleSet& samples_;
  const TuneConfig& config_;
  std::vector<TraceEntry> trace_;
};

std::vector<Params> grid_points(const std::map<std::string, std::vector<double>>& grid) {
  std::vector<Params> points{Params{}};
  for (const auto& [name, values] : grid) {
    std::vector<Params> next;
    for (const auto& p : points) {
      for (double v : values) {
        Params q = p;
        q[name] = v;
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  return points;
}

void validate(const TuneConfig& config) {
  if (!(config.lambda_reg > 0.0)) throw ParameterError("lambda_reg must be > 0");
  if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0)) {
    throw ParameterError("train_fraction must lie in (0, 1)");
  }
  for (const auto& [name, values] : config.param_grid) {
    if (values.empty()) throw ParameterError("grid for '" + name + "' is empty");
    if (!std::is_sorted(values.begin(), values.end())) {
      throw ParameterError("grid for '" + name + "' must be sorted ascending");
    }
    for (double v : values) {
      if (!(v > 0.0) || !std::isfinite(v)) throw ParameterError("grid values must be finite and > 0");
    }
  }
}

std::vector<std::size_t> shuffled(std::size_t n, Rng rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::shuffle(idx.begin(), idx.end(), rng);
  return idx;
}

Matrix take_rows(const Matrix& m, const std::vector<std::size_t>& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(rows[i]));
  }
  return out;
}

}  // namespace

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0 && hi >= lo)) throw ParameterError("log_grid needs 0 < lo <= hi");
  if (count == 0) throw ParameterError("log_grid needs count >= 1");
  if (count == 1) return {lo};
  std::vector<double> out(count);
  const double a = std::log(lo);
  const double step = (std::log(hi) - a) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = std::exp(a + step * static_cast<double>(i));
  out.front() = lo;
  out.back() = hi;
  return out;
}

TuneConfig default_tune_config() {
  TuneConfig c;
  c.param_grid["lengthscale"] = log_grid(1e-2, 1e3, 16);
  return c;
}

double snr_objective(const SampleSet& samples, const KernelSpec& spec, double lambda_reg,
                     std::optional<std::pair<std::size_t, std::size_t>> sigma_sizes) {
  require_estimable(samples.nx(), samples.ny());
  if (!(lambda_reg > 0.0)) throw ParameterError("lambda_reg must be > 0");
  const GramBlocks blocks = gram_blocks(spec, samples);
  const double mmd = mmd_unbiased(blocks).value;
  const PluginZetas z = plugin_zetas(blocks);
  const auto [nx, ny] = sigma_sizes.value_or(std::pair{samples.nx(), samples.ny()});
  return mmd / (sigma_hat(z.x, z.y, nx, ny) + lambda_reg);
}

Split split_samples(const SampleSet& samples, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ParameterError("train_fraction must lie in (0, 1)");
  auto cut = [&](std::size_t n) {
    const auto k = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
    if (k < 2 || n - k < 2) throw ParameterError("split leaves fewer than 2 samples in a group");
    return k;
  };
  const std::size_t kx = cut(samples.nx());
  const std::size_t ky = cut(samples.ny());
  const auto px = shuffled(samples.nx(), make_rng(seed, 0));
  const auto py = shuffled(samples.ny(), make_rng(seed, 1));

  SplitIndices idx;
  idx.train_x.assign(px.begin(), px.begin() + static_cast<std::ptrdiff_t>(kx));
  idx.test_x.assign(px.begin() + static_cast<std::ptrdiff_t>(kx), px.end());
  idx.train_y.assign(py.begin(), py.begin() + static_cast<std::ptrdiff_t>(ky));
  idx.test_y.assign(py.begin() + static_cast<std::ptrdiff_t>(ky), py.end());

  TrainingSet train(SampleSet(take_rows(samples.x(), idx.train_x), take_rows(samples.y(), idx.train_y)));
  HeldOutSet test(SampleSet(take_rows(samples.x(), idx.test_x), take_rows(samples.y(), idx.test_y)));
  return Split{std::move(train), std::move(test), std::move(idx)};
}

TuneResult tune(const TrainingSet& train, const TuneConfig& config, std::size_t threads) {
  validate(config);
  const SampleSet& samples = train.samples();
  require_estimable(samples.nx(), samples.ny());

  const std::vector<Params> grid = grid_points(config.param_grid);
  std::vector<double> values(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    values[i] = snr_objective(samples, KernelSpec::make(config.family, grid[i]), config.lambda_reg,
                              config.sigma_sizes);
  });

  Evaluator eval(samples, config);
  for (std::size_t i = 0; i < grid.size(); ++i) eval.record({KernelSpec::make(config.family, grid[i]), values[i]});

  auto best_entry = [&] {
    const auto& trace = eval.trace();
    std::size_t best = 0;
    for (std::size_t i = 1; i < trace.size(); ++i) {
      if (better(trace[i], trace[best])) best = i;
    }
    return trace[best];
  };

  static const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (const auto& [name, axis] : config.param_grid) {
    if (axis.size() < 2 || config.refine_steps == 0) continue;
    const Params centre = best_entry().spec.params();
    const double v = centre.at(name);
    const auto pos = static_cast<std::size_t>(std::lower_bound(axis.begin(), axis.end(), v) - axis.begin());
    const std::size_t at = std::min(pos, axis.size() - 1);
    double lo = std::log(axis[at == 0 ? 0 : at - 1]);
    double hi = std::log(axis[std::min(at + 1, axis.size() - 1)]);

    auto f = [&](double log_value) {
      Params p = centre;
      p[name] = std::exp(log_value);
      return eval(p);
    };
    double c = hi - kInvPhi * (hi - lo);
    double d = lo + kInvPhi * (hi - lo);
    double fc = f(c);
    double fd = f(d);
    for (std::size_t step = 1; step < config.refine_steps; ++step) {
      // Prefer the lower bracket on ties.
      if (fc >= fd) {
        hi = d;
        d = c;
        fd = fc;
        c = hi - kInvPhi * (hi - lo);
        fc = f(c);
      } else {
        lo = c;
        c = d;
        fc = fd;
        d = lo + kInvPhi * (hi - lo);
        fd = f(d);
      }
    }
  }

  const TraceEntry best = best_entry();
  return TuneResult{best.spec, best.objective, std::move(eval.trace())};
}

std::pair<TuneResult, HeldOutSet> tune_with_split(const SampleSet& samples, const TuneConfig& config,
                                                   std::size_t threads) {
  validate(config);
  Split split = split_samples(samples, config.train_fraction, config.seed);
  TuneResult result = tune(split.train, config, threads);
  return {std::move(result), std::move(split.test)};
}

}  // namespace kts
