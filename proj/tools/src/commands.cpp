#include "kts_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "kts/asymptotics.hpp"
#include "kts/corpus.hpp"
#include "kts/error.hpp"
#include "kts/estimators.hpp"
#include "kts/oracle.hpp"
#include "kts/permtest.hpp"
#include "kts/random.hpp"
#include "kts/samples.hpp"
#include "kts/simulation.hpp"
#include "kts/stats.hpp"
#include "kts/tuner.hpp"
#include "kts/variance.hpp"

namespace kts::cli {

namespace {

// Streams for auxiliary draws, kept apart from the per-replication streams.
constexpr std::uint64_t kEigenStream = 0x656967656e;
constexpr std::uint64_t kLimitStream = 0x6c696d6974;
constexpr std::uint64_t kReferenceStream = 0x726566;
constexpr std::uint64_t kHeldOutStream = 0x68656c64;

struct LoadedCsv {
  Matrix data;
  Json info;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

LoadedCsv load_csv(const std::string& path) {
  if (path.empty()) throw ParameterError("missing input file");
  const std::string bytes = slurp(path);
  std::istringstream in(bytes);
  Matrix m = read_csv(in);
  Json info{{"rows", m.rows()}, {"cols", m.cols()}, {"content_hash", fnv1a_hex(bytes)}};
  return {std::move(m), std::move(info)};
}

Json load_json(const std::string& path) {
  try {
    return Json::parse(slurp(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON in '") + path + "': " + e.what(), 0);
  }
}

std::string str(double v) { return format_double(v); }
std::string str(std::size_t v) { return std::to_string(v); }

Json histogram(const std::vector<double>& values, std::size_t bins) {
  if (bins == 0) throw ParameterError("bins must be positive");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it > lo ? *hi_it : lo + 1.0;
  std::vector<std::size_t> counts(bins, 0);
  for (double v : values) {
    auto b = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(bins));
    ++counts[std::min(b, bins - 1)];
  }
  Json edges = Json::array();
  for (std::size_t i = 0; i <= bins; ++i) edges.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins));
  return Json{{"edges", edges}, {"counts", counts}};
}

Json kernel_config(const KernelSpec& spec) { return to_json(spec); }

}  // namespace

KernelSpec KernelOptions::spec() const {
  const KernelFamily f = kernel_family_from_string(family);
  if (f == KernelFamily::gaussian) return KernelSpec::gaussian(lengthscale);
  return KernelSpec::make(f, {});
}

Report run_test(const GlobalOptions& g, const TestOptions& o) {
  const KernelSpec spec = o.kernel.spec();
  LoadedCsv x = load_csv(o.x_file);
  LoadedCsv y = load_csv(o.y_file);
  const SampleSet samples(std::move(x.data), std::move(y.data));
  const TestResult r = permutation_test(samples, spec, o.alpha, o.permutations, g.seed, g.threads);

  Report rep;
  rep.command = "test";
  rep.config = Json{{"seed", g.seed},       {"kernel", kernel_config(spec)}, {"alpha", o.alpha},
                    {"permutations", o.permutations}, {"x", x.info},         {"y", y.info}};
  rep.result = to_json(r);
  rep.table.columns = {"statistic", "p_value", "threshold", "reject", "alpha", "num_permutations", "nx", "ny"};
  rep.table.rows.push_back({str(r.statistic), str(r.p_value), str(r.threshold), r.reject ? "true" : "false",
                            str(r.alpha), str(r.num_permutations), str(r.nx), str(r.ny)});
  return rep;
}

Report run_tune(const GlobalOptions& g, const TuneOptions& o) {
  TuneConfig config = o.config_file.empty() ? default_tune_config() : tune_config_from_json(load_json(o.config_file));
  config.seed = g.seed;
  LoadedCsv x = load_csv(o.x_file);
  LoadedCsv y = load_csv(o.y_file);
  const SampleSet samples(std::move(x.data), std::move(y.data));

  auto [tuned, held_out] = tune_with_split(samples, config, g.threads);
  const TestResult test = permutation_test(held_out.samples(), tuned.best_spec, o.alpha, o.permutations,
                                           derive_seed(g.seed, kHeldOutStream), g.threads);

  Report rep;
  rep.command = "tune";
  rep.config = Json{{"seed", g.seed},   {"tune", to_json(config)}, {"alpha", o.alpha},
                    {"permutations", o.permutations}, {"x", x.info}, {"y", y.info}};
  rep.result = Json{{"tune", to_json(tuned)}, {"held_out_test", to_json(test)}};

  for (const auto& [name, values] : config.param_grid) rep.table.columns.push_back(name);
  rep.table.columns.push_back("objective");
  for (const auto& e : tuned.trace) {
    std::vector<std::string> row;
    for (const auto& [name, value] : e.spec.params()) row.push_back(str(value));
    row.push_back(str(e.objective));
    rep.table.rows.push_back(std::move(row));
  }
  return rep;
}

Report run_power_sim(const GlobalOptions& g, const PowerSimOptions& o) {
  if (o.mode != "null" && o.mode != "alt") throw ParameterError("mode must be 'null' or 'alt'");
  if (o.reps == 0) throw ParameterError("reps must be positive");
  SimulationConfig sim;
  sim.p = Sampler::normal(0.0, 1.0);
  sim.q = o.mode == "null" ? Sampler::normal(0.0, 1.0) : Sampler::normal(0.0, o.q_variance);
  sim.kernel = o.kernel.spec();
  sim.nx_sweep = o.nx;
  sim.ny = o.ny;
  sim.alpha = o.alpha;
  sim.permutations = o.permutations;
  sim.reps = o.reps;
  sim.seed = g.seed;
  const std::vector<RatePoint> curve = rejection_rate(sim, g.threads);

  Report rep;
  rep.command = "power-sim";
  rep.config = Json{{"seed", g.seed},         {"mode", o.mode},
                    {"p", to_json(sim.p)},     {"q", to_json(sim.q)},
                    {"kernel", kernel_config(sim.kernel)}, {"nx", o.nx},
                    {"ny", o.ny},             {"alpha", o.alpha},
                    {"permutations", o.permutations}, {"reps", o.reps}};
  Json points = Json::array();
  rep.table.columns = {"nx", "rate", "stderr"};
  for (const auto& p : curve) {
    points.push_back(Json{{"nx", p.nx}, {"rate", p.rate}, {"stderr", p.std_error}});
    rep.table.rows.push_back({str(p.nx), str(p.rate), str(p.std_error)});
  }
  rep.result = Json{{"curve", points}};
  return rep;
}

Report run_null_dist(const GlobalOptions& g, const NullDistOptions& o) {
  if (o.mode != "null" && o.mode != "alt") throw ParameterError("mode must be 'null' or 'alt'");
  if (o.regime != "sqrt" && o.regime != "proportional") {
    throw ParameterError("regime must be 'sqrt' or 'proportional'");
  }
  if (o.reps == 0 || o.draws == 0 || o.quantiles == 0) throw ParameterError("reps, draws and quantiles must be positive");
  const std::size_t ny = o.regime == "sqrt"
                             ? static_cast<std::size_t>(std::ceil(5.0 * std::sqrt(static_cast<double>(o.nx))))
                             : o.nx / 2;
  require_estimable(o.nx, ny);
  if (o.reference_n < 2) throw ParameterError("reference_n must be at least 2");

  const KernelSpec spec = o.kernel.spec();
  const Sampler p = Sampler::laplace(0.0, 1.0 / std::sqrt(2.0));
  const Sampler q = o.mode == "null" ? p : Sampler::laplace(0.0, 3.0);
  const std::vector<double> stats = simulate_mmd(p, q, spec, o.nx, ny, o.reps, g.seed, g.threads);
  const double m = static_cast<double>(std::min(o.nx, ny));
  const ScalingRatios rho = scaling_ratios(o.nx, ny);

  Report rep;
  rep.command = "null-dist";
  rep.config = Json{{"seed", g.seed},     {"mode", o.mode},   {"regime", o.regime},
                    {"p", to_json(p)},     {"q", to_json(q)},  {"kernel", kernel_config(spec)},
                    {"nx", o.nx},          {"ny", ny},         {"reps", o.reps},
                    {"draws", o.draws},    {"reference_n", o.reference_n},
                    {"quantiles", o.quantiles}, {"bins", o.bins}};
  Json result{{"nx", o.nx}, {"ny", ny}, {"rho_x", rho.x}, {"rho_y", rho.y}};
  std::vector<std::pair<double, double>> qq;

  if (o.mode == "null") {
    std::vector<double> min_scaled(stats.size()), sum_scaled(stats.size());
    for (std::size_t i = 0; i < stats.size(); ++i) {
      min_scaled[i] = m * stats[i];
      sum_scaled[i] = static_cast<double>(o.nx + ny) * stats[i];
    }
    Rng rng = make_rng(g.seed, kEigenStream);
    const Matrix pooled = p.sample(o.reference_n, rng);
    const SpectralModel model =
        make_spectral_model(estimate_null_eigenvalues(gram_matrix(spec, pooled, g.threads)), rho.x, rho.y);
    const std::vector<double> theory = sample_null_limit(model, o.draws, derive_seed(g.seed, kLimitStream), g.threads);
    qq = qq_pairs(min_scaled, theory, o.quantiles);
    result["model"] = to_json(model);
    result["ks_distance"] = ks_two_sample(min_scaled, theory);
    result["min_scaled_variance"] = sample_variance(min_scaled);
    result["sum_scaled_variance"] = sample_variance(sum_scaled);
    result["histogram_min_scaled"] = histogram(min_scaled, o.bins);
    result["histogram_sum_scaled"] = histogram(sum_scaled, o.bins);
  } else {
    const SampleSet reference = draw_samples(p, q, o.reference_n, o.reference_n, derive_seed(g.seed, kReferenceStream), 0);
    const double mmd_ref = mmd_unbiased_streaming(spec, reference);
    const PluginZetas z = plugin_zetas_streaming(spec, reference);
    const AltLimit limit = alt_limit(z.x, z.y, rho.x, rho.y, mmd_ref);
    std::vector<double> scaled(stats.size());
    for (std::size_t i = 0; i < stats.size(); ++i) scaled[i] = std::sqrt(m) * (stats[i] - mmd_ref);
    const double sd = std::sqrt(limit.variance);
    std::vector<double> sorted = scaled;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i <= o.quantiles; ++i) {
      const double level = (static_cast<double>(i) - 0.5) / static_cast<double>(o.quantiles);
      qq.emplace_back(interpolated_quantile(sorted, level), sd * normal_quantile(level));
    }
    result["limit"] = to_json(limit);
    result["reference_zeta_x"] = z.x;
    result["reference_zeta_y"] = z.y;
    result["empirical_variance"] = sample_variance(scaled);
    if (sd > 0.0) result["ks_distance"] = ks_one_sample(scaled, [sd](double t) { return normal_cdf(t / sd); });
    result["histogram"] = histogram(scaled, o.bins);
  }

  Json pairs = Json::array();
  rep.table.columns = {"empirical", "theoretical"};
  for (const auto& [e, t] : qq) {
    pairs.push_back(Json::array({e, t}));
    rep.table.rows.push_back({str(e), str(t)});
  }
  result["qq"] = pairs;
  rep.result = std::move(result);
  return rep;
}

Report run_variance(const GlobalOptions& g, const VarianceOptions& o) {
  const KernelSpec spec = o.kernel.spec();
  Report rep;
  rep.command = "variance";
  rep.table.columns = {"quantity", "value"};
  auto row = [&](const std::string& name, double v) { rep.table.rows.push_back({name, str(v)}); };

  if (!o.p_file.empty() || !o.q_file.empty()) {
    if (o.p_file.empty() || o.q_file.empty()) throw ParameterError("--p and --q must be given together");
    const DiscreteDistribution p = discrete_distribution_from_json(load_json(o.p_file));
    const DiscreteDistribution q = discrete_distribution_from_json(load_json(o.q_file));
    require_estimable(o.nx, o.ny);
    const PopulationFunctionals f = population_functionals(p, q, spec);
    const VarianceReport v = mmd_unbiased_variance(f, o.nx, o.ny);
    rep.config = Json{{"seed", g.seed}, {"kernel", kernel_config(spec)}, {"p", to_json(p)}, {"q", to_json(q)},
                      {"nx", o.nx},     {"ny", o.ny},                    {"enumerate", o.enumerate}};
    Json result{{"functionals", to_json(f)},
                {"degeneracy", std::string(to_string(classify_degeneracy(f)))},
                {"unbiased", to_json(v)}};
    row("mmd_sq", f.mmd_sq);
    row("zeta_x", f.zeta_x);
    row("zeta_y", f.zeta_y);
    row("variance_leading", v.leading);
    row("variance_total", *v.total);
    if (o.nx == o.ny) {
      const double u = mmd_ustat_variance(f, o.nx);
      result["ustat_variance"] = u;
      row("ustat_variance", u);
    }
    if (o.enumerate) {
      const Moments b = brute_force_moments(p, q, spec, o.nx, o.ny, EstimatorKind::unbiased);
      result["enumerated"] = Json{{"mean", b.mean}, {"variance", b.variance}};
      row("enumerated_mean", b.mean);
      row("enumerated_variance", b.variance);
    }
    rep.result = std::move(result);
    return rep;
  }

  LoadedCsv x = load_csv(o.x_file);
  LoadedCsv y = load_csv(o.y_file);
  const SampleSet samples(std::move(x.data), std::move(y.data));
  require_estimable(samples.nx(), samples.ny());
  const GramBlocks blocks = gram_blocks(spec, samples, g.threads);
  const double mmd = mmd_unbiased(blocks).value;
  const VarianceReport v = plugin_variance_report(blocks);
  rep.config = Json{{"seed", g.seed}, {"kernel", kernel_config(spec)}, {"x", x.info}, {"y", y.info}};
  rep.result = Json{{"mmd_unbiased", mmd}, {"plugin", to_json(v)}};
  row("mmd_unbiased", mmd);
  row("zeta_x_hat", v.zeta_x);
  row("zeta_y_hat", v.zeta_y);
  row("variance_leading", v.leading);
  row("sigma_hat", v.sigma);
  return rep;
}

Report run_oracle_check(const GlobalOptions& g, const OracleCheckOptions& o) {
  CorpusConfig config;
  config.instances = o.instances;
  config.seed = g.seed;
  config.tolerance = o.tolerance;
  config.perturb = o.perturb;
  const CorpusReport report = run_oracle_corpus(config);

  Report rep;
  rep.command = "oracle-check";
  rep.config = Json{{"seed", g.seed}, {"instances", o.instances}, {"tolerance", o.tolerance}, {"perturb", o.perturb}};
  Json formulas = Json::array();
  rep.table.columns = {"formula", "max_relative_error", "checked", "pass"};
  for (const auto& f : report.formulas) {
    formulas.push_back(Json{{"formula", f.formula},
                            {"max_relative_error", f.max_relative_error},
                            {"checked", f.checked},
                            {"pass", f.pass}});
    rep.table.rows.push_back({f.formula, str(f.max_relative_error), str(f.checked), f.pass ? "true" : "false"});
  }
  rep.result = Json{{"instances", report.instances}, {"pass", report.pass}, {"formulas", formulas}};
  rep.status = report.pass ? kSuccess : kCheckFailure;
  return rep;
}

void write_report(std::ostream& out, const Report& report, const GlobalOptions& g) {
  const std::string hash = config_hash(report.config);
  if (g.format == Format::json) {
    Json doc{{"command", report.command},
             {"version", version_string()},
             {"seed", g.seed},
             {"config_hash", hash},
             {"config", report.config},
             {"result", report.result}};
    out << doc.dump(2) << '\n';
    return;
  }
  out << "# kts " << report.command << " version=" << version_string() << " seed=" << g.seed
      << " config_hash=" << hash << '\n';
  for (std::size_t i = 0; i < report.table.columns.size(); ++i) out << (i ? "," : "") << report.table.columns[i];
  out << '\n';
  for (const auto& row : report.table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

int exit_code_for_current_exception(std::ostream& err) {
  try {
    throw;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
}

}  // namespace kts::cli
