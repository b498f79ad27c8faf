#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "kts_cli/commands.hpp"

namespace {

using namespace kts::cli;

void add_kernel(CLI::App* cmd, KernelOptions& k) {
  cmd->add_option("--kernel", k.family, "Kernel family: gaussian, linear, triangle")
      ->envname("KTS_KERNEL")
      ->check(CLI::IsMember({"gaussian", "linear", "triangle"}))
      ->capture_default_str();
  cmd->add_option("--lengthscale", k.lengthscale, "Gaussian lengthscale")
      ->envname("KTS_LENGTHSCALE")
      ->capture_default_str();
}

void add_alpha(CLI::App* cmd, double& alpha) {
  cmd->add_option("--alpha", alpha, "Test level")->envname("KTS_ALPHA")->capture_default_str();
}

void add_permutations(CLI::App* cmd, std::size_t& b) {
  cmd->add_option("--permutations", b, "Number of permutations")->envname("KTS_PERMUTATIONS")->capture_default_str();
}

void add_reps(CLI::App* cmd, std::size_t& reps) {
  cmd->add_option("--reps", reps, "Monte Carlo replications")->envname("KTS_REPS")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kernel two-sample testing with unequal sample sizes"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kts::version_string());

  GlobalOptions global;
  std::string format = "json";
  app.add_option("--seed", global.seed, "RNG seed")->envname("KTS_SEED")->capture_default_str();
  app.add_option("--threads", global.threads, "Worker threads (0 = all cores)")
      ->envname("KTS_THREADS")
      ->capture_default_str();
  app.add_option("--out", global.out, "Output file (default stdout)")->envname("KTS_OUT");
  app.add_option("--format", format, "Output format: json or csv")
      ->envname("KTS_FORMAT")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  TestOptions test;
  auto* test_cmd = app.add_subcommand("test", "Permutation two-sample test on two CSV files");
  test_cmd->add_option("x", test.x_file, "CSV file with the X sample")->required();
  test_cmd->add_option("y", test.y_file, "CSV file with the Y sample")->required();
  add_kernel(test_cmd, test.kernel);
  add_alpha(test_cmd, test.alpha);
  add_permutations(test_cmd, test.permutations);

  TuneOptions tune;
  auto* tune_cmd = app.add_subcommand("tune", "Select kernel parameters on a training split, test on the rest");
  tune_cmd->add_option("x", tune.x_file, "CSV file with the X sample")->required();
  tune_cmd->add_option("y", tune.y_file, "CSV file with the Y sample")->required();
  tune_cmd->add_option("--config", tune.config_file, "Tuning config JSON");
  add_alpha(tune_cmd, tune.alpha);
  add_permutations(tune_cmd, tune.permutations);

  PowerSimOptions power;
  auto* power_cmd = app.add_subcommand("power-sim", "Rejection rate of the permutation test over an nX sweep");
  power_cmd->add_option("--mode", power.mode, "null or alt")
      ->check(CLI::IsMember({"null", "alt"}))
      ->capture_default_str();
  power_cmd->add_option("--nx", power.nx, "nX sweep")->delimiter(',')->capture_default_str();
  power_cmd->add_option("--ny", power.ny, "nY")->capture_default_str();
  power_cmd->add_option("--q-variance", power.q_variance, "Variance of Q under the alternative")
      ->capture_default_str();
  add_kernel(power_cmd, power.kernel);
  add_alpha(power_cmd, power.alpha);
  add_permutations(power_cmd, power.permutations);
  add_reps(power_cmd, power.reps);

  NullDistOptions null;
  auto* null_cmd = app.add_subcommand("null-dist", "Scaled statistic distributions with limit Q-Q pairs");
  null_cmd->add_option("--mode", null.mode, "null or alt")
      ->check(CLI::IsMember({"null", "alt"}))
      ->capture_default_str();
  null_cmd->add_option("--regime", null.regime, "sqrt (nY = ceil(5 sqrt nX)) or proportional (nY = nX/2)")
      ->check(CLI::IsMember({"sqrt", "proportional"}))
      ->capture_default_str();
  null_cmd->add_option("--nx", null.nx, "nX")->capture_default_str();
  null_cmd->add_option("--draws", null.draws, "Samples of the limit distribution")->capture_default_str();
  null_cmd->add_option("--reference-n", null.reference_n, "Sample size for eigenvalues or reference values")
      ->capture_default_str();
  null_cmd->add_option("--quantiles", null.quantiles, "Number of Q-Q points")->capture_default_str();
  null_cmd->add_option("--bins", null.bins, "Histogram bins")->capture_default_str();
  add_kernel(null_cmd, null.kernel);
  add_reps(null_cmd, null.reps);

  VarianceOptions variance;
  auto* var_cmd = app.add_subcommand("variance", "Exact or plug-in variance of the unbiased estimator");
  var_cmd->add_option("--p", variance.p_file, "Discrete distribution P (JSON)");
  var_cmd->add_option("--q", variance.q_file, "Discrete distribution Q (JSON)");
  var_cmd->add_option("--nx", variance.nx, "nX for the exact variance");
  var_cmd->add_option("--ny", variance.ny, "nY for the exact variance");
  var_cmd->add_flag("--enumerate", variance.enumerate, "Also compute the variance by enumeration");
  var_cmd->add_option("x", variance.x_file, "CSV file with the X sample (plug-in mode)");
  var_cmd->add_option("y", variance.y_file, "CSV file with the Y sample (plug-in mode)");
  add_kernel(var_cmd, variance.kernel);

  OracleCheckOptions oracle;
  auto* oracle_cmd = app.add_subcommand("oracle-check", "Closed-form variances against exhaustive enumeration");
  oracle_cmd->add_option("--instances", oracle.instances, "Corpus size")->capture_default_str();
  oracle_cmd->add_option("--tolerance", oracle.tolerance, "Relative error tolerance")->capture_default_str();
  oracle_cmd->add_flag("--perturb", oracle.perturb, "Scale one variance term by 1 + 1e-6");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kUsage;
  }
  global.format = format == "csv" ? Format::csv : Format::json;

  try {
    Report report;
    if (*test_cmd) report = run_test(global, test);
    else if (*tune_cmd) report = run_tune(global, tune);
    else if (*power_cmd) report = run_power_sim(global, power);
    else if (*null_cmd) report = run_null_dist(global, null);
    else if (*var_cmd) report = run_variance(global, variance);
    else report = run_oracle_check(global, oracle);

    if (global.out.empty()) {
      write_report(std::cout, report, global);
    } else {
      std::ofstream out(global.out, std::ios::binary);
      if (!out) {
        std::cerr << "error: cannot write '" << global.out << "'\n";
        return kDataError;
      }
      write_report(out, report, global);
    }
    return report.status;
  } catch (...) {
    return exit_code_for_current_exception(std::cerr);
  }
}
