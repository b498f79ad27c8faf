#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "kts/io.hpp"
#include "kts/kernels.hpp"

namespace kts::cli {

enum class Format { json, csv };

enum ExitCode : int { kSuccess = 0, kUsage = 1, kDataError = 2, kCheckFailure = 3 };

// Options shared by every subcommand. threads and out do not enter the
// config hash: results are identical for any thread count.
struct GlobalOptions {
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::string out;
  Format format = Format::json;
};

struct KernelOptions {
  std::string family = "gaussian";
  double lengthscale = 1.0;

  KernelSpec spec() const;
};

struct TestOptions {
  std::string x_file;
  std::string y_file;
  KernelOptions kernel;
  double alpha = 0.05;
  std::size_t permutations = 200;
};

struct TuneOptions {
  std::string x_file;
  std::string y_file;
  std::string config_file;  // TuneConfig JSON; empty for defaults
  double alpha = 0.05;
  std::size_t permutations = 200;
};

struct PowerSimOptions {
  std::string mode = "alt";  // null: Q = P; alt: Q = N(0, q_variance)
  std::vector<std::size_t> nx{50, 100, 200, 400, 800};
  std::size_t ny = 50;
  double q_variance = 1.2;
  KernelOptions kernel;
  double alpha = 0.05;
  std::size_t permutations = 200;
  std::size_t reps = 2000;
};

struct NullDistOptions {
  std::string mode = "null";     // null: Laplace(0, 1/sqrt 2) twice; alt: Q = Laplace(0, 3)
  std::string regime = "sqrt";   // sqrt: nY = ceil(5 sqrt nX); proportional: nY = nX / 2
  std::size_t nx = 2500;
  std::size_t reps = 1000;
  std::size_t draws = 20000;         // samples of the null limit
  std::size_t reference_n = 5000;    // eigenvalue / reference sample size
  std::size_t quantiles = 99;
  std::size_t bins = 40;
  KernelOptions kernel;
};

struct VarianceOptions {
  std::string p_file;  // DiscreteDistribution JSON
  std::string q_file;
  std::string x_file;  // CSV samples, for the plug-in report
  std::string y_file;
  std::size_t nx = 0;
  std::size_t ny = 0;
  KernelOptions kernel;
  bool enumerate = false;
};

struct OracleCheckOptions {
  std::size_t instances = 200;
  double tolerance = 1e-10;
  bool perturb = false;
};

// Tabular view of a result for --format csv.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct Report {
  std::string command;
  Json config;
  Json result;
  Table table;
  int status = kSuccess;
};

Report run_test(const GlobalOptions& g, const TestOptions& o);
Report run_tune(const GlobalOptions& g, const TuneOptions& o);
Report run_power_sim(const GlobalOptions& g, const PowerSimOptions& o);
Report run_null_dist(const GlobalOptions& g, const NullDistOptions& o);
Report run_variance(const GlobalOptions& g, const VarianceOptions& o);
Report run_oracle_check(const GlobalOptions& g, const OracleCheckOptions& o);

// Writes the report with its provenance header (command, version, seed,
// config hash).
void write_report(std::ostream& out, const Report& report, const GlobalOptions& g);

// Maps an exception from a command to an exit code and prints it to `err`.
int exit_code_for_current_exception(std::ostream& err);

}  // namespace kts::cli
