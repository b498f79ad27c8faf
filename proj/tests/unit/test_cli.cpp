#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "kts/error.hpp"
#include "kts/io.hpp"
#include "kts/random.hpp"
#include "kts/simulation.hpp"
#include "kts_cli/commands.hpp"

namespace kts::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("kts_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
    Rng rng = make_rng(1, 0);
    write(Sampler::normal(0.0, 1.0).sample(40, rng), "x.csv");
    write(Sampler::normal(1.0, 1.0).sample(30, rng), "y.csv");
    write(Sampler::normal(0.0, 1.0, 2).sample(30, rng), "wide.csv");
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const Matrix& m, const std::string& name) const {
    std::ofstream out(path(name));
    write_csv(out, m);
  }

  static std::string render(const Report& r, const GlobalOptions& g) {
    std::ostringstream out;
    write_report(out, r, g);
    return out.str();
  }

  int run(const std::string& args, const std::string& env = "") const {
    const std::string cmd = env + " " + KTS_TOOL_PATH + " " + args + " > " + path("stdout") + " 2> " + path("stderr");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string slurp(const std::string& name) const {
    std::ifstream in(path(name));
    return {std::istreambuf_iterator<char>(in), {}};
  }

  fs::path dir_;
};

TEST_F(CliTest, TestReportIsReproducibleAcrossThreads) {
  GlobalOptions g;
  g.seed = 5;
  TestOptions o;
  o.x_file = path("x.csv");
  o.y_file = path("y.csv");
  o.permutations = 99;
  const std::string a = render(run_test(g, o), g);
  g.threads = 3;
  EXPECT_EQ(render(run_test(g, o), g), a);
  const Json j = Json::parse(a);
  EXPECT_EQ(j["command"], "test");
  EXPECT_EQ(j["seed"], 5);
  EXPECT_EQ(j["version"], version_string());
  EXPECT_EQ(j["config_hash"], config_hash(j["config"]));
  EXPECT_EQ(j["result"]["num_permutations"], 99);
}

TEST_F(CliTest, CsvFormatHasProvenanceLine) {
  GlobalOptions g;
  g.format = Format::csv;
  TestOptions o;
  o.x_file = path("x.csv");
  o.y_file = path("y.csv");
  o.permutations = 20;
  const std::string text = render(run_test(g, o), g);
  EXPECT_EQ(text.rfind("# kts test version=", 0), 0u);
  EXPECT_NE(text.find("config_hash="), std::string::npos);
}

TEST_F(CliTest, SeedChangesHash) {
  GlobalOptions g;
  OracleCheckOptions o;
  o.instances = 5;
  const Report a = run_oracle_check(g, o);
  g.seed = 1;
  const Report b = run_oracle_check(g, o);
  EXPECT_NE(config_hash(a.config), config_hash(b.config));
  EXPECT_EQ(a.status, kSuccess);
}

TEST_F(CliTest, OracleCheckPerturbFails) {
  OracleCheckOptions o;
  o.instances = 20;
  o.perturb = true;
  EXPECT_EQ(run_oracle_check(GlobalOptions{}, o).status, kCheckFailure);
}

TEST_F(CliTest, InvalidParametersAreUsageErrors) {
  PowerSimOptions p;
  p.reps = 0;
  EXPECT_THROW(run_power_sim(GlobalOptions{}, p), ParameterError);
  NullDistOptions n;
  n.draws = 0;
  n.nx = 50;
  n.reps = 2;
  n.reference_n = 50;
  EXPECT_THROW(run_null_dist(GlobalOptions{}, n), ParameterError);
}

TEST_F(CliTest, PowerSimSmallRunIsDeterministic) {
  GlobalOptions g;
  g.seed = 3;
  PowerSimOptions p;
  p.nx = {20, 40};
  p.ny = 20;
  p.reps = 10;
  p.permutations = 20;
  const std::string a = render(run_power_sim(g, p), g);
  g.threads = 4;
  EXPECT_EQ(render(run_power_sim(g, p), g), a);
  EXPECT_EQ(Json::parse(a)["result"]["curve"].size(), 2u);
}

TEST_F(CliTest, ProcessExitCodes) {
  EXPECT_EQ(run("--version"), 0);
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("test " + path("x.csv")), 1);
  EXPECT_EQ(run("power-sim --reps 0"), 1);
  EXPECT_EQ(run("null-dist --draws 0 --nx 50 --reps 2 --reference-n 50"), 1);
  EXPECT_EQ(run("test " + path("x.csv") + " " + path("missing.csv")), 2);
  EXPECT_EQ(run("test " + path("x.csv") + " " + path("wide.csv")), 2);
  EXPECT_EQ(run("oracle-check --instances 10 --perturb"), 3);
  EXPECT_EQ(run("oracle-check --instances 10"), 0);
}

TEST_F(CliTest, ProcessOutputIsByteIdentical) {
  const std::string args = "test " + path("x.csv") + " " + path("y.csv") + " --permutations 50 --seed 11";
  ASSERT_EQ(run(args + " --threads 1"), 0);
  const std::string a = slurp("stdout");
  ASSERT_EQ(run(args + " --threads 4"), 0);
  EXPECT_EQ(slurp("stdout"), a);
  ASSERT_EQ(run(args + " --out " + path("report.json")), 0);
  EXPECT_EQ(slurp("report.json"), a);
}

TEST_F(CliTest, EnvironmentOverrides) {
  const std::string args = "test " + path("x.csv") + " " + path("y.csv");
  ASSERT_EQ(run(args + " --permutations 30 --seed 4"), 0);
  const std::string flags = slurp("stdout");
  ASSERT_EQ(run(args, "KTS_PERMUTATIONS=30 KTS_SEED=4"), 0);
  EXPECT_EQ(slurp("stdout"), flags);
  EXPECT_EQ(Json::parse(flags)["result"]["num_permutations"], 30);
}

}  // namespace
}  // namespace kts::cli
