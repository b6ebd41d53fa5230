#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "srf/csv.hpp"

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SRF_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("srf_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& leaf) const { return (dir_ / leaf).string(); }
  fs::path dir_;
};

}  // namespace

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run_cli(""), 2);
  EXPECT_EQ(run_cli("frobnicate"), 2);
  EXPECT_EQ(run_cli("run-srf --bogus 1"), 2);
  EXPECT_EQ(run_cli("run-srf --n_s 44 --output_dir " + path("x")), 2);
  EXPECT_EQ(run_cli("run-srf --set dt=fast --output_dir " + path("x")), 2);
  EXPECT_FALSE(fs::exists(path("x")));
  EXPECT_EQ(run_cli("--help"), 0);
}

TEST_F(Cli, ProfileDump) {
  ASSERT_EQ(run_cli("profile-dump --points 11 --out " + path("p.csv")), 0);
  const srf::csv::Table t = srf::csv::read_file(path("p.csv"));
  ASSERT_EQ(t.rows.size(), 11u);
  EXPECT_NEAR(t.numbers("radius")[5], 10.0, 1e-9);
  EXPECT_EQ(t.numbers("radius")[0], 0.0);
}

TEST_F(Cli, GeometryCheckAndMutation) {
  EXPECT_EQ(run_cli("geometry-check --n-random 2000 --n-states 20 --out " + path("c.csv")), 0);
  const srf::csv::Table t = srf::csv::read_file(path("c.csv"));
  EXPECT_EQ(t.rows.size(), 4u);
  EXPECT_EQ(run_cli("geometry-check --n-random 100 --n-states 20 --mutate"), 5);
}

TEST_F(Cli, FailedRunWritesEverything) {
  EXPECT_EQ(run_cli("run-srf --no-remesh --output_dir " + path("a")), 3);
  for (const char* f : {"trajectory.csv", "events.csv", "summary.csv", "manifest.txt"})
    EXPECT_TRUE(fs::exists(dir_ / "a" / f)) << f;
  EXPECT_TRUE(fs::is_directory(dir_ / "a" / "snapshots"));
  const srf::csv::Table s = srf::csv::read_file(path("a/summary.csv"));
  EXPECT_EQ(s.rows[0][s.column("outcome")], "Failed");
  const srf::csv::Table t = srf::csv::read_file(path("a/trajectory.csv"));
  for (const char* col : {"t", "waist_radius", "lobe_radius", "radius_gap", "cond_M", "cond_J", "remesh_flag",
                          "min_wc_margin"})
    EXPECT_TRUE(t.has_column(col)) << col;
}

TEST_F(Cli, StepLimitHasItsOwnCode) {
  EXPECT_EQ(run_cli("run-srf --max_steps 3 --output_dir " + path("a")), 6);
}

TEST_F(Cli, RunsAreByteIdentical) {
  ASSERT_EQ(run_cli("run-srf --max_steps 40 --output_dir " + path("a")), 6);
  ASSERT_EQ(run_cli("run-srf --max_steps 40 --output_dir " + path("b")), 6);
  EXPECT_EQ(slurp(path("a/trajectory.csv")), slurp(path("b/trajectory.csv")));
  EXPECT_EQ(slurp(path("a/events.csv")), slurp(path("b/events.csv")));
}

TEST_F(Cli, ManifestFileThenOverrides) {
  {
    std::ofstream m(path("run.txt"));
    m << "# sphere control\nprofile=sphere\nR0=10\nn_z=51\ndt=0.5\n";
  }
  ASSERT_EQ(run_cli("run-continuum -m " + path("run.txt") + " --set n_z=61 --output_dir " + path("c")), 0);
  EXPECT_EQ(slurp(path("run.txt")), slurp(path("c/manifest_input.txt")));
  const std::string echo = slurp(path("c/manifest.txt"));
  EXPECT_NE(echo.find("n_z=61\n"), std::string::npos);
  EXPECT_NE(echo.find("profile=sphere\n"), std::string::npos);
  EXPECT_NE(echo.find("dt=0.5\n"), std::string::npos);
}

TEST_F(Cli, CompareRefusesUnpinchedRuns) {
  ASSERT_EQ(run_cli("run-srf --no-remesh --output_dir " + path("srf")), 3);
  ASSERT_EQ(run_cli("run-continuum --profile sphere --R0 10 --n_z 51 --output_dir " + path("cont")), 0);
  EXPECT_EQ(run_cli("compare --srf " + path("srf") + " --continuum " + path("cont") + " --out " + path("cmp")), 4);
  EXPECT_EQ(run_cli("compare --srf " + path("cont") + " --continuum " + path("cont") + " --out " + path("cmp")), 0);
  const srf::csv::Table s = srf::csv::read_file(path("cmp/comparison_summary.csv"));
  for (double v : s.numbers("rms_relative")) EXPECT_EQ(v, 0.0);
}
