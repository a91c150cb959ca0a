#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fused/io/config.hpp"
#include "fused/io/store.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = -1;
  std::string output;
};

const fs::path &work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("fused_cli_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

CliResult run(const std::string &args, const std::string &env = "") {
  const fs::path log = work_dir() / "last_output.txt";
  const std::string cmd = env + (env.empty() ? "" : " ") + "\"" FUSED_CLI_PATH "\" " + args +
                          " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  return r;
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Evaluation records only; the header repeats the config, including --parallel.
std::string records(const fs::path &p) {
  const std::string s = slurp(p);
  return s.substr(s.find('\n') + 1);
}

fs::path small_config() {
  const fs::path p = work_dir() / "small.json";
  if (!fs::exists(p)) {
    fused::CampaignConfig c;
    c.settings.ga.population = 8;
    c.settings.ga.generations = 2;
    c.repetitions = 2;
    c.output_dir = (work_dir() / "from_config").string();
    fused::save_config(c, p);
  }
  return p;
}

class Cli : public ::testing::Test {
 protected:
  static void TearDownTestSuite() { fs::remove_all(work_dir()); }
};

}  // namespace

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("fuzz").code, 2);  // --config is required
  EXPECT_EQ(run("fixture no_such_fixture").code, 2);
  EXPECT_EQ(run("fuzz --config " + small_config().string() + " --algorithm nsga --out " +
                (work_dir() / "bad_alg").string())
                .code,
            2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST_F(Cli, BadConfigExitsTwoWithLocation) {
  const fs::path p = work_dir() / "bad.json";
  std::ofstream(p) << "{\n  \"weather\": {\"fog_density\": 500}\n}\n";
  const CliResult r = run("fuzz --config " + p.string() + " --out " + (work_dir() / "bad").string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("bad.json:2: weather.fog_density"), std::string::npos) << r.output;
  EXPECT_EQ(run("fuzz --config " + (work_dir() / "missing.json").string()).code, 5);
}

TEST_F(Cli, FuzzIsReproducibleAndRefusesToOverwrite) {
  const fs::path a = work_dir() / "run_a", b = work_dir() / "run_b";
  ASSERT_EQ(run("fuzz --config " + small_config().string() + " --seed 4 --out " + a.string()).code, 0);
  ASSERT_EQ(run("fuzz --config " + small_config().string() + " --seed 4 --parallel 2 --out " +
                b.string())
                .code,
            0);
  const std::string log = slurp(a / "results.jsonl");
  EXPECT_EQ(records(a / "results.jsonl"), records(b / "results.jsonl"));
  EXPECT_NE(log.find(fused::kResultSchema), std::string::npos);
  EXPECT_EQ(std::count(log.begin(), log.end(), '\n'), 17);
  EXPECT_EQ(run("fuzz --config " + small_config().string() + " --out " + a.string()).code, 5);
  EXPECT_EQ(run("fuzz --config " + small_config().string() + " --seed 4 --overwrite --out " +
                a.string())
                .code,
            0);
  EXPECT_EQ(records(a / "results.jsonl"), records(b / "results.jsonl"));
  for (const auto &e : fs::directory_iterator(a / "traces"))
    EXPECT_EQ(slurp(e.path()), slurp(b / "traces" / e.path().filename())) << e.path();
}

TEST_F(Cli, OutputDirectoryFromEnvironment) {
  const fs::path e = work_dir() / "env_out";
  ASSERT_EQ(run("fuzz --config " + small_config().string(), "FUSED_OUT=" + e.string()).code, 0);
  EXPECT_TRUE(fs::exists(e / "results.jsonl"));
  ASSERT_EQ(run("fuzz --config " + small_config().string()).code, 0);
  EXPECT_TRUE(fs::exists(work_dir() / "from_config" / "results.jsonl"));
}

TEST_F(Cli, AnalyzeWritesReportTables) {
  const fs::path a = work_dir() / "run_an";
  ASSERT_EQ(run("fuzz --config " + small_config().string() + " --out " + a.string()).code, 0);
  const CliResult r = run("analyze " + a.string() + " --sanity 2 --pre-crash-m 1.5");
  ASSERT_EQ(r.code, 0) << r.output;
  const fs::path rep = a / "report_m1.5";
  for (const char *f : {"generations.csv", "replays.csv", "ffusion_groups.csv", "ks.csv",
                        "sanity.csv", "ecdf_fusion_error.csv", "ecdf_no_collision.csv"})
    EXPECT_TRUE(fs::exists(rep / f)) << f;
  EXPECT_EQ(slurp(rep / "generations.csv").rfind("generation,evaluations", 0), 0u);
  EXPECT_EQ(run("analyze " + (work_dir() / "nothing_here").string()).code, 5);
}

TEST_F(Cli, AnalyzeReportsMissingTrace) {
  const fs::path a = work_dir() / "run_missing";
  ASSERT_EQ(run("fuzz --config " + small_config().string() + " --seed 9 --out " + a.string()).code, 0);
  if (fs::is_empty(a / "traces")) GTEST_SKIP() << "campaign produced no collision";
  fs::remove(fs::directory_iterator(a / "traces")->path());
  EXPECT_EQ(run("analyze " + a.string()).code, 5);
}

TEST_F(Cli, CompareWritesAggregateTables) {
  const fs::path out = work_dir() / "cmp";
  const CliResult r = run("compare --config " + small_config().string() +
                    " --algorithm ga --algorithm random --out " + out.string());
  ASSERT_EQ(r.code, 0) << r.output;
  const std::string csv = slurp(out / "comparison.csv");
  EXPECT_EQ(csv.rfind("label,algorithm,fusion,runs,evaluations", 0), 0u);
  EXPECT_NE(csv.find(",ga,"), std::string::npos);
  EXPECT_NE(csv.find(",random,"), std::string::npos);
  const std::string runs = slurp(out / "comparison_runs.csv");
  EXPECT_EQ(std::count(runs.begin(), runs.end(), '\n'), 5);  // header + 2 algorithms x 2 seeds
}

TEST_F(Cli, FixtureExplainsFrames) {
  const CliResult r = run("fixture camera_blind_cutin");
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("collision at"), std::string::npos);
  EXPECT_NE(r.output.find("fusion_error"), std::string::npos);
  const CliResult m = run("fixture cutin_truck_repair --out " + (work_dir() / "fx").string());
  ASSERT_EQ(m.code, 0) << m.output;
  EXPECT_NE(m.output.find("under mathworks_plus: no collision"), std::string::npos) << m.output;
  bool trace = false;
  for (const auto &e : fs::recursive_directory_iterator(work_dir() / "fx"))
    trace |= e.path().extension() == ".jsonl";
  EXPECT_TRUE(trace);
}
