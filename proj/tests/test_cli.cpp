#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "slei/cli.hpp"
#include "slei/scenario.hpp"

using namespace slei;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "slei3d");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  testing::internal::CaptureStdout();
  const int rc = run_cli(static_cast<int>(argv.size()), argv.data());
  testing::internal::GetCapturedStdout();
  return rc;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = slurp(e.path());
  return out;
}

class Cli : public testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("slei_cli_" + std::string(testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

}  // namespace

TEST_F(Cli, MissingScenarioFileNamesThePath) {
  const auto missing = (dir_ / "nope.json").string();
  testing::internal::CaptureStderr();
  const int rc = cli({"--scenario", missing});
  const auto err = testing::internal::GetCapturedStderr();
  EXPECT_EQ(rc, 2);
  EXPECT_NE(err.find(missing), std::string::npos) << err;
}

TEST_F(Cli, BadArgumentsAreConfigErrors) {
  testing::internal::CaptureStderr();
  EXPECT_EQ(cli({"--scenario", "builtin:small", "--mode", "fast"}), 2);
  EXPECT_EQ(cli({"--scenario", "builtin:small", "--fail", "3"}), 2);
  EXPECT_EQ(cli({"--seeds", "0", "--scenario", "builtin:small"}), 2);
  EXPECT_EQ(cli({"gen", "--size", "10x10"}), 2);
  EXPECT_EQ(cli({}), 2);
  testing::internal::GetCapturedStderr();
}

TEST_F(Cli, GenIsByteIdenticalAndRoundTrips) {
  const auto a = dir_ / "a.json", b = dir_ / "b.json";
  ASSERT_EQ(cli({"gen", "--seed", "9", "--bboxes", "3", "--features", "8", "--out", a.string()}), 0);
  ASSERT_EQ(cli({"gen", "--seed", "9", "--bboxes", "3", "--features", "8", "--out", b.string()}), 0);
  const auto text = slurp(a);
  EXPECT_EQ(text, slurp(b));
  const auto cfg = load_scenario(a);
  EXPECT_EQ(scenario_text(cfg), text);
  EXPECT_EQ(cfg.world.bboxes.size(), 3u);
  EXPECT_EQ(cfg.world.features.size(), 8u);
  EXPECT_EQ(scenario_text(parse_scenario(text)), text);
}

TEST_F(Cli, MalformedScenarioRejected) {
  const auto p = dir_ / "bad.json";
  std::ofstream(p) << "{\n  \"world\": [1, 2,\n}\n";
  testing::internal::CaptureStderr();
  EXPECT_EQ(cli({"--scenario", p.string()}), 2);
  testing::internal::GetCapturedStderr();
  EXPECT_THROW(parse_scenario("{\"robots\": 3}"), ConfigError);
}

TEST_F(Cli, SameSeedSameOutputDirectory) {
  const auto scen = dir_ / "tiny.json";
  ASSERT_EQ(cli({"gen", "--seed", "3", "--size", "16x16x6", "--bboxes", "2", "--features", "5", "--out", scen.string()}), 0);
  ASSERT_EQ(cli({"--scenario", scen.string(), "--seed", "7", "--out", (dir_ / "r1").string()}), 0);
  ASSERT_EQ(cli({"--scenario", scen.string(), "--seed", "7", "--out", (dir_ / "r2").string()}), 0);
  const auto t1 = tree(dir_ / "r1"), t2 = tree(dir_ / "r2");
  EXPECT_EQ(t1.size(), 5u);
  EXPECT_EQ(t1, t2);
}

TEST_F(Cli, CompareSummaryMatchesPerRunMetrics) {
  const auto out = dir_ / "cmp";
  ASSERT_EQ(cli({"--scenario", "builtin:small", "--seed", "1", "--seeds", "3", "--compare", "--out", out.string()}), 0);
  const auto summary = json::parse(slurp(out / "summary.json"));
  ASSERT_EQ(summary.size(), 3u);
  for (const auto& row : summary) {
    const std::string mode = row["mode"];
    double ticks = 0, idle = 0, gm = 0;
    Tick tmax = 0;
    int finished = 0;
    for (int s = 1; s <= 3; ++s) {
      const auto m = json::parse(slurp(out / mode / ("seed_" + std::to_string(s)) / "metrics.json"));
      ticks += m["finish_tick"].get<double>();
      idle += m["total_idle"].get<double>();
      gm += m["gcs_explorer_meetings"].get<double>();
      tmax = std::max(tmax, m["finish_tick"].get<Tick>());
      finished += m["finished"].get<bool>() ? 1 : 0;
    }
    EXPECT_EQ(row["runs"], 3) << mode;
    EXPECT_EQ(row["finished"], finished) << mode;
    EXPECT_NEAR(row["finish_tick"]["mean"].get<double>(), ticks / 3, 1e-9) << mode;
    EXPECT_EQ(row["finish_tick"]["max"].get<Tick>(), tmax) << mode;
    EXPECT_NEAR(row["total_idle"]["mean"].get<double>(), idle / 3, 1e-9) << mode;
    EXPECT_NEAR(row["gcs_explorer_meetings_mean"].get<double>(), gm / 3, 1e-9) << mode;
  }
}

TEST_F(Cli, IncompleteMissionExitsOne) {
  EXPECT_EQ(cli({"--scenario", "builtin:small", "--ticks", "20"}), 1);
}

TEST(Summarize, MeanAndSpread) {
  const std::vector<json> runs{
      {{"finished", true}, {"finish_rate", 1.0}, {"finish_tick", 100}, {"gcs_explorer_meetings", 4},
       {"explorer_inspector_meetings", 10}, {"total_idle", 50}},
      {{"finished", false}, {"finish_rate", 0.5}, {"finish_tick", 300}, {"gcs_explorer_meetings", 6},
       {"explorer_inspector_meetings", 12}, {"total_idle", 150}}};
  const auto s = summarize(Mode::SleiFix, runs);
  EXPECT_EQ(s.runs, 2);
  EXPECT_EQ(s.finished, 1);
  EXPECT_DOUBLE_EQ(s.finish_rate_mean, 0.75);
  EXPECT_DOUBLE_EQ(s.finish_tick_mean, 200.0);
  EXPECT_DOUBLE_EQ(s.finish_tick_std, 100.0);
  EXPECT_EQ(s.finish_tick_max, 300);
  EXPECT_EQ(s.idle_min, 50);
  EXPECT_DOUBLE_EQ(s.gcs_meetings_mean, 5.0);
}
