#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "fixkit/scenario.hpp"

namespace fixkit::scenario {
namespace {

namespace fs = std::filesystem;

const fs::path kScenarios = FIXKIT_SCENARIO_DIR;

// Fresh scratch directory per test, removed afterwards.
class ScenarioFixture : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           (std::string("fixkit_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) const {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  fs::path dir_;
};

std::string read(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Report minus its timestamp line.
std::string body_of(const fs::path& p) {
  const std::string text = read(p);
  return text.substr(text.find('\n') + 1);
}

const char* kIdentitySolve = R"({
  "name": "identity_solve",
  "action": "solve",
  "space": {"line": [0, 1, 2]},
  "map": {"kind": "single", "function": {"kind": "identity"}},
  "solver": "picard"
})";

TEST(Scenario, BanachDemoSolves) {
  const auto out = run_scenario(kScenarios / "banach_half.json");
  EXPECT_EQ(out.exit_code, kOk) << out.message;
  ASSERT_TRUE(out.key_constant.has_value());
  EXPECT_EQ(*out.key_constant, 0.5);
  EXPECT_EQ(out.iterations, 10u);
  EXPECT_EQ(out.body["orbit"]["final_point"], "0");
  EXPECT_EQ(out.body["sha256"].get<std::string>().size(), 64u);
  // one record per iterate plus the summary line
  EXPECT_EQ(out.trace_lines.size(), 12u);
}

TEST(Scenario, CliActionOverridesTheConfig) {
  Overrides o;
  o.action = Action::kCertify;
  const auto out = run_scenario(kScenarios / "banach_half.json", o);
  EXPECT_EQ(out.exit_code, kOk) << out.message;
  EXPECT_EQ(out.body["action"], "certify");
  EXPECT_EQ(out.body["certificate"]["condition"], "banach");
}

TEST(Scenario, OracleReportsFixedPoints) {
  Overrides o;
  o.action = Action::kOracle;
  const auto out = run_scenario(kScenarios / "multi_half_third.json", o);
  EXPECT_EQ(out.exit_code, kOk) << out.message;
  EXPECT_EQ(out.body["fixed_points"], nlohmann::json::array({"0"}));
}

TEST_F(ScenarioFixture, IdentityMapIsRefusedByTheBanachGate) {
  const auto out = run_scenario(write("id.json", kIdentitySolve));
  EXPECT_EQ(out.exit_code, kGateRefusal);
}

TEST_F(ScenarioFixture, MalformedJsonIsAParseError) {
  EXPECT_EQ(run_scenario(write("bad.json", "{\"name\": ")).exit_code, kParseError);
  EXPECT_EQ(run_scenario(dir_ / "missing.json").exit_code, kParseError);
}

TEST_F(ScenarioFixture, ValidationErrors) {
  const char* cases[] = {
      R"({"action": "fly"})",
      R"({"action": "certify", "space": {"line": [0, 1]}})",
      R"({"action": "certify", "space": {"line": [0, 1]},
          "map": {"kind": "single", "images": {"0": "7"}}, "condition": "banach"})",
      R"({"action": "certify", "space": {"table": {"points": ["a", "b"], "dist": [[0, 1], [2, 0]]}},
          "map": {"kind": "single", "images": {"a": "a", "b": "a"}}, "condition": "banach"})",
      R"({"action": "certify", "space": {"line": [0, 1]},
          "map": {"kind": "single", "function": {"kind": "identity"}},
          "condition": "gauge_contraction", "gauge": {"kind": "linear", "alpha": 1.5}})",
      R"({"action": "bellman"})",
  };
  int i = 0;
  for (const char* text : cases) {
    const auto out = run_scenario(write("case" + std::to_string(i++) + ".json", text));
    EXPECT_EQ(out.exit_code, kValidationError) << text << "\n" << out.message;
  }
}

TEST_F(ScenarioFixture, CertifyExpectationMismatchIsAnAssertionFailure) {
  const auto p = write("grid.json", R"({
    "action": "certify",
    "space": {"grid": {"lower": 0, "upper": 1, "resolution": 11}},
    "map": {"kind": "single", "function": {"kind": "scale", "factor": 0.5}},
    "condition": "banach"
  })");
  const auto out = run_scenario(p);
  EXPECT_EQ(out.exit_code, kAssertionFailure);
  EXPECT_EQ(out.body["certificate"]["passed"], false);
}

TEST_F(ScenarioFixture, ReportAndTraceFiles) {
  const auto report = dir_ / "r.report";
  const auto trace = dir_ / "r.trace.jsonl";
  run_scenario(kScenarios / "banach_half.json", {}, {report, trace});
  const std::string text = read(report);
  EXPECT_EQ(text.rfind("# fixkit report generated ", 0), 0u);
  const auto body = nlohmann::json::parse(body_of(report));
  EXPECT_EQ(body["trace"], "r.trace.jsonl");
  std::ifstream in(trace);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    EXPECT_NO_THROW(nlohmann::json::parse(line));
    ++lines;
  }
  EXPECT_EQ(lines, 12);
}

TEST_F(ScenarioFixture, ReportsAreDeterministic) {
  for (const char* name : {"banach_half", "multi_half_third", "bellman_three_state"}) {
    const auto a = dir_ / (std::string(name) + ".a");
    const auto b = dir_ / (std::string(name) + ".b");
    run_scenario(kScenarios / (std::string(name) + ".json"), {}, {a, std::nullopt});
    run_scenario(kScenarios / (std::string(name) + ".json"), {}, {b, std::nullopt});
    EXPECT_EQ(body_of(a), body_of(b)) << name;
  }
}

TEST(Scenario, ShaCoversTheRawBytes) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_F(ScenarioFixture, BundledSuitePasses) {
  const auto r = run_suite(kScenarios, dir_);
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_EQ(r.exit_code, kOk);
  for (const auto& row : r.rows) EXPECT_TRUE(row.passed) << row.name << ": " << row.message;
  EXPECT_EQ(r.rows[0].name, "banach_half");
  EXPECT_TRUE(fs::exists(dir_ / "summary.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "bellman_three_state.report"));
  EXPECT_TRUE(fs::exists(dir_ / "multi_half_third.trace.jsonl"));
  const std::string csv = read(dir_ / "summary.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "name,action,passed,exit_code,key_constant,iterations,wall_time_ms,message");
}

TEST_F(ScenarioFixture, EmptySuiteIsVacuouslyGreen) {
  const auto r = run_suite(dir_, std::nullopt);
  EXPECT_TRUE(r.rows.empty());
  EXPECT_EQ(r.exit_code, kOk);
}

TEST_F(ScenarioFixture, OneFailingScenarioFailsTheSuite) {
  fs::copy_file(kScenarios / "banach_half.json", dir_ / "banach_half.json");
  write("id.json", kIdentitySolve);
  write("nested.json", R"({"action": "suite", "directory": "."})");
  const auto r = run_suite(dir_, std::nullopt);
  ASSERT_EQ(r.rows.size(), 3u);
  EXPECT_NE(r.exit_code, kOk);
  EXPECT_EQ(r.rows[0].name, "banach_half");
  EXPECT_TRUE(r.rows[0].passed);
  EXPECT_EQ(r.rows[1].exit_code, kGateRefusal);
  EXPECT_EQ(r.rows[2].exit_code, kValidationError);
}

TEST_F(ScenarioFixture, OverridesWin) {
  Overrides o;
  o.max_iter = 3;
  const auto out = run_scenario(kScenarios / "banach_half.json", o);
  EXPECT_EQ(out.exit_code, kAssertionFailure);
  EXPECT_EQ(out.iterations, 3u);
}

#ifdef FIXKIT_CLI
int cli(const std::string& args) {
  const std::string cmd = std::string("\"") + FIXKIT_CLI + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST_F(ScenarioFixture, CliExitCodes) {
  const std::string demo = (kScenarios / "banach_half.json").string();
  EXPECT_EQ(cli("solve --config " + demo), kOk);
  EXPECT_EQ(cli("certify --config " + demo + " --condition nonexpansive"), kOk);
  EXPECT_EQ(cli("solve --config " + write("id.json", kIdentitySolve).string()), kGateRefusal);
  EXPECT_EQ(cli("oracle --config " + write("bad.json", "[").string()), kParseError);
  EXPECT_EQ(cli("solve --bogus"), kValidationError);
  EXPECT_EQ(cli("suite --config " + kScenarios.string() + " --out " + dir_.string()), kOk);
  EXPECT_TRUE(fs::exists(dir_ / "summary.csv"));
}

TEST_F(ScenarioFixture, CliWritesTraceAndReport) {
  const auto trace = dir_ / "t.jsonl";
  EXPECT_EQ(cli("solve --config " + (kScenarios / "multi_half_third.json").string() + " --out " +
                trace.string()),
            kOk);
  EXPECT_TRUE(fs::exists(trace));
  EXPECT_TRUE(fs::exists(dir_ / "t.jsonl.report"));
}
#endif

}  // namespace
}  // namespace fixkit::scenario
