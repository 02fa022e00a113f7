#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "fixkit/bellman.hpp"
#include "fixkit/certifier.hpp"
#include "fixkit/error.hpp"
#include "fixkit/gauge.hpp"
#include "fixkit/metric.hpp"
#include "fixkit/solver.hpp"

namespace fixkit::scenario {

// Process exit codes shared by the CLI and suite summaries.
enum ExitCode : int {
  kOk = 0,
  kAssertionFailure = 1,
  kValidationError = 2,
  kParseError = 3,
  kGateRefusal = 4,
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

enum class Action { kCertify, kSolve, kBellman, kOracle, kSuite };

const char* to_string(Action a);

struct BellmanConfig {
  DPInstance instance;
  BoundedFunction h0;
  ImSampling sampling;
  std::optional<bool> expect_im_condition;
};

using Potential = std::variant<std::monostate, PointPotential, PairPotential>;

// A fully resolved scenario: every label looked up, every gauge built.
struct Scenario {
  std::string name;
  Action action = Action::kCertify;
  std::string sha256;  // hex digest of the config file bytes

  std::optional<LineSpace> line;
  std::optional<FiniteMetricSpace> table;
  std::optional<MapSpec> map;
  std::optional<Gauge> gauge;
  Potential potential;
  std::optional<std::string> condition;
  std::optional<std::string> solver;
  std::optional<PointId> start;
  std::optional<bool> expect_pass;
  std::optional<BellmanConfig> bellman;
  std::filesystem::path directory;  // suite action

  StopRule stop;
  Slack slack;
  CheckGrid grid;
  std::uint64_t seed = 0;

  bool has_space() const noexcept { return line || table; }
  const FiniteMetricSpace& space() const;
};

// Command line values that take precedence over the config file.
struct Overrides {
  std::optional<Action> action;  // the CLI subcommand
  std::optional<std::string> condition;
  std::optional<double> tol;
  std::optional<std::size_t> max_iter;
  std::optional<std::uint64_t> seed;
  std::optional<double> slack;
};

// Reads and resolves a scenario file. Throws ParseError for unreadable or
// malformed documents and ValidationError for well-formed documents that do
// not describe a usable scenario.
Scenario load_scenario(const std::filesystem::path& path,
                       const Overrides& overrides = {});

// Same, from an in-memory document; `origin` names it in messages and
// `sha256` is recorded in reports.
Scenario resolve_scenario(const nlohmann::json& doc, const std::string& origin,
                          const std::string& sha256,
                          const Overrides& overrides = {});

std::string sha256_hex(const std::string& bytes);

struct OutputPaths {
  std::optional<std::filesystem::path> report;
  std::optional<std::filesystem::path> trace;
};

struct RunOutcome {
  std::string name;
  std::optional<Action> action;
  int exit_code = kOk;
  std::string message;
  std::optional<double> key_constant;
  std::optional<std::size_t> iterations;
  nlohmann::json body;                  // deterministic report body
  std::vector<std::string> trace_lines;  // line-delimited trace records
};

// Executes an already loaded scenario. Never throws for scenario-level
// failures; they become exit codes.
RunOutcome execute(const Scenario& scenario);

// Loads, executes and writes the report (header line + JSON body) and the
// trace when paths are given.
RunOutcome run_scenario(const std::filesystem::path& config,
                        const Overrides& overrides = {},
                        const OutputPaths& outputs = {});

struct SuiteRow {
  std::string name;
  std::string action;
  bool passed = false;
  int exit_code = kOk;
  std::optional<double> key_constant;
  std::optional<std::size_t> iterations;
  double wall_ms = 0.0;
  std::string message;
};

struct SuiteResult {
  std::vector<SuiteRow> rows;  // sorted by name
  int exit_code = kOk;         // 0 iff every row passed
};

// Runs every *.json scenario in `directory`. With `out_dir`, writes
// <name>.report, <name>.trace.jsonl and summary.csv there.
SuiteResult run_suite(const std::filesystem::path& directory,
                      const std::optional<std::filesystem::path>& out_dir,
                      const Overrides& overrides = {});

std::string summary_csv(const SuiteResult& result);

// "# fixkit report generated <UTC time>" followed by the indented body.
std::string format_report(const nlohmann::json& body);

}  // namespace fixkit::scenario
