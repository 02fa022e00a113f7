// fixkit: run fixed-point scenarios from the command line.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fixkit/scenario.hpp"

namespace fs = std::filesystem;
using namespace fixkit::scenario;

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::string report;
  Overrides overrides;
};

CLI::App* add_action(CLI::App& app, const char* name, const char* help, Flags& f) {
  CLI::App* sub = app.add_subcommand(name, help);
  sub->add_option("--config", f.config, "Scenario file")->required();
  sub->add_option("--out", f.out, "Output file");
  sub->add_option("--tol", f.overrides.tol, "Step tolerance");
  sub->add_option("--max-iter", f.overrides.max_iter, "Iteration cap");
  sub->add_option("--seed", f.overrides.seed, "Seed for sampled checks");
  sub->add_option("--slack", f.overrides.slack, "Absolute slack for inequality checks");
  return sub;
}

int finish(const RunOutcome& o, bool print_body) {
  if (print_body) std::cout << o.body.dump(2) << "\n";
  std::cerr << o.name << ": " << (o.exit_code == kOk ? "ok" : "FAILED") << " (exit "
            << o.exit_code << ") " << o.message << "\n";
  return o.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fixkit: certify contractive maps and compute their fixed points"};
  app.require_subcommand(1);
  Flags f;

  CLI::App* certify = add_action(app, "certify", "Check a contractive condition", f);
  certify->add_option("--condition", f.overrides.condition, "Condition to certify");
  CLI::App* oracle = add_action(app, "oracle", "Enumerate fixed points by brute force", f);
  CLI::App* solve = add_action(app, "solve", "Run a certified solver", f);
  solve->add_option("--report", f.report, "Report file (default <out>.report)");
  CLI::App* bellman = add_action(app, "bellman", "Value iteration on a dynamic program", f);
  bellman->add_option("--report", f.report, "Report file (default <out>.report)");

  std::string suite_dir;
  CLI::App* suite = app.add_subcommand("suite", "Run every scenario in a directory");
  suite->add_option("--config", suite_dir, "Scenario directory or suite scenario")->required();
  suite->add_option("--out", f.out, "Directory for reports, traces and summary.csv");
  suite->add_option("--tol", f.overrides.tol, "Step tolerance");
  suite->add_option("--max-iter", f.overrides.max_iter, "Iteration cap");
  suite->add_option("--seed", f.overrides.seed, "Seed for sampled checks");
  suite->add_option("--slack", f.overrides.slack, "Absolute slack for inequality checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kValidationError;
  }

  try {
    if (suite->parsed()) {
      fs::path dir = suite_dir;
      if (fs::is_regular_file(dir)) {
        const Scenario s = load_scenario(dir, f.overrides);
        if (s.action != Action::kSuite) {
          std::cerr << dir << ": not a suite scenario\n";
          return kValidationError;
        }
        dir = s.directory;
      }
      std::optional<fs::path> out;
      if (!f.out.empty()) out = f.out;
      const SuiteResult r = run_suite(dir, out, f.overrides);
      std::cout << summary_csv(r);
      return r.exit_code;
    }

    OutputPaths paths;
    const bool writes_trace = solve->parsed() || bellman->parsed();
    if (!f.out.empty()) {
      if (writes_trace) {
        paths.trace = f.out;
        paths.report = f.report.empty() ? f.out + ".report" : f.report;
      } else {
        paths.report = f.out;
      }
    } else if (!f.report.empty()) {
      paths.report = f.report;
    }

    f.overrides.action = certify->parsed()  ? Action::kCertify
                         : oracle->parsed() ? Action::kOracle
                         : solve->parsed()  ? Action::kSolve
                                            : Action::kBellman;
    return finish(run_scenario(f.config, f.overrides, paths), !paths.report.has_value());
  } catch (const std::exception& e) {
    std::cerr << "fixkit: " << e.what() << "\n";
    return kValidationError;
  }
}
