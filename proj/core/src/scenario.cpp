#include "fixkit/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

#include "fixkit/hausdorff.hpp"

namespace fixkit::scenario {

using nlohmann::json;

namespace {

// Execution-time failures that carry their exit code.
struct Failure {
  int code;
  std::string message;
};

json witness_json(const FiniteMetricSpace& space, const Witness& w) {
  json out{{"x", space.label(w.x)}, {"y", space.label(w.y)},
           {"lhs", w.lhs}, {"rhs", w.rhs}};
  if (w.z) out["z"] = space.label(*w.z);
  return out;
}

json certificate_json(const FiniteMetricSpace& space, const Certificate& c) {
  json out{{"condition", c.condition},
           {"passed", c.passed},
           {"constant_name", c.constant_name},
           {"constant", c.constant},
           {"checked", c.checked}};
  if (c.witness) out["witness"] = witness_json(space, *c.witness);
  if (!c.reduction.empty()) out["reduction"] = c.reduction;
  if (!c.selections.empty()) {
    json sel = json::array();
    for (const auto& s : c.selections) {
      sel.push_back({{"x", space.label(s.x)}, {"y", space.label(s.y)},
                     {"z", space.label(s.z)}, {"lhs", s.lhs}, {"rhs", s.rhs}});
    }
    out["selections"] = std::move(sel);
  }
  return out;
}

json check_json(const CheckReport& r) {
  json out{{"check", r.check}, {"passed", r.passed}, {"worst_margin", r.worst_margin}};
  if (r.failed_at) out["failed_at"] = *r.failed_at;
  if (!r.witness.empty()) out["witness"] = r.witness;
  if (!r.detail.empty()) out["detail"] = r.detail;
  return out;
}

const Gauge& need_gauge(const Scenario& s, const std::string& what) {
  if (!s.gauge) throw Failure{kValidationError, what + " needs a 'gauge'"};
  return *s.gauge;
}

const PointPotential& need_point_potential(const Scenario& s, const std::string& what) {
  if (const auto* p = std::get_if<PointPotential>(&s.potential)) return *p;
  throw Failure{kValidationError, what + " needs a point potential"};
}

const PairPotential& need_pair_potential(const Scenario& s, const std::string& what) {
  if (const auto* p = std::get_if<PairPotential>(&s.potential)) return *p;
  throw Failure{kValidationError, what + " needs a pair potential"};
}

Certificate certify_condition(const Scenario& s, const std::string& condition) {
  const FiniteMetricSpace& space = s.space();
  const MapSpec& map = *s.map;
  const CertifyOptions opts{s.slack, s.grid};
  if (condition == "banach") return certify_banach(space, map, opts);
  if (condition == "nonexpansive") return certify_nonexpansive(space, map, opts);
  if (condition == "gauge_contraction") {
    return certify_gauge_contraction(space, map, need_gauge(s, condition), opts);
  }
  if (condition == "multivalued_gauge") {
    return certify_multivalued_gauge(space, map, need_gauge(s, condition), opts);
  }
  if (condition == "mizoguchi_takahashi") {
    return certify_mizoguchi_takahashi(space, map, need_gauge(s, condition), opts);
  }
  if (condition == "weak_contraction") {
    return certify_weak_contraction(space, map, need_gauge(s, condition), opts);
  }
  if (condition == "caristi") {
    return certify_caristi(space, map, need_point_potential(s, condition), opts);
  }
  if (condition == "pair_potential") {
    return certify_pair_potential(space, map, need_pair_potential(s, condition), opts);
  }
  if (condition == "multi_pair_potential") {
    return certify_multi_pair_potential(space, map, need_pair_potential(s, condition), opts);
  }
  throw Failure{kValidationError, "unknown condition '" + condition + "'"};
}

std::vector<std::string> point_labels(const FiniteMetricSpace& space,
                                      const std::vector<PointId>& pts) {
  std::vector<std::string> out;
  for (PointId p : pts) out.push_back(space.label(p));
  return out;
}

void run_certify(const Scenario& s, RunOutcome& out) {
  if (!s.condition) throw Failure{kValidationError, "certify needs a 'condition'"};
  const Certificate c = certify_condition(s, *s.condition);
  out.body["certificate"] = certificate_json(s.space(), c);
  out.key_constant = c.constant;
  const bool expected = s.expect_pass.value_or(true);
  if (c.passed != expected) {
    out.exit_code = kAssertionFailure;
    out.message = c.condition + (c.passed ? " passed, expected failure" : " failed");
  } else {
    out.message = c.condition + (c.passed ? " passed" : " failed as expected");
  }
}

void append_trace(const FiniteMetricSpace& space, const OrbitTrace& t, RunOutcome& out) {
  const bool per_iterate = t.potentials.size() == t.iterates.size();
  for (std::size_t n = 0; n < t.iterates.size(); ++n) {
    json rec{{"iteration", n}, {"point", space.label(t.iterates[n])},
             {"point_id", t.iterates[n]}};
    if (n < t.steps()) rec["step_distance"] = t.step_dists[n];
    if (per_iterate || n < t.potentials.size()) rec["potential"] = t.potentials[n];
    if (n < t.selections.size() && t.selections[n].epsilon0) {
      rec["epsilon0"] = *t.selections[n].epsilon0;
      rec["hausdorff"] = *t.selections[n].hausdorff;
    }
    out.trace_lines.push_back(rec.dump());
  }
  out.trace_lines.push_back(json{{"summary", true},
                                 {"status", to_string(t.status)},
                                 {"final_point", space.label(t.final_point())},
                                 {"iterations", t.steps()}}
                                .dump());
}

void run_solve(const Scenario& s, RunOutcome& out) {
  const FiniteMetricSpace& space = s.space();
  const MapSpec& map = *s.map;
  const std::string solver =
      s.solver.value_or(map.kind() == MapKind::kMulti ? "multi_orbit" : "picard");
  const PointId x0 = s.start.value_or(space.size() - 1);
  const SolveOptions opts{s.slack, s.grid, true};

  std::string gate_condition;
  if (solver == "picard") {
    if (map.kind() != MapKind::kSingle) throw Failure{kValidationError, "picard needs a single-valued map"};
    gate_condition = s.condition.value_or("banach");
  } else if (solver == "caristi_descent") {
    gate_condition = "caristi";
  } else if (solver == "multi_orbit") {
    gate_condition = "multivalued_gauge";
  } else {
    throw Failure{kValidationError, "unknown solver '" + solver + "'"};
  }
  out.body["solver"] = solver;
  out.body["start"] = space.label(x0);

  const Certificate gate = certify_condition(s, gate_condition);
  out.body["certificate"] = certificate_json(space, gate);
  out.key_constant = gate.constant;
  if (!gate.passed) {
    throw Failure{kGateRefusal, solver + " refused: " + gate_condition + " certificate failed"};
  }

  OrbitTrace trace;
  std::vector<json> checks;
  bool ok = true;
  try {
    if (solver == "picard") {
      trace = picard_solve(space, map, x0, s.stop);
    } else if (solver == "caristi_descent") {
      trace = caristi_descent_solve(space, map, need_point_potential(s, solver), x0, s.stop, opts);
    } else {
      const Gauge& eta = need_gauge(s, solver);
      trace = multi_orbit_solve(space, map.as_multi(), x0, eta, s.stop, opts);
      const PairPotential phi =
          std::holds_alternative<PairPotential>(s.potential)
              ? std::get<PairPotential>(s.potential)
              : build_potential_from_gauge(eta, PotentialUpgrade::kMidpoint, s.grid);
      const CheckReport tel = verify_telescoping(space, trace, phi, s.slack);
      out.body["potential"] = phi.label;
      checks.push_back(check_json(tel));
      ok = ok && tel.passed;
    }
  } catch (const SolverAbort& e) {
    out.body["abort"] = {{"step", e.step()}, {"detail", e.what()}};
    throw Failure{kAssertionFailure, e.what()};
  }
  append_trace(space, trace, out);

  const std::vector<PointId> fixed = brute_force_fixed_points(space, map);
  out.body["fixed_points"] = point_labels(space, fixed);
  const bool terminated = trace.status == OrbitStatus::kConverged ||
                          trace.status == OrbitStatus::kTolerance;
  if (trace.status == OrbitStatus::kConverged) {
    const bool sound = std::binary_search(fixed.begin(), fixed.end(), trace.final_point());
    checks.push_back({{"check", "soundness"}, {"passed", sound}});
    ok = ok && sound;
  }
  if (gate_condition == "banach" || gate_condition == "pair_potential") {
    const bool unique = fixed.size() == 1;
    checks.push_back({{"check", "uniqueness"}, {"passed", unique}});
    ok = ok && unique;
  }
  out.body["checks"] = checks;
  out.body["orbit"] = {{"status", to_string(trace.status)},
                       {"final_point", space.label(trace.final_point())},
                       {"iterations", trace.steps()}};
  out.iterations = trace.steps();
  if (!terminated) {
    out.exit_code = kAssertionFailure;
    out.message = std::string("orbit ended with status ") + to_string(trace.status);
  } else if (!ok) {
    out.exit_code = kAssertionFailure;
    out.message = "post-solve check failed";
  } else {
    out.message = "reached " + space.label(trace.final_point()) + " in " +
                  std::to_string(trace.steps()) + " steps";
  }
}

void run_bellman(const Scenario& s, RunOutcome& out) {
  if (!s.bellman) throw Failure{kValidationError, "bellman needs a 'bellman' block"};
  const BellmanConfig& cfg = *s.bellman;
  const DPInstance& inst = cfg.instance;
  const CheckReport im = check_im_condition(inst, cfg.sampling);
  out.body["im_condition"] = check_json(im);
  out.body["rho"] = inst.rho().label();
  out.body["recursion"] = inst.recursion().label;
  out.body["seed"] = cfg.sampling.seed;
  if (cfg.expect_im_condition && *cfg.expect_im_condition != im.passed) {
    out.exit_code = kAssertionFailure;
    out.message = im.passed ? "condition passed, expected a violation" : "condition violated";
    return;
  }

  ValueIterationResult r;
  try {
    r = value_iterate(inst, cfg.h0, s.stop, {im.passed, 1e-10});
  } catch (const SolverAbort& e) {
    out.body["abort"] = {{"step", e.step()}, {"detail", e.what()}};
    throw Failure{kAssertionFailure, e.what()};
  }
  for (std::size_t n = 0; n < r.residuals.size(); ++n) {
    out.trace_lines.push_back(json{{"iteration", n}, {"residual", r.residuals[n]}}.dump());
  }
  json solution = json::object();
  json policy = json::object();
  for (std::size_t x = 0; x < inst.state_count(); ++x) {
    solution[inst.states()[x]] = r.solution[x];
    policy[inst.states()[x]] = inst.decisions()[r.policy[x]];
  }
  out.trace_lines.push_back(json{{"summary", true}, {"converged", r.converged},
                                 {"iterations", r.iterations},
                                 {"final_residual", r.final_residual}}
                                .dump());
  out.body["residuals"] = r.residuals;
  out.body["solution"] = solution;
  out.body["policy"] = policy;
  out.body["iterations"] = r.iterations;
  out.body["final_residual"] = r.final_residual;
  out.body["converged"] = r.converged;
  out.key_constant = r.final_residual;
  out.iterations = r.iterations;
  if (!r.converged) {
    out.exit_code = kAssertionFailure;
    out.message = "value iteration hit max_iter";
  } else {
    out.message = "converged in " + std::to_string(r.iterations) + " iterations";
  }
}

void run_oracle(const Scenario& s, RunOutcome& out) {
  const FiniteMetricSpace& space = s.space();
  const std::vector<PointId> fixed = brute_force_fixed_points(space, *s.map);
  out.body["fixed_points"] = point_labels(space, fixed);
  out.key_constant = static_cast<double>(fixed.size());
  if (space.size() <= kDefaultHausdorffAxiomBound) {
    const ValidationReport axioms = verify_hausdorff_axioms(space);
    json violations = json::array();
    for (const auto& v : axioms.violations) {
      violations.push_back({{"rule", v.rule}, {"witness", v.witness}, {"detail", v.detail}});
    }
    out.body["hausdorff_axioms"] = {{"valid", axioms.valid()}, {"violations", violations}};
  }
  const bool expected_nonempty = s.expect_pass.value_or(!fixed.empty());
  if (expected_nonempty != !fixed.empty()) {
    out.exit_code = kAssertionFailure;
    out.message = fixed.empty() ? "no fixed point" : "fixed points exist, expected none";
  } else {
    out.message = std::to_string(fixed.size()) + " fixed point(s)";
  }
}

std::string number_text(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << content;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

}  // namespace

RunOutcome execute(const Scenario& s) {
  RunOutcome out;
  out.name = s.name;
  out.action = s.action;
  out.body = {{"scenario", s.name}, {"sha256", s.sha256}, {"action", to_string(s.action)}};
  try {
    switch (s.action) {
      case Action::kCertify: run_certify(s, out); break;
      case Action::kSolve: run_solve(s, out); break;
      case Action::kBellman: run_bellman(s, out); break;
      case Action::kOracle: run_oracle(s, out); break;
      case Action::kSuite: {
        const SuiteResult suite = run_suite(s.directory, std::nullopt);
        json rows = json::array();
        for (const auto& r : suite.rows) {
          rows.push_back({{"name", r.name}, {"action", r.action},
                          {"passed", r.passed}, {"exit_code", r.exit_code}});
        }
        out.body["rows"] = rows;
        out.exit_code = suite.exit_code;
        out.message = std::to_string(suite.rows.size()) + " scenario(s)";
        break;
      }
    }
  } catch (const Failure& f) {
    out.exit_code = f.code;
    out.message = f.message;
  } catch (const GateRefusal& e) {
    out.exit_code = kGateRefusal;
    out.message = e.what();
  } catch (const NonFiniteValueError& e) {
    out.exit_code = kAssertionFailure;
    out.message = e.what();
  } catch (const SolverAbort& e) {
    out.exit_code = kAssertionFailure;
    out.message = e.what();
  } catch (const Error& e) {
    out.exit_code = kValidationError;
    out.message = e.what();
  }
  out.body["exit_code"] = out.exit_code;
  out.body["message"] = out.message;
  out.body["passed"] = out.exit_code == kOk;
  return out;
}

RunOutcome run_scenario(const std::filesystem::path& config,
                        const Overrides& overrides, const OutputPaths& outputs) {
  RunOutcome out;
  try {
    const Scenario s = load_scenario(config, overrides);
    out = execute(s);
  } catch (const ParseError& e) {
    out.exit_code = kParseError;
    out.message = e.what();
  } catch (const Error& e) {
    out.exit_code = kValidationError;
    out.message = e.what();
  }
  if (out.name.empty()) {
    out.name = config.stem().string();
    out.body = {{"scenario", out.name}, {"exit_code", out.exit_code},
                {"message", out.message}, {"passed", false}};
  }
  if (outputs.trace) {
    out.body["trace"] = outputs.trace->filename().string();
    write_file(*outputs.trace, join_lines(out.trace_lines));
  }
  if (outputs.report) write_file(*outputs.report, format_report(out.body));
  return out;
}

SuiteResult run_suite(const std::filesystem::path& directory,
                      const std::optional<std::filesystem::path>& out_dir,
                      const Overrides& overrides) {
  if (!std::filesystem::is_directory(directory)) {
    throw ValidationError("suite directory not found: " + directory.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(directory)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  SuiteResult result;
  for (const auto& file : files) {
    const auto start = std::chrono::steady_clock::now();
    RunOutcome o;
    try {
      const Scenario s = load_scenario(file, overrides);
      if (s.action == Action::kSuite) {
        o.name = s.name;
        o.action = s.action;
        o.exit_code = kValidationError;
        o.message = "nested suites are not run";
        o.body = {{"scenario", s.name}, {"exit_code", o.exit_code}, {"message", o.message}};
      } else {
        o = execute(s);
      }
    } catch (const ParseError& e) {
      o.exit_code = kParseError;
      o.message = e.what();
    } catch (const Error& e) {
      o.exit_code = kValidationError;
      o.message = e.what();
    }
    if (o.name.empty()) {
      o.name = file.stem().string();
      o.body = {{"scenario", o.name}, {"exit_code", o.exit_code},
                {"message", o.message}, {"passed", false}};
    }
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start).count();
    if (out_dir) {
      if (!o.trace_lines.empty()) {
        const std::string trace = o.name + ".trace.jsonl";
        o.body["trace"] = trace;
        write_file(*out_dir / trace, join_lines(o.trace_lines));
      }
      write_file(*out_dir / (o.name + ".report"), format_report(o.body));
    }
    result.rows.push_back({o.name, o.action ? to_string(*o.action) : "", o.exit_code == kOk,
                           o.exit_code, o.key_constant, o.iterations, ms, o.message});
    if (o.exit_code != kOk) result.exit_code = kAssertionFailure;
  }
  std::stable_sort(result.rows.begin(), result.rows.end(),
                   [](const SuiteRow& a, const SuiteRow& b) { return a.name < b.name; });
  if (out_dir) write_file(*out_dir / "summary.csv", summary_csv(result));
  return result;
}

std::string summary_csv(const SuiteResult& result) {
  std::ostringstream os;
  os << "name,action,passed,exit_code,key_constant,iterations,wall_time_ms,message\n";
  for (const auto& r : result.rows) {
    os << csv_field(r.name) << ',' << r.action << ',' << (r.passed ? "true" : "false")
       << ',' << r.exit_code << ','
       << (r.key_constant ? number_text(*r.key_constant) : "") << ','
       << (r.iterations ? std::to_string(*r.iterations) : "") << ','
       << number_text(std::round(r.wall_ms * 1000.0) / 1000.0) << ','
       << csv_field(r.message) << '\n';
  }
  return os.str();
}

std::string format_report(const json& body) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return std::string("# fixkit report generated ") + stamp + "\n" + body.dump(2) + "\n";
}

}  // namespace fixkit::scenario
