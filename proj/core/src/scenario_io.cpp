// Scenario documents: JSON parsing and resolution into library objects.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "fixkit/scenario.hpp"

namespace fixkit::scenario {

using nlohmann::json;

const char* to_string(Action a) {
  switch (a) {
    case Action::kCertify: return "certify";
    case Action::kSolve: return "solve";
    case Action::kBellman: return "bellman";
    case Action::kOracle: return "oracle";
    case Action::kSuite: return "suite";
  }
  return "unknown";
}

const FiniteMetricSpace& Scenario::space() const {
  if (line) return line->space();
  if (table) return *table;
  throw ValidationError("scenario '" + name + "' has no space");
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw Error("sha256 computation failed");
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) {
    os << std::hex << std::setw(2) << std::setfill('0')
       << static_cast<int>(digest[i]);
  }
  return os.str();
}

namespace {

[[noreturn]] void invalid(const std::string& where, const std::string& what) {
  throw ValidationError(where + ": " + what);
}

const json& member(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    invalid(where, std::string("missing field '") + key + "'");
  }
  return obj.at(key);
}

double number(const json& obj, const char* key, const std::string& where) {
  const json& v = member(obj, key, where);
  if (!v.is_number()) invalid(where, std::string("'") + key + "' must be a number");
  return v.get<double>();
}

double number_or(const json& obj, const char* key, double fallback,
                 const std::string& where) {
  return obj.contains(key) ? number(obj, key, where) : fallback;
}

std::string text(const json& obj, const char* key, const std::string& where) {
  const json& v = member(obj, key, where);
  if (!v.is_string()) invalid(where, std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

std::size_t count(const json& v, const std::string& where) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    invalid(where, "expected a nonnegative integer");
  }
  return v.get<std::size_t>();
}

// ---------------------------------------------------------------- spaces

void read_space(const json& spec, Scenario& s) {
  const std::string where = s.name + ".space";
  if (!spec.is_object()) invalid(where, "must be an object");
  if (spec.contains("grid")) {
    const json& g = spec.at("grid");
    GridSpec grid{number(g, "lower", where), number(g, "upper", where),
                  count(member(g, "resolution", where), where + ".resolution")};
    s.line.emplace(LineSpace::grid(grid));
  } else if (spec.contains("line")) {
    const json& pts = spec.at("line");
    if (!pts.is_array()) invalid(where, "'line' must be an array of numbers");
    std::vector<double> coords;
    for (const auto& p : pts) {
      if (!p.is_number()) invalid(where, "'line' must be an array of numbers");
      coords.push_back(p.get<double>());
    }
    s.line.emplace(std::move(coords));
  } else if (spec.contains("table")) {
    const json& t = spec.at("table");
    const json& labels = member(t, "points", where);
    const json& rows = member(t, "dist", where);
    if (!labels.is_array() || !rows.is_array() || rows.size() != labels.size()) {
      invalid(where, "table needs 'points' and a square 'dist' matrix");
    }
    std::vector<std::string> names;
    for (const auto& l : labels) {
      if (!l.is_string()) invalid(where, "point labels must be strings");
      names.push_back(l.get<std::string>());
    }
    std::vector<double> flat;
    for (const auto& row : rows) {
      if (!row.is_array() || row.size() != names.size()) {
        invalid(where, "'dist' must be a square matrix");
      }
      for (const auto& v : row) {
        if (!v.is_number()) invalid(where, "'dist' entries must be numbers");
        flat.push_back(v.get<double>());
      }
    }
    s.table.emplace(std::move(names), std::move(flat), TableOrigin::kExplicit);
    const ValidationReport report = validate_metric(*s.table);
    if (!report.valid()) {
      const Violation& v = report.violations.front();
      invalid(where, "not a metric: " + v.rule + " violated (" + v.detail + ")");
    }
  } else {
    invalid(where, "expected one of 'grid', 'line', 'table'");
  }
}

PointId point_ref(const json& ref, const Scenario& s, const std::string& where) {
  const FiniteMetricSpace& space = s.space();
  if (ref.is_string()) return space.find(ref.get<std::string>());
  if (ref.is_number() && s.line) {
    const double v = ref.get<double>();
    const PointId p = s.line->snap(v);
    if (std::fabs(s.line->value(p) - v) > 1e-12) {
      invalid(where, "coordinate is not a point of the space");
    }
    return p;
  }
  if (ref.is_number_integer() && s.table) return space.find(ref.dump());
  invalid(where, "expected a point label");
}

// ---------------------------------------------------------------- maps

std::function<double(double)> real_function(const json& spec,
                                            const std::string& where) {
  const std::string kind = text(spec, "kind", where);
  if (kind == "identity") return [](double x) { return x; };
  if (kind == "scale") {
    const double c = number(spec, "factor", where);
    return [c](double x) { return c * x; };
  }
  if (kind == "affine") {
    const double a = number(spec, "slope", where);
    const double b = number(spec, "intercept", where);
    return [a, b](double x) { return a * x + b; };
  }
  if (kind == "constant") {
    const double c = number(spec, "value", where);
    return [c](double) { return c; };
  }
  if (kind == "square_over_one_plus") {
    return [](double x) { return x * x / (1.0 + x); };
  }
  if (kind == "reflect") {
    const double a = number(spec, "lower", where);
    const double b = number(spec, "upper", where);
    return [a, b](double x) { return a + b - x; };
  }
  invalid(where, "unknown function kind '" + kind + "'");
}

void read_map(const json& spec, Scenario& s) {
  const std::string where = s.name + ".map";
  if (!s.has_space()) invalid(where, "a map needs a space");
  const std::string kind = text(spec, "kind", where);
  if (kind != "single" && kind != "multi") {
    invalid(where, "kind must be 'single' or 'multi'");
  }
  const bool multi = kind == "multi";
  const FiniteMetricSpace& space = s.space();

  if (spec.contains("images")) {
    const json& images = spec.at("images");
    if (!images.is_object()) invalid(where, "'images' must map labels to images");
    std::vector<std::optional<PointSet>> sets(space.size());
    for (const auto& [label, image] : images.items()) {
      const PointId x = space.find(label);
      std::vector<PointId> members;
      if (image.is_array()) {
        if (!multi) invalid(where, "single-valued images must be single labels");
        for (const auto& m : image) members.push_back(point_ref(m, s, where));
      } else {
        members.push_back(point_ref(image, s, where));
      }
      if (members.empty()) invalid(where, "image of '" + label + "' is empty");
      sets[x].emplace(std::move(members));
    }
    std::vector<PointSet> resolved;
    for (PointId x = 0; x < sets.size(); ++x) {
      if (!sets[x]) invalid(where, "no image for point '" + space.label(x) + "'");
      resolved.push_back(*sets[x]);
    }
    if (multi) {
      s.map = MapSpec::multi(std::move(resolved));
    } else {
      std::vector<PointId> pts;
      for (const auto& set : resolved) pts.push_back(*set.begin());
      s.map = MapSpec::single(std::move(pts));
    }
  } else if (spec.contains("function") || spec.contains("branches")) {
    if (!s.line) invalid(where, "function maps need a 'grid' or 'line' space");
    std::vector<std::function<double(double)>> fs;
    if (spec.contains("function")) {
      fs.push_back(real_function(spec.at("function"), where + ".function"));
    }
    if (spec.contains("branches")) {
      if (!multi) invalid(where, "'branches' needs kind 'multi'");
      for (const auto& b : spec.at("branches")) {
        fs.push_back(real_function(b, where + ".branches"));
      }
    }
    s.map = multi ? MapSpec::snapped_multi(*s.line, fs)
                  : MapSpec::snapped(*s.line, fs.front());
  } else {
    invalid(where, "expected 'images', 'function' or 'branches'");
  }
  s.map->validate(space);
}

// ---------------------------------------------------------------- gauges

Gauge read_gauge(const json& spec, const CheckGrid& grid, const std::string& where) {
  const std::string kind = text(spec, "kind", where);
  if (kind == "linear") return linear_gauge(number(spec, "alpha", where));
  if (kind == "constant") return constant_gauge(number(spec, "value", where));
  if (kind == "rational") return rational_gauge();
  if (kind == "sqrt") return sqrt_gauge();
  if (kind == "piecewise_rho") return piecewise_rho();
  if (kind == "midpoint" || kind == "product" || kind == "complement") {
    const Gauge inner = read_gauge(member(spec, "of", where), grid, where + "." + kind);
    if (kind == "midpoint") return midpoint_upgrade(inner, grid);
    if (kind == "product") return product_gauge(inner, grid);
    return complement_gauge(inner, grid);
  }
  invalid(where, "unknown gauge kind '" + kind + "'");
}

// ---------------------------------------------------------------- potentials

Potential read_potential(const json& spec, const Scenario& s) {
  const std::string where = s.name + ".potential";
  if (!s.has_space()) invalid(where, "a potential needs a space");
  const FiniteMetricSpace& space = s.space();
  const std::string kind = text(spec, "kind", where);
  if (kind == "zero") return PointPotential(space.size(), 0.0);
  if (kind == "scaled_coordinate") {
    if (!s.line) invalid(where, "scaled_coordinate needs a line space");
    const double c = number(spec, "factor", where);
    PointPotential phi(space.size());
    for (PointId p = 0; p < space.size(); ++p) phi[p] = c * s.line->value(p);
    return phi;
  }
  if (kind == "distance_to") {
    const PointId c = point_ref(member(spec, "point", where), s, where);
    const double f = number_or(spec, "factor", 1.0, where);
    PointPotential phi(space.size());
    for (PointId p = 0; p < space.size(); ++p) phi[p] = f * space.distance(p, c);
    return phi;
  }
  if (kind == "values") {
    const json& values = member(spec, "values", where);
    PointPotential phi(space.size(), std::nan(""));
    for (const auto& [label, v] : values.items()) {
      if (!v.is_number()) invalid(where, "potential values must be numbers");
      phi[space.find(label)] = v.get<double>();
    }
    for (PointId p = 0; p < space.size(); ++p) {
      if (std::isnan(phi[p])) invalid(where, "no value for point '" + space.label(p) + "'");
    }
    return phi;
  }
  if (kind == "scaled_distance") {
    return scaled_distance_potential(number(spec, "factor", where));
  }
  if (kind == "from_gauge") {
    std::optional<Gauge> g = s.gauge;
    if (spec.contains("gauge")) g = read_gauge(spec.at("gauge"), s.grid, where + ".gauge");
    if (!g) invalid(where, "from_gauge needs a gauge");
    const std::string upgrade = spec.value("upgrade", std::string("none"));
    if (upgrade != "none" && upgrade != "midpoint") {
      invalid(where, "upgrade must be 'none' or 'midpoint'");
    }
    return build_potential_from_gauge(
        *g, upgrade == "midpoint" ? PotentialUpgrade::kMidpoint : PotentialUpgrade::kNone,
        s.grid);
  }
  invalid(where, "unknown potential kind '" + kind + "'");
}

// ---------------------------------------------------------------- bellman

std::vector<std::vector<double>> matrix(const json& m, std::size_t rows,
                                        std::size_t cols, const std::string& where) {
  if (!m.is_array() || m.size() != rows) invalid(where, "expected states x decisions table");
  std::vector<std::vector<double>> out;
  for (const auto& row : m) {
    if (!row.is_array() || row.size() != cols) invalid(where, "expected states x decisions table");
    std::vector<double> r;
    for (const auto& v : row) {
      if (!v.is_number()) invalid(where, "table entries must be numbers");
      r.push_back(v.get<double>());
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<double> flatten(const std::vector<std::vector<double>>& m) {
  std::vector<double> out;
  for (const auto& row : m) out.insert(out.end(), row.begin(), row.end());
  return out;
}

std::vector<std::string> labels(const json& arr, const std::string& where) {
  if (!arr.is_array() || arr.empty()) invalid(where, "expected a nonempty label list");
  std::vector<std::string> out;
  for (const auto& l : arr) {
    if (!l.is_string()) invalid(where, "labels must be strings");
    out.push_back(l.get<std::string>());
  }
  return out;
}

std::size_t index_of(const std::vector<std::string>& names, const json& ref,
                     const std::string& where) {
  if (ref.is_string()) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == ref.get<std::string>()) return i;
    }
    invalid(where, "unknown label '" + ref.get<std::string>() + "'");
  }
  const std::size_t i = count(ref, where);
  if (i >= names.size()) invalid(where, "index out of range");
  return i;
}

Recursion read_recursion(const json& spec, std::size_t states,
                         std::size_t decisions, const std::string& where) {
  const std::string kind = text(spec, "kind", where);
  if (kind == "constant") return constant_recursion(number(spec, "value", where));
  if (kind == "linear") {
    const json& slope = member(spec, "slope", where);
    if (slope.is_array()) {
      const auto c = matrix(slope, states, decisions, where + ".slope");
      const auto b = spec.contains("intercept")
                         ? matrix(spec.at("intercept"), states, decisions, where + ".intercept")
                         : std::vector<std::vector<double>>(states, std::vector<double>(decisions, 0.0));
      return linear_recursion_table(decisions, flatten(c), flatten(b));
    }
    return linear_recursion(number(spec, "slope", where),
                            number_or(spec, "intercept", 0.0, where));
  }
  if (kind == "clipped_linear") {
    return clipped_linear_recursion(number(spec, "slope", where),
                                    number_or(spec, "intercept", 0.0, where),
                                    number(spec, "lower", where),
                                    number(spec, "upper", where));
  }
  invalid(where, "unknown recursion kind '" + kind + "'");
}

void read_bellman(const json& spec, Scenario& s) {
  const std::string where = s.name + ".bellman";
  const auto states = labels(member(spec, "states", where), where + ".states");
  const auto decisions = labels(member(spec, "decisions", where), where + ".decisions");
  const auto reward = matrix(member(spec, "reward", where), states.size(),
                             decisions.size(), where + ".reward");
  const json& tr = member(spec, "transition", where);
  if (!tr.is_array() || tr.size() != states.size()) {
    invalid(where, "transition must be a states x decisions table");
  }
  std::vector<std::size_t> transition;
  for (const auto& row : tr) {
    if (!row.is_array() || row.size() != decisions.size()) {
      invalid(where, "transition must be a states x decisions table");
    }
    for (const auto& ref : row) transition.push_back(index_of(states, ref, where + ".transition"));
  }
  Recursion rec = read_recursion(member(spec, "recursion", where), states.size(),
                                 decisions.size(), where + ".recursion");
  Gauge rho = spec.contains("rho") ? read_gauge(spec.at("rho"), s.grid, where + ".rho")
                                   : linear_gauge(0.5);
  DPInstance inst(states, decisions, flatten(reward), std::move(transition),
                  std::move(rec), std::move(rho));
  inst.validate_rho(s.grid);

  BoundedFunction h0{std::vector<double>(states.size(), 0.0)};
  if (spec.contains("h0")) {
    const json& h = spec.at("h0");
    if (!h.is_array() || h.size() != states.size()) invalid(where, "h0 needs one value per state");
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (!h[i].is_number()) invalid(where, "h0 values must be numbers");
      h0.values[i] = h[i].get<double>();
    }
  }
  ImSampling sampling;
  sampling.seed = s.seed;
  if (spec.contains("check")) {
    const json& c = spec.at("check");
    if (c.contains("samples")) sampling.samples = count(c.at("samples"), where + ".check.samples");
    sampling.lower = number_or(c, "lower", sampling.lower, where + ".check");
    sampling.upper = number_or(c, "upper", sampling.upper, where + ".check");
  }
  std::optional<bool> expect;
  if (spec.contains("expect_im_condition")) expect = spec.at("expect_im_condition").get<bool>();
  s.bellman.emplace(BellmanConfig{std::move(inst), std::move(h0), sampling, expect});
}

Action read_action(const std::string& a, const std::string& where) {
  if (a == "certify") return Action::kCertify;
  if (a == "solve") return Action::kSolve;
  if (a == "bellman") return Action::kBellman;
  if (a == "oracle") return Action::kOracle;
  if (a == "suite") return Action::kSuite;
  invalid(where, "unknown action '" + a + "'");
}

}  // namespace

Scenario resolve_scenario(const json& doc, const std::string& origin,
                          const std::string& sha256, const Overrides& overrides) {
  if (!doc.is_object()) invalid(origin, "scenario must be a JSON object");
  Scenario s;
  s.sha256 = sha256;
  try {
    s.name = doc.contains("name") ? text(doc, "name", origin)
                                  : std::filesystem::path(origin).stem().string();
    s.action = read_action(text(doc, "action", origin), origin);

    if (doc.contains("seed")) s.seed = doc.at("seed").get<std::uint64_t>();
    if (overrides.seed) s.seed = *overrides.seed;
    if (doc.contains("stop")) {
      const json& st = doc.at("stop");
      s.stop.tol = number_or(st, "tol", s.stop.tol, origin + ".stop");
      if (st.contains("max_iter")) s.stop.max_iter = count(st.at("max_iter"), origin + ".stop");
    }
    if (overrides.tol) s.stop.tol = *overrides.tol;
    if (overrides.max_iter) s.stop.max_iter = *overrides.max_iter;
    s.stop.validate();
    if (doc.contains("slack")) {
      const json& sl = doc.at("slack");
      s.slack.abs = number_or(sl, "abs", s.slack.abs, origin + ".slack");
      s.slack.rel = number_or(sl, "rel", s.slack.rel, origin + ".slack");
    }
    if (overrides.slack) s.slack.abs = *overrides.slack;
    if (doc.contains("grid")) {
      const json& g = doc.at("grid");
      s.grid.t_min = number_or(g, "t_min", s.grid.t_min, origin + ".grid");
      s.grid.t_max = number_or(g, "t_max", s.grid.t_max, origin + ".grid");
      if (g.contains("count")) s.grid.count = count(g.at("count"), origin + ".grid");
    }
    s.grid.validate();

    if (overrides.action) s.action = *overrides.action;

    if (doc.contains("directory")) s.directory = text(doc, "directory", origin);
    if (doc.contains("bellman")) read_bellman(doc.at("bellman"), s);
    if (doc.contains("space")) read_space(doc.at("space"), s);
    if (doc.contains("map")) read_map(doc.at("map"), s);
    if (doc.contains("gauge")) s.gauge = read_gauge(doc.at("gauge"), s.grid, s.name + ".gauge");
    if (doc.contains("potential")) s.potential = read_potential(doc.at("potential"), s);
    if (doc.contains("condition")) s.condition = text(doc, "condition", origin);
    if (overrides.condition) s.condition = *overrides.condition;
    if (doc.contains("solver")) s.solver = text(doc, "solver", origin);
    if (doc.contains("start")) s.start = point_ref(doc.at("start"), s, s.name + ".start");
    if (doc.contains("expect")) {
      const json& e = doc.at("expect");
      if (e.contains("pass")) s.expect_pass = e.at("pass").get<bool>();
    }

    switch (s.action) {
      case Action::kSuite:
        if (s.directory.empty()) invalid(origin, "suite needs a 'directory'");
        break;
      case Action::kBellman:
        if (!s.bellman) invalid(origin, "bellman needs a 'bellman' block");
        break;
      default:
        if (!s.has_space()) invalid(origin, "missing field 'space'");
        if (!s.map) invalid(origin, "missing field 'map'");
    }
  } catch (const ValidationError&) {
    throw;
  } catch (const json::exception& e) {
    invalid(origin, e.what());
  } catch (const Error& e) {
    invalid(origin, e.what());
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path, const Overrides& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read scenario file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string bytes = buffer.str();
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  Scenario s = resolve_scenario(doc, path.string(), sha256_hex(bytes), overrides);
  if (s.action == Action::kSuite && s.directory.is_relative()) {
    s.directory = path.parent_path() / s.directory;
  }
  return s;
}

}  // namespace fixkit::scenario
