#include "fixkit/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "fixkit/error.hpp"

namespace fixkit {

const char* to_string(OrbitStatus s) {
  switch (s) {
    case OrbitStatus::kConverged: return "converged";
    case OrbitStatus::kTolerance: return "tolerance";
    case OrbitStatus::kMaxIter: return "max_iter";
    case OrbitStatus::kCycleDetected: return "cycle_detected";
  }
  return "unknown";
}

void StopRule::validate() const {
  if (!(tol > 0.0)) throw PreconditionError("stop rule needs tol > 0");
  if (max_iter < 1) throw PreconditionError("stop rule needs max_iter >= 1");
}

namespace {

std::string fmt_step(const std::string& what, std::size_t step, double lhs,
                     double rhs) {
  std::ostringstream os;
  os.precision(17);
  os << what << " at step " << step << ": " << lhs << " > " << rhs;
  return os.str();
}

// Drives a deterministic orbit. `next` returns the successor of the last
// iterate; `fixed` decides membership of the last iterate in its image.
template <typename IsFixed, typename Next, typename OnStep>
void run_orbit(const FiniteMetricSpace& space, OrbitTrace& trace, PointId x0,
               const StopRule& stop, IsFixed fixed, Next next, OnStep on_step) {
  stop.validate();
  space.require_point(x0);
  trace.iterates = {x0};
  std::unordered_set<PointId> visited{x0};
  while (true) {
    const PointId x = trace.iterates.back();
    if (fixed(x)) {
      trace.status = OrbitStatus::kConverged;
      return;
    }
    if (trace.steps() >= stop.max_iter) {
      trace.status = OrbitStatus::kMaxIter;
      return;
    }
    const PointId z = next(x);
    const double step = space.distance(x, z);
    on_step(x, z, step);
    trace.iterates.push_back(z);
    trace.step_dists.push_back(step);
    if (step <= stop.tol) {
      trace.status = fixed(z) ? OrbitStatus::kConverged : OrbitStatus::kTolerance;
      return;
    }
    if (!visited.insert(z).second) {
      trace.status = OrbitStatus::kCycleDetected;
      return;
    }
  }
}

}  // namespace

OrbitTrace picard_solve(const FiniteMetricSpace& space, const MapSpec& map,
                        PointId x0, const StopRule& stop) {
  map.validate(space);
  if (map.kind() != MapKind::kSingle) {
    throw MapSpecError("picard_solve needs a single-valued map");
  }
  OrbitTrace trace;
  run_orbit(
      space, trace, x0, stop, [&](PointId x) { return map.at(x) == x; },
      [&](PointId x) { return map.at(x); }, [](PointId, PointId, double) {});
  return trace;
}

OrbitTrace caristi_descent_solve(const FiniteMetricSpace& space,
                                 const MapSpec& map, const PointPotential& phi,
                                 PointId x0, const StopRule& stop,
                                 const SolveOptions& options) {
  if (options.gate) {
    const Certificate cert =
        certify_caristi(space, map, phi, {options.slack, options.grid});
    if (!cert.passed) {
      throw GateRefusal("caristi_descent_solve: certify_caristi failed at point " +
                        std::to_string(cert.witness->x));
    }
  } else {
    map.validate(space);
    if (phi.size() != space.size()) {
      throw PreconditionError("potential must have one value per point");
    }
  }
  OrbitTrace trace;
  trace.potential_label = "phi";
  trace.potentials.push_back(phi.at(x0));
  run_orbit(
      space, trace, x0, stop, [&](PointId x) { return map.at(x) == x; },
      [&](PointId x) { return map.at(x); },
      [&](PointId x, PointId z, double step) {
        const double rhs = phi[x] - phi[z];
        if (!options.slack.holds(step, rhs)) {
          throw SolverAbort(fmt_step("caristi inequality violated", trace.steps(),
                                     step, rhs),
                            trace.steps());
        }
        trace.potentials.push_back(phi[z]);
      });
  double travelled = 0.0;
  for (double d : trace.step_dists) travelled += d;
  const double drop = phi[trace.iterates.front()] - phi[trace.final_point()];
  const double n = static_cast<double>(trace.steps());
  if (travelled > drop + n * options.slack.allowance(drop)) {
    throw SolverAbort(fmt_step("telescoped caristi bound violated", trace.steps(),
                               travelled, drop),
                      trace.steps());
  }
  return trace;
}

PairPotential build_potential_from_gauge(const Gauge& eta,
                                         PotentialUpgrade upgrade,
                                         const CheckGrid& grid) {
  for (const auto& r : {check_below_identity(eta, grid),
                        check_ratio_monotone(eta, grid,
                                             Monotone::kNondecreasing)}) {
    if (!r.passed) {
      throw GaugeRejected("build_potential_from_gauge: " + r.detail,
                          r.failed_at.value_or(0.0));
    }
  }
  const Gauge g =
      upgrade == PotentialUpgrade::kMidpoint ? midpoint_upgrade(eta, grid) : eta;
  PairPotential p;
  p.label = "potential(" + g.label() + ")";
  p.eval = [g](const FiniteMetricSpace& space, PointId x, PointId y) {
    if (x == y) return 0.0;
    const double d = space.distance(x, y);
    const double ratio = g(d) / d;
    if (!(ratio < 1.0 - kSingularityGuard)) {
      std::ostringstream os;
      os.precision(17);
      os << "potential singular at pair (" << x << ", " << y
         << "): g(d)/d = " << ratio;
      throw SingularityError(os.str(), x, y, ratio);
    }
    return d / (1.0 - ratio);
  };
  return p;
}

OrbitTrace multi_orbit_solve(const FiniteMetricSpace& space,
                             const MapSpec& map, PointId x0, const Gauge& eta,
                             const StopRule& stop,
                             const SolveOptions& options) {
  map.validate(space);
  if (options.gate) {
    const Certificate cert = certify_multivalued_gauge(
        space, map, eta, {options.slack, options.grid});
    if (!cert.passed) {
      throw GateRefusal("multi_orbit_solve: certify_multivalued_gauge failed at pair (" +
                        std::to_string(cert.witness->x) + ", " +
                        std::to_string(cert.witness->y) + ")");
    }
  }
  const Gauge theta = midpoint_upgrade(eta, options.grid);
  const PairPotential phi =
      build_potential_from_gauge(eta, PotentialUpgrade::kMidpoint, options.grid);

  OrbitTrace trace;
  trace.potential_label = phi.label;
  auto nearest = [&](PointId x) {
    const PointSet& image = map.image(x);
    PointId best = *image.begin();
    for (PointId z : image) {
      if (space.distance(x, z) < space.distance(x, best)) best = z;
    }
    return best;
  };
  run_orbit(
      space, trace, x0, stop,
      [&](PointId x) { return map.image(x).contains(x); }, nearest,
      [&](PointId x, PointId z, double step) {
        StepSelection sel;
        sel.chosen = z;
        if (!trace.step_dists.empty()) {
          const PointId prev = trace.iterates[trace.iterates.size() - 2];
          const double bound = theta(trace.step_dists.back());
          const double h = hausdorff_distance(space, map.image(prev), map.image(x));
          sel.hausdorff = h;
          sel.theta = bound;
          sel.epsilon0 = std::max(0.0, bound - h);
          if (!options.slack.holds(step, bound)) {
            throw SolverAbort(fmt_step("selection exceeds theta(previous step)",
                                       trace.steps(), step, bound),
                              trace.steps());
          }
        }
        trace.selections.push_back(sel);
        trace.potentials.push_back(phi(space, x, z));
      });
  return trace;
}

CheckReport verify_telescoping(const FiniteMetricSpace& space,
                               const OrbitTrace& trace,
                               const PairPotential& potential,
                               const Slack& slack) {
  CheckReport r;
  r.check = "telescoping";
  r.worst_margin = std::numeric_limits<double>::infinity();
  const auto& xs = trace.iterates;
  for (PointId p : xs) space.require_point(p);
  const std::size_t steps = xs.empty() ? 0 : xs.size() - 1;
  std::vector<double> phi(steps);
  for (std::size_t n = 0; n < steps; ++n) phi[n] = potential(space, xs[n], xs[n + 1]);
  for (std::size_t n = 0; n < steps; ++n) {
    for (std::size_t m = n + 1; m < steps; ++m) {
      const double lhs = space.distance(xs[n], xs[m]);
      const double rhs = phi[n] - phi[m];
      const double allowance =
          static_cast<double>(m - n) * slack.allowance(rhs);
      const double margin = rhs + allowance - lhs;
      r.worst_margin = std::min(r.worst_margin, margin);
      if (margin < 0.0 && r.passed) {
        r.passed = false;
        r.witness = {n, m};
        std::ostringstream os;
        os.precision(17);
        os << "d(x_" << n << ", x_" << m << ") = " << lhs << " > " << rhs;
        r.detail = os.str();
      }
    }
  }
  if (r.worst_margin == std::numeric_limits<double>::infinity()) r.worst_margin = 0.0;
  return r;
}

std::vector<PointId> brute_force_fixed_points(const FiniteMetricSpace& space,
                                              const MapSpec& map) {
  map.validate(space);
  std::vector<PointId> out;
  for (PointId x = 0; x < space.size(); ++x) {
    if (map.image(x).contains(x)) out.push_back(x);
  }
  return out;
}

}  // namespace fixkit
