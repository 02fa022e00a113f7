#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fixkit/certifier.hpp"
#include "fixkit/gauge.hpp"
#include "fixkit/metric.hpp"
#include "fixkit/report.hpp"

namespace fixkit {

enum class OrbitStatus {
  kConverged,      // the last iterate is a fixed point
  kTolerance,      // last step fell below StopRule::tol
  kMaxIter,
  kCycleDetected,  // an iterate repeated without being fixed
};

const char* to_string(OrbitStatus s);

struct StopRule {
  double tol = 1e-12;
  std::size_t max_iter = 10000;

  void validate() const;
};

// What the multi-valued orbit saw when it picked x_{n+1} from T(x_n).
// `hausdorff` and `epsilon0` are absent for the first step, which has no
// predecessor.
struct StepSelection {
  PointId chosen = 0;
  std::optional<double> hausdorff;  // H(T x_{n-1}, T x_n)
  std::optional<double> theta;      // theta(d(x_{n-1}, x_n))
  std::optional<double> epsilon0;   // theta - H, clamped at 0
};

struct OrbitTrace {
  std::vector<PointId> iterates;
  std::vector<double> step_dists;  // d(x_n, x_{n+1})
  // Pair potentials: Phi(x_n, x_{n+1}) per step. Point potentials (Caristi
  // descent): phi(x_n) per iterate.
  std::vector<double> potentials;
  std::string potential_label;
  std::vector<StepSelection> selections;  // multi orbits only, one per step
  OrbitStatus status = OrbitStatus::kMaxIter;

  std::size_t steps() const noexcept { return step_dists.size(); }
  PointId final_point() const { return iterates.back(); }
};

struct SolveOptions {
  Slack slack;
  CheckGrid grid;
  // Refuse to run unless the matching certificate passes.
  bool gate = true;
};

// x_{n+1} = T(x_n) until T(x_n) = x_n, a repeat, or max_iter.
OrbitTrace picard_solve(const FiniteMetricSpace& space, const MapSpec& map,
                        PointId x0, const StopRule& stop = {});

// Picard orbit that asserts d(x_n, T x_n) <= phi(x_n) - phi(T x_n) at every
// step. With options.gate, refuses (GateRefusal) unless certify_caristi
// passes; a runtime violation aborts with SolverAbort.
OrbitTrace caristi_descent_solve(const FiniteMetricSpace& space,
                                 const MapSpec& map, const PointPotential& phi,
                                 PointId x0, const StopRule& stop = {},
                                 const SolveOptions& options = {});

enum class PotentialUpgrade { kNone, kMidpoint };

inline constexpr double kSingularityGuard = 1e-9;

// Phi(x, y) = d / (1 - g(d)/d) with d = d(x, y), Phi(x, x) = 0, where g is
// eta itself or its midpoint upgrade. Evaluation throws SingularityError
// when g(d)/d >= 1 - 1e-9.
PairPotential build_potential_from_gauge(const Gauge& eta,
                                         PotentialUpgrade upgrade,
                                         const CheckGrid& grid = {});

// Selection orbit for multi-valued maps: x_{n+1} is the point of T(x_n)
// nearest to x_n (lowest index on ties). Each step is checked against
// d(x_n, x_{n+1}) <= theta(d(x_{n-1}, x_n)) with theta the midpoint upgrade
// of eta; a failed check throws SolverAbort. With options.gate, refuses
// unless certify_multivalued_gauge(eta) passes.
OrbitTrace multi_orbit_solve(const FiniteMetricSpace& space,
                             const MapSpec& map, PointId x0, const Gauge& eta,
                             const StopRule& stop = {},
                             const SolveOptions& options = {});

// For all n < m < steps: d(x_n, x_m) <= Phi(x_n, x_{n+1}) -
// Phi(x_m, x_{m+1}) + (m - n) * slack. Witness is {n, m}.
CheckReport verify_telescoping(const FiniteMetricSpace& space,
                               const OrbitTrace& trace,
                               const PairPotential& potential,
                               const Slack& slack = {});

// {x : T(x) = x} or {x : x in T(x)} by enumeration, ascending.
std::vector<PointId> brute_force_fixed_points(const FiniteMetricSpace& space,
                                              const MapSpec& map);

}  // namespace fixkit
