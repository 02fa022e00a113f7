#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fixkit/gauge.hpp"
#include "fixkit/report.hpp"
#include "fixkit/solver.hpp"

namespace fixkit {

// Bounded real function on the states of an instance, indexed by state.
struct BoundedFunction {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t x) const { return values[x]; }
  void validate() const;
};

// r -> recursion(x, y, r): the term added to the reward of decision y in
// state x, applied to the value of the successor state.
struct Recursion {
  std::string label;
  std::function<double(std::size_t state, std::size_t decision, double r)> eval;
};

Recursion constant_recursion(double value);
// c * r + b for every (x, y).
Recursion linear_recursion(double slope, double intercept);
// c(x,y) * r + b(x,y); tables are states x decisions, row major.
Recursion linear_recursion_table(std::size_t decisions,
                                 std::vector<double> slopes,
                                 std::vector<double> intercepts);
// clamp(c * r + b, lower, upper).
Recursion clipped_linear_recursion(double slope, double intercept,
                                   double lower, double upper);

// Finite dynamic program h(x) = max_y { f(x,y) + recursion(x,y,h(next(x,y))) }.
class DPInstance {
 public:
  DPInstance(std::vector<std::string> states, std::vector<std::string> decisions,
             std::vector<double> reward, std::vector<std::size_t> transition,
             Recursion recursion, Gauge rho);

  std::size_t state_count() const noexcept { return states_.size(); }
  std::size_t decision_count() const noexcept { return decisions_.size(); }
  const std::vector<std::string>& states() const noexcept { return states_; }
  const std::vector<std::string>& decisions() const noexcept { return decisions_; }

  double reward(std::size_t x, std::size_t y) const {
    return reward_[x * decision_count() + y];
  }
  std::size_t next(std::size_t x, std::size_t y) const {
    return transition_[x * decision_count() + y];
  }
  double recurse(std::size_t x, std::size_t y, double r) const {
    return recursion_.eval(x, y, r);
  }
  const Recursion& recursion() const noexcept { return recursion_; }
  const Gauge& rho() const noexcept { return rho_; }

  // Gauge checks on rho (below identity, ratio nondecreasing); throws
  // GaugeRejected on failure.
  void validate_rho(const CheckGrid& grid = {}) const;

 private:
  std::vector<std::string> states_;
  std::vector<std::string> decisions_;
  std::vector<double> reward_;
  std::vector<std::size_t> transition_;
  Recursion recursion_;
  Gauge rho_;
};

// sup over states of |h(x) - k(x)|; MismatchError on different sizes.
double sup_metric(const BoundedFunction& h, const BoundedFunction& k);

struct BellmanImage {
  BoundedFunction value;
  std::vector<std::size_t> policy;  // argmax decision, lowest index on ties
};

BellmanImage apply_bellman(const DPInstance& inst, const BoundedFunction& h);

struct ImSampling {
  std::size_t samples = 100;
  std::uint64_t seed = 0;
  double lower = -1.0;
  double upper = 1.0;
  double slack = 1e-12;
};

// Draws random pairs (h, k) with values uniform in [lower, upper] and checks
// |rec(x,y,h(next)) - rec(x,y,k(next))| <= rho(sup_metric(h,k)) + slack for
// every state and decision. Witness is {sample, state, decision}; failed_at
// is the sup gap of the offending pair.
CheckReport check_im_condition(const DPInstance& inst, const ImSampling& sampling);

struct ValueIterationOptions {
  // Assert d_{n+1} <= rho(d_n) + contraction_slack at every step.
  bool enforce_contraction = false;
  double contraction_slack = 1e-10;
};

struct ValueIterationResult {
  BoundedFunction solution;
  std::vector<std::size_t> policy;
  std::vector<double> residuals;  // d_n = sup_metric(h_n, h_{n+1})
  std::size_t iterations = 0;     // n at which d_n <= tol
  double final_residual = 0.0;    // sup_metric(S(solution), solution)
  bool converged = false;
};

// Iterates h_{n+1} = S(h_n) until d_n <= tol or max_iter. The returned
// solution is h_{n+1} = S(h_n).
ValueIterationResult value_iterate(const DPInstance& inst,
                                   const BoundedFunction& h0,
                                   const StopRule& stop,
                                   const ValueIterationOptions& options = {});

}  // namespace fixkit
