#include "fixkit/bellman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "fixkit/error.hpp"

namespace fixkit {

void BoundedFunction::validate() const {
  for (double v : values) {
    if (!std::isfinite(v)) throw PreconditionError("bounded function has a non-finite value");
  }
}

Recursion constant_recursion(double value) {
  std::ostringstream label;
  label << "constant(" << value << ")";
  return {label.str(), [value](std::size_t, std::size_t, double) { return value; }};
}

Recursion linear_recursion(double slope, double intercept) {
  std::ostringstream label;
  label << "linear(" << slope << "*r+" << intercept << ")";
  return {label.str(), [slope, intercept](std::size_t, std::size_t, double r) {
            return slope * r + intercept;
          }};
}

Recursion linear_recursion_table(std::size_t decisions,
                                 std::vector<double> slopes,
                                 std::vector<double> intercepts) {
  if (decisions == 0 || slopes.size() != intercepts.size() ||
      slopes.size() % decisions != 0) {
    throw PreconditionError("linear recursion tables must be states x decisions");
  }
  return {"linear_table",
          [decisions, c = std::move(slopes), b = std::move(intercepts)](
              std::size_t x, std::size_t y, double r) {
            const std::size_t i = x * decisions + y;
            return c.at(i) * r + b.at(i);
          }};
}

Recursion clipped_linear_recursion(double slope, double intercept,
                                   double lower, double upper) {
  if (!(lower <= upper)) throw PreconditionError("clipped recursion needs lower <= upper");
  std::ostringstream label;
  label << "clipped_linear(" << slope << "*r+" << intercept << " in [" << lower
        << ", " << upper << "])";
  return {label.str(), [=](std::size_t, std::size_t, double r) {
            return std::clamp(slope * r + intercept, lower, upper);
          }};
}

DPInstance::DPInstance(std::vector<std::string> states,
                       std::vector<std::string> decisions,
                       std::vector<double> reward,
                       std::vector<std::size_t> transition, Recursion recursion,
                       Gauge rho)
    : states_(std::move(states)),
      decisions_(std::move(decisions)),
      reward_(std::move(reward)),
      transition_(std::move(transition)),
      recursion_(std::move(recursion)),
      rho_(std::move(rho)) {
  if (states_.empty() || decisions_.empty()) {
    throw PreconditionError("instance needs at least one state and one decision");
  }
  const std::size_t cells = states_.size() * decisions_.size();
  if (reward_.size() != cells || transition_.size() != cells) {
    throw PreconditionError("reward and transition tables must be states x decisions");
  }
  for (double f : reward_) {
    if (!std::isfinite(f)) throw PreconditionError("reward table must be finite");
  }
  for (std::size_t s : transition_) {
    if (s >= states_.size()) throw PreconditionError("transition leaves the state set");
  }
  if (!recursion_.eval) throw PreconditionError("instance needs a recursion");
}

void DPInstance::validate_rho(const CheckGrid& grid) const {
  for (const auto& r : {check_below_identity(rho_, grid),
                        check_ratio_monotone(rho_, grid, Monotone::kNondecreasing)}) {
    if (!r.passed) {
      throw GaugeRejected("rho: " + r.detail, r.failed_at.value_or(0.0));
    }
  }
}

double sup_metric(const BoundedFunction& h, const BoundedFunction& k) {
  if (h.size() != k.size()) {
    throw MismatchError("sup_metric: functions live on different state sets");
  }
  double worst = 0.0;
  for (std::size_t x = 0; x < h.size(); ++x) {
    worst = std::max(worst, std::fabs(h[x] - k[x]));
  }
  return worst;
}

BellmanImage apply_bellman(const DPInstance& inst, const BoundedFunction& h) {
  if (h.size() != inst.state_count()) {
    throw MismatchError("apply_bellman: function does not match instance states");
  }
  BellmanImage out;
  out.value.values.resize(inst.state_count());
  out.policy.resize(inst.state_count());
  for (std::size_t x = 0; x < inst.state_count(); ++x) {
    double best = -std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t y = 0; y < inst.decision_count(); ++y) {
      const double v = inst.reward(x, y) + inst.recurse(x, y, h[inst.next(x, y)]);
      if (!std::isfinite(v)) {
        throw NonFiniteValueError("non-finite Bellman value at state " +
                                      inst.states()[x] + ", decision " +
                                      inst.decisions()[y],
                                  x, y);
      }
      if (v > best) {
        best = v;
        arg = y;
      }
    }
    out.value.values[x] = best;
    out.policy[x] = arg;
  }
  return out;
}

CheckReport check_im_condition(const DPInstance& inst, const ImSampling& sampling) {
  if (sampling.samples < 1) throw PreconditionError("check_im_condition needs samples >= 1");
  if (!(sampling.lower < sampling.upper)) {
    throw PreconditionError("check_im_condition needs lower < upper");
  }
  CheckReport r;
  r.check = "im_condition";
  r.worst_margin = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(sampling.seed);
  std::uniform_real_distribution<double> dist(sampling.lower, sampling.upper);
  const std::size_t n = inst.state_count();
  BoundedFunction h{std::vector<double>(n)};
  BoundedFunction k{std::vector<double>(n)};
  for (std::size_t s = 0; s < sampling.samples; ++s) {
    for (auto& v : h.values) v = dist(rng);
    for (auto& v : k.values) v = dist(rng);
    const double gap = sup_metric(h, k);
    const double bound = inst.rho()(gap);
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < inst.decision_count(); ++y) {
        const std::size_t succ = inst.next(x, y);
        const double lhs =
            std::fabs(inst.recurse(x, y, h[succ]) - inst.recurse(x, y, k[succ]));
        const double margin = bound + sampling.slack - lhs;
        r.worst_margin = std::min(r.worst_margin, margin);
        if (margin < 0.0 && r.passed) {
          r.passed = false;
          r.failed_at = gap;
          r.witness = {s, x, y};
          std::ostringstream os;
          os.precision(17);
          os << "sample " << s << ", state " << inst.states()[x] << ", decision "
             << inst.decisions()[y] << ": |difference| = " << lhs
             << " > rho(" << gap << ") = " << bound;
          r.detail = os.str();
        }
      }
    }
  }
  return r;
}

ValueIterationResult value_iterate(const DPInstance& inst,
                                   const BoundedFunction& h0,
                                   const StopRule& stop,
                                   const ValueIterationOptions& options) {
  stop.validate();
  h0.validate();
  if (h0.size() != inst.state_count()) {
    throw MismatchError("value_iterate: start function does not match instance states");
  }
  ValueIterationResult out;
  BoundedFunction h = h0;
  BellmanImage image = apply_bellman(inst, h);
  for (std::size_t n = 0;; ++n) {
    const double d = sup_metric(h, image.value);
    if (options.enforce_contraction && !out.residuals.empty()) {
      const double bound = inst.rho()(out.residuals.back()) + options.contraction_slack;
      if (d > bound) {
        std::ostringstream os;
        os.precision(17);
        os << "contraction violated at step " << n << ": d = " << d
           << " > rho(previous) + slack = " << bound;
        throw SolverAbort(os.str(), n);
      }
    }
    out.residuals.push_back(d);
    h = std::move(image.value);
    image = apply_bellman(inst, h);
    if (d <= stop.tol) {
      out.iterations = n;
      out.converged = true;
      break;
    }
    if (n + 1 >= stop.max_iter) {
      out.iterations = n + 1;
      break;
    }
  }
  out.final_residual = sup_metric(h, image.value);
  out.solution = std::move(h);
  out.policy = std::move(image.policy);
  return out;
}

}  // namespace fixkit
