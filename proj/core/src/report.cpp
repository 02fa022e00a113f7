#include "fixkit/report.hpp"

#include <algorithm>
#include <cmath>

#include "fixkit/error.hpp"

namespace fixkit {

double Slack::allowance(double rhs) const noexcept {
  return abs + rel * std::fabs(rhs);
}

bool Slack::holds(double lhs, double rhs) const noexcept {
  return lhs <= rhs + allowance(rhs);
}

bool ValidationReport::has(const std::string& rule) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.rule == rule; });
}

void CheckGrid::validate() const {
  if (!(t_min > 0.0) || !std::isfinite(t_min)) {
    throw PreconditionError("check grid needs t_min > 0");
  }
  if (!(t_min < t_max) || !std::isfinite(t_max)) {
    throw PreconditionError("check grid needs t_min < t_max");
  }
  if (count < 2) throw PreconditionError("check grid needs at least 2 samples");
}

std::vector<double> CheckGrid::samples() const {
  validate();
  std::vector<double> out(count);
  const double log_ratio = std::log(t_max / t_min);
  for (std::size_t i = 0; i < count; ++i) {
    const double frac = static_cast<double>(i) / static_cast<double>(count - 1);
    out[i] = t_min * std::exp(log_ratio * frac);
  }
  out.front() = t_min;
  out.back() = t_max;
  return out;
}

}  // namespace fixkit
