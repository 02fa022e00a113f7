#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace fixkit {

// Absolute plus relative tolerance used by every inequality check:
// lhs <= rhs + abs + rel * |rhs|.
struct Slack {
  double abs = 1e-12;
  double rel = 1e-12;

  double allowance(double rhs) const noexcept;
  bool holds(double lhs, double rhs) const noexcept;
};

// One violated axiom together with the points that witness it.
struct Violation {
  std::string rule;
  std::vector<std::size_t> witness;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool valid() const noexcept { return violations.empty(); }
  bool has(const std::string& rule) const;
};

// Sample grid standing in for "all t > 0": geometric spacing on
// [t_min, t_max] with `count` samples.
struct CheckGrid {
  double t_min = 1e-3;
  double t_max = 1e2;
  std::size_t count = 10000;

  void validate() const;
  std::vector<double> samples() const;
};

struct CheckReport {
  std::string check;
  bool passed = true;
  // Smallest (rhs - lhs) seen over all checked instances.
  double worst_margin = 0.0;
  // Location of the first failure: a sample t, a gap, ...
  std::optional<double> failed_at;
  // Indices identifying the failure (state/decision, n/m, ...).
  std::vector<std::size_t> witness;
  std::string detail;
  std::optional<CheckGrid> grid;
};

}  // namespace fixkit
