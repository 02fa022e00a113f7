#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fixkit/report.hpp"

namespace fixkit {

enum class GaugeProperty : unsigned {
  kBelowIdentity = 1u << 0,       // g(t) < t for t > 0
  kRatioNondecreasing = 1u << 1,  // t -> g(t)/t nondecreasing
  kRatioNonincreasing = 1u << 2,  // t -> g(t)/t nonincreasing
  kNondecreasing = 1u << 3,       // t -> g(t) nondecreasing
  kRangeSubOne = 1u << 4,         // 0 <= g(t) < 1
};

class GaugeProperties {
 public:
  constexpr GaugeProperties() = default;
  constexpr GaugeProperties(std::initializer_list<GaugeProperty> props) {
    for (auto p : props) bits_ |= static_cast<unsigned>(p);
  }

  constexpr bool has(GaugeProperty p) const noexcept {
    return (bits_ & static_cast<unsigned>(p)) != 0;
  }
  constexpr GaugeProperties with(GaugeProperty p) const noexcept {
    GaugeProperties out = *this;
    out.bits_ |= static_cast<unsigned>(p);
    return out;
  }
  std::vector<GaugeProperty> list() const;

  friend constexpr bool operator==(GaugeProperties, GaugeProperties) = default;

 private:
  unsigned bits_ = 0;
};

const char* to_string(GaugeProperty p);

// A comparison function on [0, inf) with the properties its author claims
// for it. Claims are only trusted after the sampled checks below pass.
class Gauge {
 public:
  using Fn = std::function<double(double)>;

  Gauge(std::string label, Fn fn, GaugeProperties declared = {});

  // Evaluates and rejects negative or non-finite values.
  double operator()(double t) const;

  const std::string& label() const noexcept { return label_; }
  GaugeProperties declared() const noexcept { return declared_; }

 private:
  std::string label_;
  Fn fn_;
  GaugeProperties declared_;
};

// Slack applied to sampled monotonicity checks.
inline constexpr double kMonotoneSlack = 1e-12;

enum class Monotone { kNondecreasing, kNonincreasing };

// Passes iff g(t) < t - relative_slack * t at every sample.
CheckReport check_below_identity(const Gauge& g, const CheckGrid& grid,
                                 double relative_slack = 0.0);

CheckReport check_ratio_monotone(const Gauge& g, const CheckGrid& grid,
                                 Monotone direction);

CheckReport check_nondecreasing(const Gauge& g, const CheckGrid& grid);

// 0 <= g(t) < 1 at t = 0 and at every sample.
CheckReport check_range_sub_one(const Gauge& g, const CheckGrid& grid);

// g(t) > 0 at every sample.
CheckReport check_positive(const Gauge& g, const CheckGrid& grid);

// g(t) <= t at every sample.
CheckReport check_at_most_identity(const Gauge& g, const CheckGrid& grid);

// Estimates limsup_{r -> s+} g(r) at every sample s by the supremum over
// (s, s + delta] for delta = s/2, s/4, s/8, and passes iff every estimate
// stays below 1 - 1e-9. Requires g nondecreasing (GaugeRejected otherwise).
CheckReport check_limsup_below_one(const Gauge& g, const CheckGrid& grid);

// Runs the check matching each declared property.
std::vector<CheckReport> check_declared(const Gauge& g, const CheckGrid& grid);

// theta(t) = (g(t) + t) / 2, strictly between g and the identity.
Gauge midpoint_upgrade(const Gauge& g, const CheckGrid& grid = {});

// theta(t) = g(t) * t for g nondecreasing into [0, 1).
Gauge product_gauge(const Gauge& g, const CheckGrid& grid = {});

// eta(t) = t - theta(t) for positive theta <= t with theta(t)/t
// nonincreasing.
Gauge complement_gauge(const Gauge& theta, const CheckGrid& grid = {});

// Built-in families.
Gauge linear_gauge(double alpha);     // alpha * t
Gauge constant_gauge(double value);   // value for every t
Gauge rational_gauge();               // t / (1 + t)
Gauge sqrt_gauge();                   // sqrt(t)

// t^2/2 on (0, 1), 2t/3 on [1, inf), 0 at 0.
Gauge piecewise_rho();

}  // namespace fixkit
