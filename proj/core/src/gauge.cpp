#include "fixkit/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fixkit/error.hpp"

namespace fixkit {

namespace {

constexpr GaugeProperty kAllProperties[] = {
    GaugeProperty::kBelowIdentity, GaugeProperty::kRatioNondecreasing,
    GaugeProperty::kRatioNonincreasing, GaugeProperty::kNondecreasing,
    GaugeProperty::kRangeSubOne};

constexpr double kLimsupMargin = 1e-9;

std::string describe(const std::string& what, double t, double value) {
  std::ostringstream os;
  os.precision(17);
  os << what << " at t=" << t << " (g(t)=" << value << ")";
  return os.str();
}

CheckReport start(std::string name, const CheckGrid& grid) {
  CheckReport r;
  r.check = std::move(name);
  r.worst_margin = std::numeric_limits<double>::infinity();
  r.grid = grid;
  return r;
}

void fail_at(CheckReport& r, double t, std::string detail) {
  if (!r.passed) return;
  r.passed = false;
  r.failed_at = t;
  r.detail = std::move(detail);
}

// Shared shape of the pointwise checks: margin(t, g(t)) must be > 0 (strict)
// or >= 0.
template <typename Margin>
CheckReport pointwise(const std::string& name, const Gauge& g,
                      const CheckGrid& grid, bool strict, Margin margin) {
  CheckReport r = start(name, grid);
  for (double t : grid.samples()) {
    const double value = g(t);
    const double m = margin(t, value);
    r.worst_margin = std::min(r.worst_margin, m);
    const bool ok = strict ? m > 0.0 : m >= 0.0;
    if (!ok) fail_at(r, t, describe(name + " violated", t, value));
  }
  return r;
}

void require(const CheckReport& r, const std::string& op) {
  if (!r.passed) {
    throw GaugeRejected(op + ": " + r.detail, r.failed_at.value_or(0.0));
  }
}

void ensure(const CheckReport& r, const std::string& op) {
  if (!r.passed) {
    throw Error(op + " produced a gauge failing " + r.check + ": " + r.detail);
  }
}

}  // namespace

std::vector<GaugeProperty> GaugeProperties::list() const {
  std::vector<GaugeProperty> out;
  for (auto p : kAllProperties) {
    if (has(p)) out.push_back(p);
  }
  return out;
}

const char* to_string(GaugeProperty p) {
  switch (p) {
    case GaugeProperty::kBelowIdentity: return "below_identity";
    case GaugeProperty::kRatioNondecreasing: return "ratio_nondecreasing";
    case GaugeProperty::kRatioNonincreasing: return "ratio_nonincreasing";
    case GaugeProperty::kNondecreasing: return "nondecreasing";
    case GaugeProperty::kRangeSubOne: return "range_sub_one";
  }
  return "unknown";
}

Gauge::Gauge(std::string label, Fn fn, GaugeProperties declared)
    : label_(std::move(label)), fn_(std::move(fn)), declared_(declared) {
  if (!fn_) throw PreconditionError("gauge '" + label_ + "' has no function");
}

double Gauge::operator()(double t) const {
  const double v = fn_(t);
  if (!std::isfinite(v) || v < 0.0) {
    throw GaugeEvaluationError(
        describe("gauge '" + label_ + "' returned an invalid value", t, v), t);
  }
  return v;
}

CheckReport check_below_identity(const Gauge& g, const CheckGrid& grid,
                                 double relative_slack) {
  return pointwise("below_identity", g, grid, true,
                   [&](double t, double v) { return (t - relative_slack * t) - v; });
}

CheckReport check_ratio_monotone(const Gauge& g, const CheckGrid& grid,
                                 Monotone direction) {
  const bool up = direction == Monotone::kNondecreasing;
  CheckReport r =
      start(up ? "ratio_nondecreasing" : "ratio_nonincreasing", grid);
  double previous = 0.0;
  bool first = true;
  for (double t : grid.samples()) {
    const double ratio = g(t) / t;
    if (!first) {
      const double step = up ? ratio - previous : previous - ratio;
      const double m = step + kMonotoneSlack;
      r.worst_margin = std::min(r.worst_margin, m);
      if (m < 0.0) fail_at(r, t, describe(r.check + " violated", t, ratio * t));
    }
    previous = ratio;
    first = false;
  }
  if (first) r.worst_margin = 0.0;
  return r;
}

CheckReport check_nondecreasing(const Gauge& g, const CheckGrid& grid) {
  CheckReport r = start("nondecreasing", grid);
  double previous = g(0.0);
  for (double t : grid.samples()) {
    const double v = g(t);
    const double m = v - previous + kMonotoneSlack;
    r.worst_margin = std::min(r.worst_margin, m);
    if (m < 0.0) fail_at(r, t, describe("nondecreasing violated", t, v));
    previous = v;
  }
  return r;
}

CheckReport check_range_sub_one(const Gauge& g, const CheckGrid& grid) {
  CheckReport r = start("range_sub_one", grid);
  std::vector<double> ts{0.0};
  for (double t : grid.samples()) ts.push_back(t);
  for (double t : ts) {
    const double v = g(t);
    const double m = 1.0 - v;
    r.worst_margin = std::min(r.worst_margin, m);
    if (!(m > 0.0)) fail_at(r, t, describe("range_sub_one violated", t, v));
  }
  return r;
}

CheckReport check_positive(const Gauge& g, const CheckGrid& grid) {
  return pointwise("positive", g, grid, true,
                   [](double, double v) { return v; });
}

CheckReport check_at_most_identity(const Gauge& g, const CheckGrid& grid) {
  return pointwise("at_most_identity", g, grid, false,
                   [](double t, double v) { return t - v; });
}

CheckReport check_limsup_below_one(const Gauge& g, const CheckGrid& grid) {
  require(check_nondecreasing(g, grid), "check_limsup_below_one");
  CheckReport r = start("limsup_below_one", grid);
  constexpr int kRefinements = 3;
  constexpr int kProbes = 8;
  for (double s : grid.samples()) {
    double estimate = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= kRefinements; ++k) {
      const double delta = std::ldexp(s, -k);
      double sup = 0.0;
      for (int j = 1; j <= kProbes; ++j) {
        sup = std::max(sup, g(s + delta * j / kProbes));
      }
      estimate = std::min(estimate, sup);
    }
    const double m = (1.0 - kLimsupMargin) - estimate;
    r.worst_margin = std::min(r.worst_margin, m);
    if (!(m > 0.0)) fail_at(r, s, describe("limsup estimate >= 1", s, estimate));
  }
  return r;
}

std::vector<CheckReport> check_declared(const Gauge& g, const CheckGrid& grid) {
  std::vector<CheckReport> out;
  for (auto p : g.declared().list()) {
    switch (p) {
      case GaugeProperty::kBelowIdentity:
        out.push_back(check_below_identity(g, grid));
        break;
      case GaugeProperty::kRatioNondecreasing:
        out.push_back(check_ratio_monotone(g, grid, Monotone::kNondecreasing));
        break;
      case GaugeProperty::kRatioNonincreasing:
        out.push_back(check_ratio_monotone(g, grid, Monotone::kNonincreasing));
        break;
      case GaugeProperty::kNondecreasing:
        out.push_back(check_nondecreasing(g, grid));
        break;
      case GaugeProperty::kRangeSubOne:
        out.push_back(check_range_sub_one(g, grid));
        break;
    }
  }
  return out;
}

Gauge midpoint_upgrade(const Gauge& g, const CheckGrid& grid) {
  require(check_below_identity(g, grid), "midpoint_upgrade");
  GaugeProperties props{GaugeProperty::kBelowIdentity};
  if (g.declared().has(GaugeProperty::kRatioNondecreasing)) {
    props = props.with(GaugeProperty::kRatioNondecreasing);
  }
  Gauge theta("midpoint(" + g.label() + ")",
              [g](double t) { return (g(t) + t) / 2.0; }, props);
  for (double t : grid.samples()) {
    const double lo = g(t);
    const double mid = theta(t);
    if (!(lo < mid && mid < t)) {
      throw GaugeRejected(
          describe("midpoint_upgrade lost strict separation", t, mid), t);
    }
  }
  return theta;
}

Gauge product_gauge(const Gauge& g, const CheckGrid& grid) {
  require(check_range_sub_one(g, grid), "product_gauge");
  require(check_nondecreasing(g, grid), "product_gauge");
  Gauge theta("product(" + g.label() + ")",
              [g](double t) { return g(t) * t; },
              {GaugeProperty::kBelowIdentity,
               GaugeProperty::kRatioNondecreasing});
  ensure(check_below_identity(theta, grid), "product_gauge");
  ensure(check_ratio_monotone(theta, grid, Monotone::kNondecreasing),
         "product_gauge");
  return theta;
}

Gauge complement_gauge(const Gauge& theta, const CheckGrid& grid) {
  require(check_at_most_identity(theta, grid), "complement_gauge");
  require(check_positive(theta, grid), "complement_gauge");
  require(check_ratio_monotone(theta, grid, Monotone::kNonincreasing),
          "complement_gauge");
  Gauge eta("complement(" + theta.label() + ")",
            [theta](double t) { return t > 0.0 ? t - theta(t) : 0.0; },
            {GaugeProperty::kBelowIdentity,
             GaugeProperty::kRatioNondecreasing});
  ensure(check_below_identity(eta, grid), "complement_gauge");
  ensure(check_ratio_monotone(eta, grid, Monotone::kNondecreasing),
         "complement_gauge");
  return eta;
}

Gauge linear_gauge(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw PreconditionError("linear gauge needs a finite alpha >= 0");
  }
  GaugeProperties props{GaugeProperty::kRatioNondecreasing,
                        GaugeProperty::kRatioNonincreasing,
                        GaugeProperty::kNondecreasing};
  if (alpha < 1.0) props = props.with(GaugeProperty::kBelowIdentity);
  std::ostringstream label;
  label << "linear(" << alpha << ")";
  return Gauge(label.str(), [alpha](double t) { return alpha * t; }, props);
}

Gauge constant_gauge(double value) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw PreconditionError("constant gauge needs a finite value >= 0");
  }
  GaugeProperties props{GaugeProperty::kNondecreasing};
  if (value < 1.0) props = props.with(GaugeProperty::kRangeSubOne);
  std::ostringstream label;
  label << "constant(" << value << ")";
  return Gauge(label.str(), [value](double) { return value; }, props);
}

Gauge rational_gauge() {
  return Gauge("rational", [](double t) { return t / (1.0 + t); },
               {GaugeProperty::kBelowIdentity,
                GaugeProperty::kRatioNonincreasing,
                GaugeProperty::kNondecreasing, GaugeProperty::kRangeSubOne});
}

Gauge sqrt_gauge() {
  return Gauge("sqrt", [](double t) { return std::sqrt(t); },
               {GaugeProperty::kRatioNonincreasing,
                GaugeProperty::kNondecreasing});
}

Gauge piecewise_rho() {
  return Gauge("piecewise_rho",
               [](double t) {
                 if (t <= 0.0) return 0.0;
                 if (t < 1.0) return 0.5 * t * t;
                 return 2.0 * t / 3.0;
               },
               {GaugeProperty::kBelowIdentity,
                GaugeProperty::kRatioNondecreasing,
                GaugeProperty::kNondecreasing});
}

}  // namespace fixkit
