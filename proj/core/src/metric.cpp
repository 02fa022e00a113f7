#include "fixkit/metric.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "fixkit/error.hpp"

namespace fixkit {

namespace {

std::string shortest_repr(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) return std::to_string(v);
  return std::string(buf, end);
}

}  // namespace

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::string> labels,
                                     std::vector<double> row_major_table,
                                     TableOrigin origin)
    : labels_(std::move(labels)),
      table_(std::move(row_major_table)),
      origin_(origin) {
  if (labels_.empty()) {
    throw PreconditionError("metric space needs at least one point");
  }
  if (table_.size() != labels_.size() * labels_.size()) {
    throw PreconditionError("distance table must be size() x size()");
  }
  auto sorted = labels_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw PreconditionError("point labels must be unique");
  }
}

FiniteMetricSpace FiniteMetricSpace::from_function(
    std::vector<std::string> labels,
    const std::function<double(PointId, PointId)>& distance) {
  const std::size_t n = labels.size();
  std::vector<double> table(n * n);
  for (PointId a = 0; a < n; ++a) {
    for (PointId b = 0; b < n; ++b) table[a * n + b] = distance(a, b);
  }
  return FiniteMetricSpace(std::move(labels), std::move(table),
                           TableOrigin::kDerived);
}

PointId FiniteMetricSpace::find(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) {
    throw UnknownPointError("unknown point '" + label + "'");
  }
  return static_cast<PointId>(it - labels_.begin());
}

void FiniteMetricSpace::require_point(PointId p) const {
  if (!contains(p)) {
    throw UnknownPointError("point index " + std::to_string(p) +
                            " outside space of size " +
                            std::to_string(size()));
  }
}

ValidationReport validate_metric(const FiniteMetricSpace& space) {
  ValidationReport report;
  const std::size_t n = space.size();
  const double slack =
      space.origin() == TableOrigin::kDerived ? kDerivedTriangleSlack : 0.0;
  auto add = [&](std::string rule, std::vector<std::size_t> w, double lhs,
                 double rhs) {
    std::ostringstream os;
    os.precision(17);
    os << lhs << " vs " << rhs;
    report.violations.push_back({std::move(rule), std::move(w), os.str()});
  };

  for (PointId a = 0; a < n; ++a) {
    for (PointId b = 0; b < n; ++b) {
      const double d = space.distance(a, b);
      if (!std::isfinite(d) || d < 0.0) {
        add("nonnegative", {a, b}, d, 0.0);
        continue;
      }
      if (a == b && d != 0.0) add("identity", {a, a}, d, 0.0);
      if (a != b && d == 0.0) add("separation", {a, b}, d, 0.0);
      if (a < b && d != space.distance(b, a)) {
        add("symmetry", {a, b}, d, space.distance(b, a));
      }
    }
  }
  for (PointId a = 0; a < n; ++a) {
    for (PointId b = 0; b < n; ++b) {
      const double ab = space.distance(a, b);
      for (PointId c = 0; c < n; ++c) {
        const double ac = space.distance(a, c);
        const double via = ab + space.distance(b, c);
        if (ac > via + slack) add("triangle", {a, b, c}, ac, via);
      }
    }
  }
  return report;
}

double point_to_set_distance(const FiniteMetricSpace& space, PointId x,
                             std::span<const PointId> set) {
  if (set.empty()) throw EmptySetError("point_to_set_distance: empty set");
  space.require_point(x);
  double best = std::numeric_limits<double>::infinity();
  for (PointId a : set) {
    space.require_point(a);
    best = std::min(best, space.distance(x, a));
  }
  return best;
}

void GridSpec::validate() const {
  if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper)) {
    throw PreconditionError("grid needs finite lower < upper");
  }
  if (resolution < 2) throw PreconditionError("grid needs resolution >= 2");
}

namespace {

std::vector<double> sorted_unique(std::vector<double> coords) {
  if (coords.empty()) throw PreconditionError("line space needs points");
  for (double c : coords) {
    if (!std::isfinite(c)) throw PreconditionError("non-finite coordinate");
  }
  std::sort(coords.begin(), coords.end());
  if (std::adjacent_find(coords.begin(), coords.end()) != coords.end()) {
    throw PreconditionError("line space coordinates must be distinct");
  }
  return coords;
}

FiniteMetricSpace line_metric(const std::vector<double>& coords) {
  std::vector<std::string> labels;
  labels.reserve(coords.size());
  for (double c : coords) labels.push_back(shortest_repr(c));
  return FiniteMetricSpace::from_function(
      std::move(labels),
      [&](PointId a, PointId b) { return std::fabs(coords[a] - coords[b]); });
}

}  // namespace

LineSpace::LineSpace(std::vector<double> coordinates)
    : coords_(sorted_unique(std::move(coordinates))),
      space_(line_metric(coords_)) {}

LineSpace LineSpace::grid(const GridSpec& spec) {
  spec.validate();
  std::vector<double> coords(spec.resolution);
  const double width = spec.upper - spec.lower;
  const double last = static_cast<double>(spec.resolution - 1);
  for (std::size_t i = 0; i < spec.resolution; ++i) {
    coords[i] = spec.lower + width * (static_cast<double>(i) / last);
  }
  coords.back() = spec.upper;
  return LineSpace(std::move(coords));
}

PointId LineSpace::snap(double v) const {
  if (!std::isfinite(v)) throw PreconditionError("cannot snap non-finite value");
  auto it = std::lower_bound(coords_.begin(), coords_.end(), v);
  if (it == coords_.begin()) return 0;
  if (it == coords_.end()) return coords_.size() - 1;
  const auto hi = static_cast<PointId>(it - coords_.begin());
  const PointId lo = hi - 1;
  return (v - coords_[lo] <= coords_[hi] - v) ? lo : hi;
}

}  // namespace fixkit
