#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fixkit/report.hpp"

namespace fixkit {

// Points are indices into the space; index order is the tie-breaking order
// used everywhere downstream.
using PointId = std::size_t;

// How a distance table came to be. User tables are checked exactly,
// computed ones with a small triangle slack.
enum class TableOrigin { kExplicit, kDerived };

inline constexpr double kDerivedTriangleSlack = 1e-12;

// A finite set of labelled points with a dense distance table. The
// constructor only checks shape; metric axioms are checked by
// validate_metric so that corrupted tables can still be inspected.
class FiniteMetricSpace {
 public:
  FiniteMetricSpace(std::vector<std::string> labels,
                    std::vector<double> row_major_table,
                    TableOrigin origin = TableOrigin::kExplicit);

  // Builds the table by evaluating `distance` on every ordered pair.
  static FiniteMetricSpace from_function(
      std::vector<std::string> labels,
      const std::function<double(PointId, PointId)>& distance);

  std::size_t size() const noexcept { return labels_.size(); }
  TableOrigin origin() const noexcept { return origin_; }

  double distance(PointId a, PointId b) const {
    return table_[a * size() + b];
  }

  const std::string& label(PointId p) const { return labels_.at(p); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  // Index of the point with the given label; throws UnknownPointError.
  PointId find(const std::string& label) const;

  bool contains(PointId p) const noexcept { return p < size(); }
  void require_point(PointId p) const;

 private:
  std::vector<std::string> labels_;
  std::vector<double> table_;
  TableOrigin origin_;
};

// Checks identity of indiscernibles, symmetry, nonnegativity and the
// triangle inequality by exhaustive scan. Every violation is listed.
ValidationReport validate_metric(const FiniteMetricSpace& space);

// min over a in A of d(x, a). Throws EmptySetError for an empty A.
double point_to_set_distance(const FiniteMetricSpace& space, PointId x,
                             std::span<const PointId> set);

struct GridSpec {
  double lower = 0.0;
  double upper = 1.0;
  std::size_t resolution = 2;  // number of grid points

  void validate() const;
};

// A finite subset of the real line with metric |x - y|. Provides nearest
// point snapping so real maps can be restricted to the discretization.
class LineSpace {
 public:
  // Distinct coordinates in any order; stored sorted ascending.
  explicit LineSpace(std::vector<double> coordinates);

  // Uniform grid of `resolution` points on [lower, upper].
  static LineSpace grid(const GridSpec& spec);

  const FiniteMetricSpace& space() const noexcept { return space_; }
  std::size_t size() const noexcept { return coords_.size(); }
  double value(PointId p) const { return coords_.at(p); }
  const std::vector<double>& values() const noexcept { return coords_; }

  // Nearest point to v; exact midpoints go to the lower index.
  PointId snap(double v) const;

 private:
  std::vector<double> coords_;
  FiniteMetricSpace space_;
};

}  // namespace fixkit
