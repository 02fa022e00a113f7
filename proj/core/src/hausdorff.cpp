#include "fixkit/hausdorff.hpp"

#include <algorithm>
#include <cstdint>
#include <sstream>

#include "fixkit/error.hpp"

namespace fixkit {

PointSet::PointSet(std::vector<PointId> members) : members_(std::move(members)) {
  if (members_.empty()) throw EmptySetError("point set must be nonempty");
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

PointSet::PointSet(std::initializer_list<PointId> members)
    : PointSet(std::vector<PointId>(members)) {}

bool PointSet::contains(PointId p) const noexcept {
  return std::binary_search(members_.begin(), members_.end(), p);
}

void PointSet::require_in(const FiniteMetricSpace& space) const {
  for (PointId p : members_) space.require_point(p);
}

double directed_distance(const FiniteMetricSpace& space, const PointSet& from,
                         const PointSet& to) {
  from.require_in(space);
  to.require_in(space);
  double worst = 0.0;
  for (PointId x : from) {
    worst = std::max(worst, point_to_set_distance(space, x, to.members()));
  }
  return worst;
}

double hausdorff_distance(const FiniteMetricSpace& space, const PointSet& a,
                          const PointSet& b) {
  return std::max(directed_distance(space, b, a),
                  directed_distance(space, a, b));
}

std::vector<PointSet> enumerate_subsets(const FiniteMetricSpace& space,
                                        std::size_t max_points) {
  const std::size_t n = space.size();
  if (n > max_points || n >= 63) {
    throw SizeLimitError("subset enumeration limited to " +
                         std::to_string(max_points) + " points, space has " +
                         std::to_string(n));
  }
  std::vector<PointSet> subsets;
  const std::uint64_t count = std::uint64_t{1} << n;
  subsets.reserve(count - 1);
  for (std::uint64_t mask = 1; mask < count; ++mask) {
    std::vector<PointId> members;
    for (PointId p = 0; p < n; ++p) {
      if (mask & (std::uint64_t{1} << p)) members.push_back(p);
    }
    subsets.emplace_back(std::move(members));
  }
  return subsets;
}

ValidationReport verify_hausdorff_axioms(const FiniteMetricSpace& space,
                                         std::size_t max_points) {
  const auto subsets = enumerate_subsets(space, max_points);
  const std::size_t m = subsets.size();
  ValidationReport report;
  auto add = [&](std::string rule, std::vector<std::size_t> w, double lhs,
                 double rhs) {
    std::ostringstream os;
    os.precision(17);
    os << lhs << " vs " << rhs;
    report.violations.push_back({std::move(rule), std::move(w), os.str()});
  };

  const double slack =
      space.origin() == TableOrigin::kDerived ? kDerivedTriangleSlack : 0.0;
  std::vector<double> h(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      h[i * m + j] = hausdorff_distance(space, subsets[i], subsets[j]);
    }
  }
  // Witnesses index into enumerate_subsets() order.
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double hij = h[i * m + j];
      if (i == j && hij != 0.0) add("identity", {i, j}, hij, 0.0);
      if (i != j && hij == 0.0) add("separation", {i, j}, hij, 0.0);
      if (i < j && hij != h[j * m + i]) add("symmetry", {i, j}, hij, h[j * m + i]);
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t k = 0; k < m; ++k) {
        const double direct = h[i * m + k];
        const double via = h[i * m + j] + h[j * m + k];
        if (direct > via + slack) add("triangle", {i, j, k}, direct, via);
      }
    }
  }
  // H({x},{y}) must reproduce d(x,y); an asymmetric table cannot, because H
  // is symmetric by construction.
  for (std::size_t i = 0; i < m; ++i) {
    if (subsets[i].size() != 1) continue;
    for (std::size_t j = 0; j < m; ++j) {
      if (subsets[j].size() != 1) continue;
      const PointId x = *subsets[i].begin();
      const PointId y = *subsets[j].begin();
      if (h[i * m + j] != space.distance(x, y)) {
        add("singleton", {i, j}, h[i * m + j], space.distance(x, y));
      }
    }
  }
  return report;
}

}  // namespace fixkit
