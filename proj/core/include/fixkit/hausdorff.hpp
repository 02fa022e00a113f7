#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "fixkit/metric.hpp"
#include "fixkit/report.hpp"

namespace fixkit {

// Nonempty finite set of points, kept sorted and duplicate free. On a finite
// space every such set is closed and bounded.
class PointSet {
 public:
  explicit PointSet(std::vector<PointId> members);
  PointSet(std::initializer_list<PointId> members);

  std::span<const PointId> members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool contains(PointId p) const noexcept;

  // Throws UnknownPointError if a member lies outside the space.
  void require_in(const FiniteMetricSpace& space) const;

  auto begin() const noexcept { return members_.begin(); }
  auto end() const noexcept { return members_.end(); }

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  std::vector<PointId> members_;
};

// sup over x in `from` of d(x, to).
double directed_distance(const FiniteMetricSpace& space, const PointSet& from,
                         const PointSet& to);

// H(A, B) = max{ sup_{x in B} d(x, A), sup_{x in A} d(x, B) }.
double hausdorff_distance(const FiniteMetricSpace& space, const PointSet& a,
                          const PointSet& b);

inline constexpr std::size_t kDefaultHausdorffAxiomBound = 5;

// All nonempty subsets of the space, in bitmask order.
std::vector<PointSet> enumerate_subsets(const FiniteMetricSpace& space,
                                        std::size_t max_points);

// Exhaustively checks that H is a metric on the nonempty subsets: identity
// (H(A,B) = 0 iff A = B), symmetry, triangle inequality, and agreement with
// d on singletons. Throws SizeLimitError above `max_points`.
ValidationReport verify_hausdorff_axioms(
    const FiniteMetricSpace& space,
    std::size_t max_points = kDefaultHausdorffAxiomBound);

}  // namespace fixkit
