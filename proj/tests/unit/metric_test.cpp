#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "fixkit/error.hpp"
#include "fixkit/metric.hpp"
#include "oracles.hpp"

namespace fixkit {
namespace {

FiniteMetricSpace table3(double ab, double bc, double ac) {
  return FiniteMetricSpace({"a", "b", "c"}, {0, ab, ac, ab, 0, bc, ac, bc, 0});
}

TEST(ValidateMetric, SinglePointIsValid) {
  FiniteMetricSpace s({"a"}, {0.0});
  EXPECT_TRUE(validate_metric(s).valid());
}

TEST(ValidateMetric, TriangleViolationNamesTheTriple) {
  const auto report = validate_metric(table3(1, 1, 5));
  ASSERT_TRUE(report.has("triangle"));
  bool found = false;
  for (const auto& v : report.violations) {
    if (v.rule == "triangle" && v.witness == std::vector<std::size_t>{0, 1, 2}) found = true;
  }
  EXPECT_TRUE(found);
  EXPECT_FALSE(report.has("symmetry"));
}

TEST(ValidateMetric, ShortestPathMetricsAreValid) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto space = testing::random_graph_metric(rng, 8);
    EXPECT_TRUE(validate_metric(space).valid()) << "trial " << trial;
  }
}

TEST(ValidateMetric, ListsEveryBrokenAxiom) {
  FiniteMetricSpace s({"a", "b"}, {1.0, 2.0, 3.0, 0.0});
  const auto report = validate_metric(s);
  EXPECT_TRUE(report.has("identity"));
  EXPECT_TRUE(report.has("symmetry"));
  FiniteMetricSpace zero({"a", "b"}, {0.0, 0.0, 0.0, 0.0});
  EXPECT_TRUE(validate_metric(zero).has("separation"));
  FiniteMetricSpace neg({"a", "b"}, {0.0, -1.0, -1.0, 0.0});
  EXPECT_TRUE(validate_metric(neg).has("nonnegative"));
}

TEST(ValidateMetric, ExplicitTablesGetNoTriangleSlack) {
  // 1 + 1e-13 > 1 is caught for user tables but tolerated for derived ones.
  const double ac = 2.0 + 1e-13 * 4;
  EXPECT_TRUE(validate_metric(table3(1, 1, ac)).has("triangle"));
  FiniteMetricSpace derived({"a", "b", "c"}, {0, 1, ac, 1, 0, 1, ac, 1, 0},
                            TableOrigin::kDerived);
  EXPECT_TRUE(validate_metric(derived).valid());
}

TEST(FiniteMetricSpace, RejectsBadShapes) {
  EXPECT_THROW(FiniteMetricSpace({}, {}), PreconditionError);
  EXPECT_THROW(FiniteMetricSpace({"a", "b"}, {0, 1, 1}), PreconditionError);
  EXPECT_THROW(FiniteMetricSpace({"a", "a"}, {0, 1, 1, 0}), PreconditionError);
}

TEST(FiniteMetricSpace, LabelLookup) {
  const auto s = table3(1, 1, 2);
  EXPECT_EQ(s.find("c"), 2u);
  EXPECT_THROW(s.find("z"), UnknownPointError);
  EXPECT_THROW(s.require_point(3), UnknownPointError);
}

TEST(PointToSet, Examples) {
  LineSpace line({0, 1, 2, 3, 5});
  const auto& s = line.space();
  const std::vector<PointId> a{line.snap(2), line.snap(5)};
  EXPECT_EQ(point_to_set_distance(s, line.snap(2), a), 0.0);
  const std::vector<PointId> three{line.snap(3)};
  EXPECT_EQ(point_to_set_distance(s, line.snap(0), three), 3.0);
  EXPECT_EQ(point_to_set_distance(s, line.snap(1), a), 1.0);
}

TEST(PointToSet, EmptySetIsAnError) {
  LineSpace line({0, 1});
  EXPECT_THROW(point_to_set_distance(line.space(), 0, std::vector<PointId>{}), EmptySetError);
}

TEST(PointToSet, ZeroExactlyOnMembersAndOneLipschitz) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = testing::random_graph_metric(rng, 6);
    const auto a = testing::random_subset(rng, 6, 4);
    for (PointId x = 0; x < 6; ++x) {
      const double dx = point_to_set_distance(s, x, a);
      const bool member = std::find(a.begin(), a.end(), x) != a.end();
      EXPECT_EQ(dx == 0.0, member);
      for (PointId y = 0; y < 6; ++y) {
        EXPECT_LE(dx, s.distance(x, y) + point_to_set_distance(s, y, a));
      }
    }
  }
}

TEST(LineSpace, GridHitsEndpointsExactly) {
  const auto g = LineSpace::grid({0.0, 1.0, 1025});
  EXPECT_EQ(g.size(), 1025u);
  EXPECT_EQ(g.value(0), 0.0);
  EXPECT_EQ(g.value(1024), 1.0);
  EXPECT_EQ(g.value(512), 0.5);
  EXPECT_TRUE(validate_metric(g.space()).valid());
  EXPECT_EQ(g.space().origin(), TableOrigin::kDerived);
}

TEST(LineSpace, SnapBreaksTiesDownward) {
  LineSpace line({0, 1, 3});
  EXPECT_EQ(line.snap(0.5), 0u);
  EXPECT_EQ(line.snap(2.0), 1u);
  EXPECT_EQ(line.snap(2.1), 2u);
  EXPECT_EQ(line.snap(-7), 0u);
  EXPECT_EQ(line.snap(99), 2u);
}

TEST(LineSpace, RejectsDuplicatesAndBadGrids) {
  EXPECT_THROW(LineSpace({1, 1}), PreconditionError);
  EXPECT_THROW(LineSpace::grid({1.0, 0.0, 5}), PreconditionError);
  EXPECT_THROW(LineSpace::grid({0.0, 1.0, 1}), PreconditionError);
}

TEST(LineSpace, SortsAndLabelsByCoordinate) {
  LineSpace line({3, 0, 1.5});
  EXPECT_EQ(line.space().label(0), "0");
  EXPECT_EQ(line.space().label(1), "1.5");
  EXPECT_EQ(line.space().distance(0, 2), 3.0);
}

}  // namespace
}  // namespace fixkit
