#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "fixkit/error.hpp"
#include "fixkit/gauge.hpp"

namespace fixkit {
namespace {

const CheckGrid kGrid{};  // 1e-3 .. 100, 10^4 samples

Gauge fn(const char* label, Gauge::Fn f) { return Gauge(label, std::move(f)); }

TEST(CheckGrid, GeometricWithExactEndpoints) {
  const auto s = kGrid.samples();
  ASSERT_EQ(s.size(), 10000u);
  EXPECT_EQ(s.front(), 1e-3);
  EXPECT_EQ(s.back(), 100.0);
  EXPECT_NEAR(s[1] / s[0], s[5000] / s[4999], 1e-12);
  EXPECT_THROW((CheckGrid{1.0, 0.5, 10}.validate()), PreconditionError);
  EXPECT_THROW((CheckGrid{0.0, 1.0, 10}.validate()), PreconditionError);
  EXPECT_THROW((CheckGrid{0.1, 1.0, 1}.validate()), PreconditionError);
}

TEST(BelowIdentity, Examples) {
  EXPECT_TRUE(check_below_identity(linear_gauge(0.5), kGrid).passed);
  const auto id = check_below_identity(linear_gauge(1.0), kGrid);
  EXPECT_FALSE(id.passed);
  ASSERT_TRUE(id.failed_at.has_value());
  EXPECT_EQ(*id.failed_at, 1e-3);
  EXPECT_TRUE(check_below_identity(piecewise_rho(), kGrid).passed);
  ASSERT_TRUE(id.grid.has_value());
  EXPECT_EQ(id.grid->count, kGrid.count);
}

TEST(BelowIdentity, RelativeSlackTightens) {
  EXPECT_TRUE(check_below_identity(linear_gauge(0.9), kGrid, 0.05).passed);
  EXPECT_FALSE(check_below_identity(linear_gauge(0.96), kGrid, 0.05).passed);
}

TEST(BelowIdentity, BadValuesAreEvaluationErrors) {
  EXPECT_THROW(check_below_identity(fn("neg", [](double t) { return -t; }), kGrid),
               GaugeEvaluationError);
  try {
    check_below_identity(fn("nan", [](double t) { return t > 1 ? std::nan("") : 0.0; }), kGrid);
    FAIL();
  } catch (const GaugeEvaluationError& e) {
    EXPECT_GT(e.at(), 1.0);
  }
}

TEST(RatioMonotone, LinearPassesBothWays) {
  for (double a : {0.0, 0.3, 2.0}) {
    EXPECT_TRUE(check_ratio_monotone(linear_gauge(a), kGrid, Monotone::kNondecreasing).passed);
    EXPECT_TRUE(check_ratio_monotone(linear_gauge(a), kGrid, Monotone::kNonincreasing).passed);
  }
}

TEST(RatioMonotone, PiecewiseRhoIsNondecreasing) {
  EXPECT_TRUE(check_ratio_monotone(piecewise_rho(), kGrid, Monotone::kNondecreasing).passed);
}

TEST(RatioMonotone, SqrtOnlyNonincreasing) {
  EXPECT_FALSE(check_ratio_monotone(sqrt_gauge(), kGrid, Monotone::kNondecreasing).passed);
  EXPECT_TRUE(check_ratio_monotone(sqrt_gauge(), kGrid, Monotone::kNonincreasing).passed);
}

TEST(PiecewiseRho, Values) {
  const Gauge rho = piecewise_rho();
  EXPECT_EQ(rho(0.0), 0.0);
  EXPECT_EQ(rho(0.5), 0.125);
  EXPECT_DOUBLE_EQ(rho(1.0), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(rho(2.0), 4.0 / 3.0);
  EXPECT_DOUBLE_EQ(rho(std::nextafter(1.0, 0.0)), 0.5 * std::pow(std::nextafter(1.0, 0.0), 2));
}

TEST(Midpoint, Examples) {
  const Gauge half = midpoint_upgrade(linear_gauge(0.5));
  EXPECT_EQ(half(2.0), 1.5);
  EXPECT_EQ(midpoint_upgrade(constant_gauge(0.0))(3.0), 1.5);
  EXPECT_EQ(midpoint_upgrade(piecewise_rho())(0.5), 0.3125);
}

TEST(Midpoint, StrictlyBetweenGaugeAndIdentity) {
  for (const Gauge& g : {linear_gauge(0.5), piecewise_rho(), rational_gauge(), constant_gauge(0.0)}) {
    const Gauge theta = midpoint_upgrade(g);
    for (double t : kGrid.samples()) {
      ASSERT_LT(g(t), theta(t)) << g.label() << " at " << t;
      ASSERT_LT(theta(t), t) << g.label() << " at " << t;
    }
  }
}

TEST(Midpoint, RejectsGaugesNotBelowIdentity) {
  EXPECT_THROW(midpoint_upgrade(linear_gauge(1.0)), GaugeRejected);
}

TEST(Product, Examples) {
  EXPECT_EQ(product_gauge(constant_gauge(0.5))(3.0), 1.5);
  EXPECT_EQ(product_gauge(rational_gauge())(1.0), 0.5);
  try {
    product_gauge(constant_gauge(1.0));
    FAIL();
  } catch (const GaugeRejected& e) {
    EXPECT_EQ(e.at(), 0.0);
  }
}

TEST(Product, RejectsDecreasingInput) {
  EXPECT_THROW(product_gauge(fn("dec", [](double t) { return 0.5 / (1.0 + t); })), GaugeRejected);
}

TEST(Complement, Examples) {
  EXPECT_EQ(complement_gauge(linear_gauge(0.5))(4.0), 2.0);
  EXPECT_DOUBLE_EQ(complement_gauge(rational_gauge())(1.0), 0.5);
  EXPECT_THROW(complement_gauge(linear_gauge(2.0)), GaugeRejected);
  EXPECT_EQ(complement_gauge(linear_gauge(1.0))(3.0), 0.0);
}

TEST(Complement, NeedsPositiveTheta) {
  EXPECT_THROW(complement_gauge(constant_gauge(0.0)), GaugeRejected);
}

TEST(Transforms, OutputsPassTheirChecksForRandomFamilies) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0.01, 0.99);
  const CheckGrid coarse{1e-3, 1e2, 500};
  for (int trial = 0; trial < 25; ++trial) {
    const double a = unit(rng);
    const double b = unit(rng) * 5;
    // a * t/(b + t) is nondecreasing into [0, a); c t/(1 + c t) has a
    // nonincreasing ratio and stays below t.
    const Gauge eta("sat", [a, b](double t) { return a * t / (b + t); });
    const Gauge theta("sat2", [b](double t) { return t / (1.0 + b * t); });
    for (const Gauge& out : {product_gauge(eta, coarse), complement_gauge(theta, coarse)}) {
      EXPECT_TRUE(check_below_identity(out, coarse).passed) << out.label();
      EXPECT_TRUE(check_ratio_monotone(out, coarse, Monotone::kNondecreasing).passed);
    }
  }
}

TEST(LimsupBelowOne, Examples) {
  EXPECT_TRUE(check_limsup_below_one(constant_gauge(0.5), kGrid).passed);
  EXPECT_TRUE(check_limsup_below_one(rational_gauge(), kGrid).passed);
  const auto r = check_limsup_below_one(fn("min1", [](double t) { return std::min(1.0, t); }), kGrid);
  EXPECT_FALSE(r.passed);
  ASSERT_TRUE(r.failed_at.has_value());
  EXPECT_GE(*r.failed_at, 0.5);
  EXPECT_LE(*r.failed_at, 1.0);
}

TEST(LimsupBelowOne, RequiresNondecreasing) {
  EXPECT_THROW(check_limsup_below_one(fn("dec", [](double t) { return 1.0 / (1.0 + t); }), kGrid),
               GaugeRejected);
}

TEST(Declared, ChecksFollowTheClaims) {
  const Gauge liar("liar", [](double t) { return 2 * t; },
                   {GaugeProperty::kBelowIdentity, GaugeProperty::kNondecreasing});
  const auto reports = check_declared(liar, kGrid);
  ASSERT_EQ(reports.size(), 2u);
  EXPECT_FALSE(reports[0].passed);
  EXPECT_TRUE(reports[1].passed);
}

TEST(Transforms, AreDeterministic) {
  const Gauge a = product_gauge(rational_gauge());
  const Gauge b = product_gauge(rational_gauge());
  const auto ra = check_ratio_monotone(a, kGrid, Monotone::kNondecreasing);
  const auto rb = check_ratio_monotone(b, kGrid, Monotone::kNondecreasing);
  EXPECT_EQ(ra.worst_margin, rb.worst_margin);
  EXPECT_EQ(a.label(), b.label());
}

}  // namespace
}  // namespace fixkit
