#include "kodaira/metric.hpp"

#include <gtest/gtest.h>

using namespace kodaira;

namespace {

Rational q(const char* s) { return parse_rational(s); }

// Oracle: smallest-integer search for floor(k·mu) without rational floor.
Integer floor_by_search(const Rational& mu, std::int64_t k) {
  Integer f = 0;
  const Rational x = mu * k;
  while (Rational(f + 1) <= x) ++f;
  while (Rational(f) > x) --f;
  return f;
}

std::vector<Rational> grid() {
  std::vector<Rational> out;
  for (int p = 0; p <= 40; ++p)
    for (int d = 1; d <= 8; ++d) out.push_back(Rational(p) / d);
  return out;
}

}  // namespace

TEST(MultiplierCoeff, Examples) {
  EXPECT_EQ(multiplier_coeff(q("3/2"), 1), 1);
  EXPECT_EQ(multiplier_coeff(q("3/2"), 2), 2);
  EXPECT_EQ(multiplier_coeff(q("3/2"), 4), 3);
  for (int k = 1; k <= 20; ++k) EXPECT_EQ(multiplier_coeff(q("1"), k), 1);
  for (int k = 1; k <= 20; ++k) EXPECT_EQ(multiplier_coeff(q("0"), k), 0);
  EXPECT_EQ(multiplier_coeff(q("1/2"), 10), 0);
}

TEST(MultiplierCoeff, UnclampedGoesNegative) {
  EXPECT_EQ(multiplier_coeff(q("0"), 5, false), -4);
  EXPECT_EQ(multiplier_coeff(q("1/2"), 10, false), -4);
}

TEST(MultiplierCoeff, MatchesFloorOracle) {
  for (const auto& mu : grid())
    for (std::int64_t k = 1; k <= 30; ++k) {
      Integer raw = floor_by_search(mu, k) - k + 1;
      EXPECT_EQ(multiplier_coeff(mu, k), raw < 0 ? Integer(0) : raw);
    }
}

TEST(CoeffLimit, Examples) {
  EXPECT_EQ(coeff_limit(q("2")), 1);
  EXPECT_EQ(coeff_limit(q("1")), 0);
  EXPECT_EQ(coeff_limit(q("1/2")), 0);
  EXPECT_EQ(coeff_limit(q("7/3")), q("4/3"));
}

TEST(Subadditivity, Examples) {
  EXPECT_LE(multiplier_coeff(1, 2), multiplier_coeff(1, 1) + multiplier_coeff(1, 1));
  for (int k = 1; k <= 10; ++k)
    for (int l = 1; l <= 10; ++l) EXPECT_EQ(multiplier_coeff(2, k + l), k + l + 1);
  EXPECT_EQ(multiplier_coeff(q("7/3"), 5), 7);
  EXPECT_EQ(multiplier_coeff(q("7/3"), 2), 3);
  EXPECT_EQ(multiplier_coeff(q("7/3"), 3), 5);
}

TEST(Subadditivity, GridScanHasNoViolations) {
  SubadditivityReport r = subadditivity_scan(grid(), 100);
  EXPECT_GT(r.checked, 0u);
  EXPECT_TRUE(r.violations.empty());
}

TEST(MetricProperties, MonotoneInMu) {
  auto g = grid();
  std::sort(g.begin(), g.end());
  for (std::int64_t k = 1; k <= 40; ++k)
    for (std::size_t i = 1; i < g.size(); ++i) EXPECT_LE(multiplier_coeff(g[i - 1], k), multiplier_coeff(g[i], k));
}

TEST(MetricProperties, ExplicitConvergenceRate) {
  for (const auto& mu : grid()) {
    const Rational gamma = coeff_limit(mu);
    for (std::int64_t k = 1; k <= 200; ++k)
      EXPECT_LE(abs(Rational(multiplier_coeff(mu, k)) / k - gamma), (1 + mu) / k);
  }
}

TEST(MetricProperties, TrivialBelowOne) {
  for (const auto& mu : grid()) {
    if (mu >= 1) continue;
    for (std::int64_t k = 1; k <= 200; ++k) EXPECT_EQ(multiplier_coeff(mu, k), 0);
  }
}

TEST(SingularMetricData, Validation) {
  SingularMetricData h{{{0, 2}, {1, q("1/2")}}};
  EXPECT_NO_THROW(h.validate(2));
  EXPECT_THROW(h.validate(1), InputError);
  SingularMetricData dup{{{0, 2}, {0, 1}}};
  EXPECT_THROW(dup.validate(3), InputError);
  SingularMetricData neg{{{0, -1}}};
  EXPECT_THROW(neg.validate(3), InputError);
  EXPECT_EQ(h.coeff(0, 3), 4);
  EXPECT_EQ(h.coeff(2, 3), 0);
  EXPECT_EQ(h.limit(0), 1);
}
