#include "kodaira/semigroup.hpp"
#include "kodaira/toric.hpp"
#include "support/toric_corpus.hpp"

#include <gtest/gtest.h>

using namespace kodaira;
using kodaira::testing::toric_corpus;
using kodaira::testing::ToricCase;

namespace {

const ToricVariety& p1() {
  static const ToricVariety x = ToricVariety::projective_space(1);
  return x;
}

// Box enumeration of {u : <u, v_ρ> >= -b_ρ}; b integral.
std::uint64_t brute_h0(const ToricVariety& x, const ToricDivisorData& d, long radius) {
  std::uint64_t count = 0;
  IntVec u(x.n, 0);
  std::function<void(std::size_t)> walk = [&](std::size_t i) {
    if (i == x.n) {
      bool ok = true;
      for (std::size_t r = 0; r < x.ray_count(); ++r) ok = ok && Rational(dot(u, x.rays[r])) >= -d.coeffs[r];
      if (ok) ++count;
      return;
    }
    for (long c = -radius; c <= radius; ++c) {
      u[i] = c;
      walk(i + 1);
    }
  };
  walk(0);
  return count;
}

SectionSystem staircase(std::int64_t top, const std::function<std::vector<LatticePoint>(std::int64_t)>& at) {
  std::vector<std::vector<LatticePoint>> sets(static_cast<std::size_t>(top) + 1);
  for (std::int64_t k = 1; k <= top; ++k) sets[k] = at(k);
  const std::size_t n = sets[1].empty() ? 1 : sets[1].front().size();
  return SectionSystem::from_sets(n, sets);
}

}  // namespace

TEST(ToricVariety, PresetsValidate) {
  EXPECT_EQ(ToricVariety::projective_space(2).max_cones.size(), 3u);
  EXPECT_EQ(ToricVariety::product(p1(), p1()).ray_count(), 4u);
  EXPECT_EQ(ToricVariety::hirzebruch(3).rays[2], (IntVec{-1, 3}));
}

TEST(ToricVariety, RejectsBadFans) {
  // Non-primitive ray.
  EXPECT_THROW(ToricVariety::from_fan(1, {{2}, {-1}}, {{0}, {1}}), InputError);
  // Not smooth: cone spanned by (1,0),(1,2).
  EXPECT_THROW(ToricVariety::from_fan(2, {{1, 0}, {1, 2}, {-1, -1}}, {{0, 1}, {1, 2}, {2, 0}}), InputError);
  // Missing cone: not complete.
  EXPECT_THROW(ToricVariety::from_fan(2, {{1, 0}, {0, 1}, {-1, -1}}, {{0, 1}, {1, 2}}), InputError);
}

TEST(DivisorPolytope, Examples) {
  auto seg = divisor_polytope(p1(), {{0, 2}}, 1);
  EXPECT_EQ(lattice_points(seg).size(), 3u);
  EXPECT_EQ(seg.vertices().front(), (RatVec{0}));
  EXPECT_EQ(seg.vertices().back(), (RatVec{2}));

  const auto p2 = ToricVariety::projective_space(2);
  for (int k = 1; k <= 4; ++k) EXPECT_TRUE(divisor_polytope(p2, ToricDivisorData::canonical(p2), k).is_empty());

  const auto q = ToricVariety::product(p1(), p1());
  auto square = divisor_polytope(q, {{1, 1, 1, 1}}, 1);
  EXPECT_EQ(lattice_points(square).size(), 9u);
  EXPECT_EQ(square.vertices().front(), (RatVec{-1, -1}));
}

TEST(DivisorPolytope, NeedsMultipleOfK0) {
  ToricDivisorData half{{Rational(1, 2), 0}};
  EXPECT_EQ(half.k0(), 2);
  EXPECT_THROW(divisor_polytope(p1(), half, 1), InputError);
  EXPECT_NO_THROW(divisor_polytope(p1(), half, 2));
}

TEST(DivisorPolytope, CountsMatchBoxEnumeration) {
  for (const auto& c : toric_corpus(4, 99)) {
    ToricDivisorData d = c.m.scaled(Rational(c.m.k0()));
    EXPECT_EQ(h0(c.x, d), brute_h0(c.x, d, 8)) << c.id;
  }
}

TEST(Ampleness, Criteria) {
  const auto q = ToricVariety::product(p1(), p1());
  EXPECT_TRUE(is_ample(q, {{1, 0, 1, 0}}));
  EXPECT_TRUE(is_nef(q, {{1, 0, 0, 0}}));
  EXPECT_FALSE(is_ample(q, {{1, 0, 0, 0}}));
  const auto f1 = ToricVariety::hirzebruch(1);
  auto a = find_ample(f1);
  EXPECT_TRUE(is_ample(f1, a));
  // Ample polytopes are full-dimensional with one facet per ray.
  auto poly = divisor_polytope(f1, a, 1);
  EXPECT_EQ(poly.dim(), 2);
  for (std::size_t r = 0; r < f1.ray_count(); ++r) {
    int on_facet = 0;
    for (const auto& v : poly.vertices()) on_facet += dot(f1.rays[r], v) == -a.coeffs[r];
    EXPECT_EQ(on_facet, 2);
  }
}

TEST(SectionsOf, IntervalWithMetric) {
  SingularMetricData h{{{0, 2}}};
  for (std::int64_t k = 1; k <= 10; ++k) {
    auto a = sections_of(p1(), {{0, 2}}, h, k);
    ASSERT_EQ(a.size(), static_cast<std::size_t>(k));
    EXPECT_EQ(a.front(), (LatticePoint{k + 1}));
    EXPECT_EQ(a.back(), (LatticePoint{2 * k}));
  }
}

TEST(SectionsOf, ClampExcludesPoint) {
  SingularMetricData h{{{0, 1}}};
  for (std::int64_t k = 1; k <= 10; ++k) EXPECT_TRUE(sections_of(p1(), {{0, 0}}, h, k).empty());
}

TEST(Kappa, DefinitionsOnExplicitSystems) {
  auto line = staircase(12, [](std::int64_t k) {
    std::vector<LatticePoint> a;
    for (std::int64_t u = 0; u <= 2 * k; ++u) a.push_back({u});
    return a;
  });
  EXPECT_EQ(kappa1(line).value, 1);
  EXPECT_EQ(kappa2(line).value, 1);
  EXPECT_EQ(kappa3(line).value, 1);

  auto point = staircase(12, [](std::int64_t) { return std::vector<LatticePoint>{{3, 4}}; });
  EXPECT_EQ(kappa1(point).value, 0);
  EXPECT_EQ(kappa2(point).value, 0);
  EXPECT_EQ(kappa3(point).value, 0);

  auto none = staircase(12, [](std::int64_t) { return std::vector<LatticePoint>{}; });
  EXPECT_TRUE(kappa1(none).value.is_neg_inf());
  EXPECT_TRUE(kappa2(none).value.is_neg_inf());
  EXPECT_TRUE(kappa3(none).value.is_neg_inf());

  auto fiber_line = staircase(12, [](std::int64_t k) {
    std::vector<LatticePoint> a;
    for (std::int64_t u = 0; u <= 2 * k; ++u) a.push_back({0, u});
    return a;
  });
  EXPECT_EQ(kappa2(fiber_line).value, 1);

  auto square = staircase(1, [](std::int64_t) { return std::vector<LatticePoint>{{0, 0}, {1, 0}, {0, 1}, {1, 1}}; });
  EXPECT_EQ(kappa2(square).value, 2);

  auto simplex = staircase(24, [](std::int64_t k) {
    std::vector<LatticePoint> a;
    for (std::int64_t u = 0; u <= k; ++u)
      for (std::int64_t v = 0; u + v <= k; ++v) a.push_back({u, v});
    return a;
  });
  EXPECT_EQ(kappa3(simplex).value, 2);
}

TEST(Kappa, Kappa1SeesDifferencesNotPositions) {
  // Two points per degree whose difference generates 2Z: rank 1.
  auto sys = staircase(6, [](std::int64_t k) { return std::vector<LatticePoint>{{k, 0}, {k + 2, 0}}; });
  EXPECT_EQ(kappa1(sys).value, 1);
}

TEST(Kappa3, ShortBoundIsReported) {
  auto sys = staircase(24, [](std::int64_t k) {
    std::vector<LatticePoint> a;
    if (k == 24)
      for (std::int64_t u = 0; u <= 5; ++u) a.push_back({u});
    return a;
  });
  EXPECT_THROW(kappa3(sys), CrossCheckError);
}

TEST(KappaSigma, SeparationInstance) {
  SingularMetricData h{{{0, 1}}};
  ToricDivisorData m{{0, 0}};
  auto sys = section_system(p1(), m, h, 24);
  EXPECT_TRUE(kappa2(sys).value.is_neg_inf());
  auto s = kappa_sigma(p1(), m, h, find_ample(p1()));
  EXPECT_EQ(s.exact, 0);
  EXPECT_EQ(s.empirical, 0);
}

TEST(KappaSigma, Examples) {
  const auto a = find_ample(p1());
  EXPECT_EQ(kappa_sigma(p1(), {{0, 2}}, {{{0, 2}}}, a).exact, 1);
  EXPECT_EQ(kappa_sigma(p1(), {{0, 2}}, {{{0, 3}}}, a).exact, 0);
  EXPECT_TRUE(kappa_sigma(p1(), {{0, 2}}, {{{0, 4}}}, a).exact.is_neg_inf());
}

TEST(KappaSigma, UnclampedMultiplierIsCaught) {
  SingularMetricData h{{{0, 0}}, false};
  EXPECT_THROW(kappa_sigma(p1(), {{0, 0}}, h, find_ample(p1())), CrossCheckError);
}

TEST(ToricProperties, ThreeDefinitionsAgree) {
  for (const auto& c : toric_corpus()) {
    auto sys = section_system(c.x, c.m, c.h, 24);
    const ExtInt k1 = kappa1(sys).value;
    EXPECT_EQ(k1, kappa2(sys).value) << c.id;
    EXPECT_EQ(k1, kappa3(sys).value) << c.id;
  }
}

TEST(ToricProperties, FaceAnalysisPredictsKappa) {
  for (const auto& c : toric_corpus()) {
    auto sys = section_system(c.x, c.m, c.h, 24);
    EXPECT_EQ(asymptotic_dimension(c.x, c.m, c.h, nullptr, 1), kappa2(sys).value) << c.id;
  }
}

TEST(ToricProperties, FaceAnalysisWithAmpleMatchesLimitPolytope) {
  for (const auto& c : toric_corpus()) {
    const auto a = find_ample(c.x);
    const ExtInt q = limit_polytope(c.x, c.m, c.h).dim();
    for (int mult = 1; mult <= 3; ++mult) {
      const auto e = a.scaled(mult);
      EXPECT_EQ(asymptotic_dimension(c.x, c.m, c.h, &e, 1), q) << c.id;
    }
  }
}

static GrowthOptions enough(const ToricCase& c, const ToricDivisorData& m, const SingularMetricData& h,
                     std::int64_t stride = 1) {
  return {std::max<std::int64_t>(24, certifying_degree(c.x, m, h, stride)), stride};
}

TEST(ToricProperties, KappaAtMostKappaSigma) {
  for (const auto& c : toric_corpus()) {
    auto sys = section_system(c.x, c.m, c.h, 24);
    auto s = kappa_sigma(c.x, c.m, c.h, find_ample(c.x), enough(c, c.m, c.h));
    EXPECT_LE(kappa2(sys).value, s.exact) << c.id;
  }
}

TEST(ToricProperties, StrideInvariance) {
  for (const auto& c : toric_corpus(3)) {
    const auto a = find_ample(c.x);
    const ExtInt base = kappa_sigma(c.x, c.m, c.h, a, enough(c, c.m, c.h)).exact;
    for (std::int64_t stride : {2, 3, 5}) {
      EXPECT_EQ(kappa_sigma(c.x, c.m, c.h, a, enough(c, c.m, c.h, stride)).empirical, base) << c.id << " a=" << stride;
    }
  }
}

TEST(ToricProperties, Monotonicity) {
  for (const auto& c : toric_corpus(3, 7)) {
    const auto a = find_ample(c.x);
    auto sys = section_system(c.x, c.m, c.h, 24);
    const ExtInt k = kappa2(sys).value;
    const ExtInt s = kappa_sigma(c.x, c.m, c.h, a, enough(c, c.m, c.h)).exact;
    for (std::size_t r = 0; r < c.x.ray_count(); ++r) {
      ToricDivisorData bigger = c.m;
      bigger.coeffs[r] += 1;
      EXPECT_GE(kappa2(section_system(c.x, bigger, c.h, 24)).value, k) << c.id;
      EXPECT_GE(kappa_sigma(c.x, bigger, c.h, a, enough(c, bigger, c.h)).exact, s) << c.id;
    }
    for (std::size_t j = 0; j < c.h.entries.size(); ++j) {
      SingularMetricData fewer = c.h;
      fewer.entries.erase(fewer.entries.begin() + static_cast<std::ptrdiff_t>(j));
      EXPECT_GE(kappa2(section_system(c.x, c.m, fewer, 24)).value, k) << c.id;
      EXPECT_GE(kappa_sigma(c.x, c.m, fewer, a, enough(c, c.m, fewer)).exact, s) << c.id;
    }
  }
}

TEST(ToricProperties, OkounkovBodyDimensionIsKappa) {
  for (const auto& c : toric_corpus()) {
    auto sys = section_system(c.x, c.m, c.h, 6);
    if (sys.support().empty()) continue;
    std::vector<std::vector<LatticePoint>> levels;
    for (std::int64_t k = 0; k <= sys.max_degree(); ++k) levels.push_back(sys.points(k));
    auto reg = regularize(GradedSemigroup::from_levels(c.x.n, levels, true));
    EXPECT_EQ(reg.okounkov_body.dim(), kappa2(sys).value) << c.id;
  }
}

TEST(DifferenceOrder, PolynomialValues) {
  for (int d = 0; d <= 4; ++d) {
    std::vector<std::uint64_t> v;
    for (std::uint64_t k = 10; k < 10 + static_cast<std::uint64_t>(d) + 3; ++k) {
      std::uint64_t p = 1;
      for (int i = 0; i < d; ++i) p *= k + static_cast<std::uint64_t>(i);
      v.push_back(p + 7);
    }
    EXPECT_EQ(difference_order(v), ExtInt(d)) << d;
  }
}

TEST(DifferenceOrder, UncertifiedSequences) {
  EXPECT_TRUE(difference_order({0, 0, 0})->is_neg_inf());
  EXPECT_FALSE(difference_order({0, 1, 2, 3}).has_value());
  EXPECT_FALSE(difference_order({1, 4, 9}).has_value());
  EXPECT_FALSE(difference_order({5}).has_value());
}
