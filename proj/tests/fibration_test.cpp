#include "kodaira/fibration.hpp"

#include <gtest/gtest.h>

#include <map>

using namespace kodaira;

namespace {

ToricVariety p1() { return ToricVariety::projective_space(1); }

ToricFibration p1xp1() { return ToricFibration::product(p1(), p1()); }

Rational q(const char* s) { return parse_rational(s); }

// Fiber ℙ¹ data for K_F + L_F of degree d placed on ray 0 of ℙ¹.
ToricDivisorData p1_divisor(std::int64_t d) { return {{Rational(d), Rational(0)}}; }

FiberSpaceInstance curve_p1(std::int64_t g, std::int64_t fiber_degree, Rational mu) {
  SingularMetricData h;
  if (mu != 0) h.entries.push_back({0, mu});
  return curve_metric_instance("curve", CurveSystem{CurveModel{g}, 0, 0, {}}, p1(), p1_divisor(fiber_degree), h);
}

bool holds(const FibrationRun& run, const std::string& check) {
  for (const auto& v : run.verdicts)
    if (v.check == check) return v.holds;
  ADD_FAILURE() << "no verdict " << check;
  return false;
}

const InequalityVerdict& find(const FibrationRun& run, const std::string& check) {
  for (const auto& v : run.verdicts)
    if (v.check == check) return v;
  throw std::runtime_error("missing verdict " + check);
}

// Brute-force κ over a list of counts: the exponent e with count ~ k^e, read
// off from ratios at doubled degrees.
int order_from_doubling(std::uint64_t at_k, std::uint64_t at_2k) {
  int e = 0;
  while ((std::uint64_t{1} << (e + 1)) * at_k <= at_2k + at_k) ++e;
  return e;
}

}  // namespace

TEST(ToricFibration, GeneralFiberOfProduct) {
  const auto fib = p1xp1();
  EXPECT_EQ(fib.fiber.n, 1u);
  ASSERT_EQ(fib.fiber_rays.size(), 2u);
  ToricDivisorData m{{q("1"), q("2"), q("3"), q("4")}};
  EXPECT_EQ(fib.restrict(m).coeffs, (std::vector<Rational>{3, 4}));
}

TEST(ToricFibration, GeneralFiberOfHirzebruch) {
  const auto fib = ToricFibration::hirzebruch(1);
  ASSERT_EQ(fib.fiber_rays.size(), 2u);
  EXPECT_EQ(fib.total.rays[fib.fiber_rays[0]], (IntVec{0, 1}));
  EXPECT_EQ(fib.total.rays[fib.fiber_rays[1]], (IntVec{0, -1}));
  EXPECT_EQ(fib.fiber.rays, (std::vector<IntVec>{{1}, {-1}}));
  EXPECT_EQ(fib.variant, Variant::hirzebruch);
}

TEST(ToricFibration, PullbackOnHirzebruch) {
  // Base rays 1, -1 pull back to the rays (1,0) and (-1,a).
  for (std::int64_t a = 0; a <= 3; ++a) {
    const auto fib = ToricFibration::hirzebruch(a);
    ToricDivisorData d{{q("2"), q("5")}};
    EXPECT_EQ(fib.pullback(d).coeffs, (std::vector<Rational>{2, 0, 5, 0})) << a;
    EXPECT_EQ(fib.pullback_support(1), (std::vector<std::size_t>{2}));
  }
}

TEST(ToricFibration, RejectsMapsThatAreNotFibrations) {
  // ℙ² does not map onto ℙ¹ by the first coordinate: (-1,-1) and (0,1) span a
  // cone whose image meets both base cones.
  EXPECT_THROW(ToricFibration::make(ToricVariety::projective_space(2), p1()), InputError);
  EXPECT_THROW(ToricFibration::make(p1(), p1()), InputError);
}

TEST(FiberData, CurveTimesToric) {
  auto inst = curve_p1(2, 4, 2);
  const auto fd = general_fiber_data(inst);
  EXPECT_EQ(fd.fiber.n, 1u);
  EXPECT_EQ(fd.m.coeffs, (std::vector<Rational>{4, 0}));
  EXPECT_EQ(fd.h.weight(0), 2);
}

TEST(Subadditivity, FullBoundaryExample) {
  auto inst = toric_log_instance("full", p1xp1(), {{0, 1, 2, 3}, {}, {0, 1}});
  const auto run = run_fibration(inst, {});
  const auto& v = find(run, "spc");
  EXPECT_TRUE(v.holds);
  EXPECT_EQ(v.lhs.value, 0);
  EXPECT_EQ(v.rhs[0].value, 0);
  EXPECT_EQ(v.rhs[1].value, 0);
}

TEST(Subadditivity, CurveExampleHoldsWithEquality) {
  const auto run = run_fibration(curve_p1(2, 4, 2), {});
  const auto& v = find(run, "112");
  EXPECT_TRUE(v.holds);
  EXPECT_EQ(v.lhs.value, 2);
  EXPECT_EQ(v.rhs[0].value, 1);
  EXPECT_EQ(v.rhs[1].value, 1);
}

TEST(Subadditivity, MissingPullbackRayIsRejected) {
  // D_Y = {ray 0 of the base}; its pullback is ray 0 of X.
  EXPECT_THROW(toric_log_instance("bad", p1xp1(), {{1, 2, 3}, {}, {0}}), InputError);
  EXPECT_THROW(toric_log_instance("dup", p1xp1(), {{0, 0}, {}, {}}), InputError);
}

TEST(Subadditivity, PreconditionsAreEnforced) {
  auto log_inst = toric_log_instance("log", p1xp1(), {{}, {}, {}});
  const auto r = kappa_report(log_inst, {});
  EXPECT_THROW(verify_subadditivity(log_inst, r, "112"), InputError);
  EXPECT_THROW(verify_subadditivity(log_inst, r, "nope"), InputError);
  // L_Y = 0 cannot carry weight 1 at a point.
  auto bad = curve_metric_instance("psef", CurveSystem{CurveModel{2}, 1, 0, {{{0, 1}}}}, p1(), p1_divisor(2), {});
  EXPECT_THROW(verify_subadditivity(bad, kappa_report(bad, {}), "112"), InputError);
}

TEST(DioEquality, Examples) {
  {
    const auto run = run_fibration(curve_p1(2, 2, 2), {});
    const auto& v = find(run, "dio_equality");
    EXPECT_TRUE(v.holds);
    EXPECT_EQ(v.lhs.value, 2);
    EXPECT_EQ(v.rhs[0].value, 1);
  }
  {
    const auto run = run_fibration(curve_p1(2, 0, 1), {});
    const auto& v = find(run, "dio_equality");
    EXPECT_TRUE(v.holds);
    EXPECT_TRUE(v.lhs.value.is_neg_inf());
    EXPECT_TRUE(v.rhs[0].value.is_neg_inf());
  }
  {
    const auto f = ToricVariety::product(p1(), p1());
    // K + L = O(1, 1): nef with a 2-dimensional polytope.
    auto inst = curve_metric_instance("g3", CurveSystem{CurveModel{3}, 0, 0, {}}, f,
                                      {{q("1"), q("0"), q("1"), q("0")}}, {});
    const auto run = run_fibration(inst, {});
    EXPECT_TRUE(holds(run, "dio_equality"));
    EXPECT_EQ(find(run, "dio_equality").lhs.value, 3);
  }
}

TEST(DioEquality, ProductCountsMatchKunneth) {
  // g = 2, K_Y multiples times fiber counts k on ℙ¹ (degree 2, mu = 2).
  auto inst = curve_p1(2, 2, 2);
  const auto sys = total_sections(inst, 12);
  for (std::int64_t k = 2; k <= 12; ++k) EXPECT_EQ(sys.count(k), static_cast<std::uint64_t>((2 * k - 1) * k)) << k;
  EXPECT_EQ(order_from_doubling(sys.count(6), sys.count(12)), 2);
}

TEST(DioEquality, NeedsGeneralTypeBase) {
  auto inst = curve_p1(1, 2, 2);
  EXPECT_THROW(verify_dio_equality(inst, kappa_report(inst, {}), {}), InputError);
}

TEST(Iitaka, Examples) {
  const auto fib = p1xp1();
  {
    // O(0,2) on the fiber factor.
    auto inst = toric_metric_instance("o02", fib, {{q("0"), q("0"), q("2"), q("0")}}, {});
    const auto sys = total_sections(inst, 24);
    const auto res = iitaka_analysis(sys, 12);
    EXPECT_EQ(res.image_dim, 1);
    EXPECT_EQ(res.fiber_rank, 1u);
    EXPECT_EQ(res.saturated_lattice, (std::vector<IntVec>{{0, 1}}));
    EXPECT_EQ(res.fiber_kappa, 0);
  }
  {
    auto inst = toric_metric_instance("ample", fib, {{q("1"), q("0"), q("1"), q("0")}}, {});
    const auto res = iitaka_analysis(total_sections(inst, 24), 12);
    EXPECT_EQ(res.image_dim, 2);
    EXPECT_EQ(res.fiber_rank, 0u);
    EXPECT_EQ(res.fiber_kappa, 0);
  }
  {
    auto inst = toric_metric_instance("zero", fib, ToricDivisorData::zero(4), {});
    const auto res = iitaka_analysis(total_sections(inst, 24), 12);
    EXPECT_EQ(res.image_dim, 0);
    EXPECT_EQ(res.fiber_rank, 2u);
    EXPECT_EQ(res.fiber_kappa, 0);
  }
}

TEST(Iitaka, ShortBoundIsReported) {
  auto inst = toric_metric_instance("o02", p1xp1(), {{q("0"), q("0"), q("2"), q("0")}}, {});
  const auto sys = total_sections(inst, 10);
  EXPECT_THROW(iitaka_analysis(sys, 6), CrossCheckError);
  EXPECT_EQ(iitaka_degree(sys), 5);
}

TEST(Addti, Examples) {
  auto inst = toric_metric_instance("o11", p1xp1(), {{q("1"), q("0"), q("1"), q("0")}}, {});
  BaseTwist twist;
  twist.toric = ToricDivisorData{{q("1"), q("0")}};
  const auto v = verify_addti(inst, twist, 1);
  EXPECT_TRUE(v.holds);
  EXPECT_FALSE(v.vacuous);
  EXPECT_EQ(v.lhs.value, 6);
  EXPECT_EQ(v.rhs[0].value, 2);
  EXPECT_EQ(v.rhs[1].value, 2);

  auto curve = curve_p1(2, 2, 0);
  BaseTwist cd;
  cd.curve_degree = 5;
  const auto c = verify_addti(curve, cd, 1);
  EXPECT_TRUE(c.holds);
  // Künneth: h⁰(K_Y + D_Y)·h⁰(F) = (2 + 5 - 1)·3 against h⁰(D_Y)·3 = 4·3.
  EXPECT_EQ(c.lhs.value, 18);
  EXPECT_EQ(c.rhs[0].value, 4);

  auto empty_fiber = curve_p1(2, 0, 1);
  EXPECT_TRUE(verify_addti(empty_fiber, cd, 1).vacuous);
}

TEST(Stride, Examples) {
  auto inst = toric_metric_instance("sep", p1xp1(), {{q("0"), q("0"), q("0"), q("0")}}, {{{2, 1}}});
  const auto r = kappa_report(inst, {});
  for (std::int64_t a : {1, 2, 3}) EXPECT_TRUE(verify_stride(inst, r, a, {}).holds) << a;
  auto empty = toric_metric_instance("empty", p1xp1(), {{q("-1"), q("-1"), q("-1"), q("-1")}}, {});
  const auto re = kappa_report(empty, {});
  EXPECT_TRUE(re.total.sigma.exact.is_neg_inf());
  const auto v = verify_stride(empty, re, 3, {});
  EXPECT_TRUE(v.holds);
  EXPECT_TRUE(v.lhs.value.is_neg_inf());
}

TEST(FibrationProperties, BoundarySweepsHold) {
  std::vector<ToricFibration> fibs{p1xp1()};
  for (std::int64_t a = 1; a <= 3; ++a) fibs.push_back(ToricFibration::hirzebruch(a));
  std::size_t ran = 0;
  for (const auto& fib : fibs) {
    for (const auto& inst : boundary_sweep(fib.total.name, fib)) {
      const auto run = run_fibration(inst, {});
      ++ran;
      for (const auto& v : run.verdicts) EXPECT_TRUE(v.holds) << inst.id << " " << v.check;
    }
  }
  // 4 rays over 2: sum over D_Y of 2^(4 - |f*D_Y|) = 16 + 8 + 8 + 4.
  EXPECT_EQ(ran, 4u * 36u);
}

TEST(FibrationProperties, CurveProductsHold) {
  std::size_t dio = 0;
  for (std::int64_t g : {0, 1, 2, 3})
    for (std::int64_t d : {0, 1, 2, 4})
      for (const char* mu : {"0", "1", "3/2", "2"}) {
        SingularMetricData h;
        if (q(mu) != 0) h.entries.push_back({0, q(mu)});
        auto inst = curve_metric_instance("c", CurveSystem{CurveModel{g}, 0, 0, {}}, p1(), p1_divisor(d), h);
        const auto run = run_fibration(inst, {});
        for (const auto& v : run.verdicts) EXPECT_TRUE(v.holds) << g << " " << d << " " << mu << " " << v.check;
        dio += g >= 2;
      }
  EXPECT_GE(dio, 10u);
}

TEST(FibrationProperties, LogCurveProducts) {
  for (std::int64_t g : {0, 1, 2})
    for (std::size_t pts = 0; pts <= 2; ++pts) {
      LogDivisors log;
      for (std::size_t p = 0; p < pts; ++p) log.x_points.push_back(p);
      if (pts > 0) log.y.push_back(0);
      log.x = {0};
      auto inst = curve_log_instance("log", CurveModel{g}, pts, p1(), log);
      const auto run = run_fibration(inst, {});
      for (const auto& v : run.verdicts) EXPECT_TRUE(v.holds) << g << " " << pts << " " << v.check;
    }
  LogDivisors bad;
  bad.y = {0};
  EXPECT_THROW(curve_log_instance("bad", CurveModel{2}, 1, p1(), bad), InputError);
}
