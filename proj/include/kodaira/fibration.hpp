#pragma once

#include "kodaira/curve.hpp"
#include "kodaira/ext_int.hpp"
#include "kodaira/metric.hpp"
#include "kodaira/toric.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace kodaira {

enum class Variant { toric_product, hirzebruch, curve_times_toric };

// Toric morphism X → Y given by projection onto the first base.n
// coordinates. Fiber rays are the rays of X in the kernel.
struct ToricFibration {
  Variant variant = Variant::toric_product;
  ToricVariety total;
  ToricVariety base;
  ToricVariety fiber;
  std::vector<std::size_t> fiber_rays;  // ray of total for each fiber ray

  // Throws InputError("malformed fan map: ...") when the projection does not
  // map cones into cones or the kernel rays do not form a complete fan.
  static ToricFibration make(ToricVariety total, ToricVariety base);
  static ToricFibration product(const ToricVariety& base, const ToricVariety& fiber);
  // Hirzebruch(a) → ℙ¹.
  static ToricFibration hirzebruch(std::int64_t a);

  // Pullback through the support function of a base divisor.
  ToricDivisorData pullback(const ToricDivisorData& d) const;
  // Rays of X in the support of the pullback of the base ray's divisor.
  std::vector<std::size_t> pullback_support(std::size_t base_ray) const;
  // Restriction of divisor data on X to the general fiber.
  ToricDivisorData restrict(const ToricDivisorData& d) const;
  SingularMetricData restrict(const SingularMetricData& h) const;
};

// Reduced boundary divisors. For toric variants x indexes rays of X and y
// rays of Y. For curve × toric, x indexes rays of the toric factor,
// x_points the vertical fibers over marked points and y marked points of Y.
struct LogDivisors {
  std::vector<std::size_t> x;
  std::vector<std::size_t> x_points;
  std::vector<std::size_t> y;
};

struct FiberSpaceInstance {
  std::string id;
  Variant variant = Variant::toric_product;

  // Toric variants.
  std::optional<ToricFibration> fibration;
  // Curve × toric: base curve data (K_Y + L_Y with weights at marked points)
  // and the toric factor.
  std::optional<CurveSystem> curve;
  std::optional<ToricVariety> factor;

  // K_X + L on X, or on the toric factor for curve × toric.
  ToricDivisorData m;
  SingularMetricData h;
  // Present for log instances, where L = D_X and the metric is trivial.
  std::optional<LogDivisors> log;

  // Perturbation amples; found automatically when absent.
  std::optional<ToricDivisorData> ample_x;
  std::optional<ToricDivisorData> ample_y;

  // Throws InputError on malformed data or f*D_Y ⊄ D_X.
  void validate() const;
  std::size_t base_dim() const;
  std::size_t total_dim() const;
};

FiberSpaceInstance toric_metric_instance(std::string id, ToricFibration fib, ToricDivisorData m,
                                         SingularMetricData h);
FiberSpaceInstance toric_log_instance(std::string id, ToricFibration fib, LogDivisors log);
// curve.line_degree is deg L_Y and curve.metric the base-side weights.
FiberSpaceInstance curve_metric_instance(std::string id, CurveSystem curve, ToricVariety factor,
                                         ToricDivisorData m, SingularMetricData h);
FiberSpaceInstance curve_log_instance(std::string id, CurveModel curve, std::size_t points, ToricVariety factor,
                                      LogDivisors log);

// Every (D_X, D_Y) of reduced boundary subsets with f*D_Y ⊂ D_X.
std::vector<FiberSpaceInstance> boundary_sweep(const std::string& prefix, const ToricFibration& fib);

// Fiber and its data over a point of the open orbit (toric) or away from the
// marked points (curve × toric).
struct FiberData {
  ToricVariety fiber;
  ToricDivisorData m;
  SingularMetricData h;
};
FiberData general_fiber_data(const FiberSpaceInstance& inst);

struct PartKappa {
  KappaValue k1;
  KappaValue k2;
  Kappa3Value k3;
  SigmaResult sigma;
  ExtInt kappa() const { return k2.value; }
};

struct KappaReport {
  std::int64_t max_degree = 0;
  PartKappa total;
  SigmaResult total_sigma_hor;
  PartKappa fiber;
  // K_Y + D_Y for log instances, K_Y otherwise.
  PartKappa base;
  std::size_t total_dim = 0;
  std::size_t base_dim = 0;
};

// Throws CrossCheckError when κ1, κ2, κ3 disagree on any part or an
// empirical growth check fails.
KappaReport kappa_report(const FiberSpaceInstance& inst, const GrowthOptions& opts);

// Exponent data on X: the toric section system, or for curve × toric the
// vanishing orders on Y times the fiber exponents.
SectionSystem total_sections(const FiberSpaceInstance& inst, std::int64_t max_degree,
                             const ToricDivisorData* e = nullptr);

enum class Relation { geq, leq, eq, chain };

struct Term {
  std::string name;
  ExtInt value = ExtInt::neg_inf();
};

struct InequalityVerdict {
  std::string check;
  std::string instance;
  Relation relation = Relation::geq;
  Term lhs;
  std::vector<Term> rhs;  // summed; for chain, the successive members
  bool holds = false;
  bool vacuous = false;
  std::string note;
};

// spc, spck (log instances) or 112, 112k (metric instances).
InequalityVerdict verify_subadditivity(const FiberSpaceInstance& inst, const KappaReport& r,
                                       const std::string& which);
// κ ≤ κ_σ,hor ≤ κ_σ on X.
InequalityVerdict verify_chain(const FiberSpaceInstance& inst, const KappaReport& r);
// κ(X) ≤ κ(F) + dim Y.
InequalityVerdict verify_upper_bound(const FiberSpaceInstance& inst, const KappaReport& r);
// κ(X) = κ(F) + 1 on curve × toric with g >= 2, κ(X) computed twice.
InequalityVerdict verify_dio_equality(const FiberSpaceInstance& inst, const KappaReport& r,
                                      const GrowthOptions& opts);

// Twist of the degree-k data by the pullback of an effective base divisor.
struct BaseTwist {
  std::optional<ToricDivisorData> toric;
  std::int64_t curve_degree = 0;
};
InequalityVerdict verify_addti(const FiberSpaceInstance& inst, const BaseTwist& dy, std::int64_t k);
// κ_σ from degrees a, 2a, ... equals κ_σ.
InequalityVerdict verify_stride(const FiberSpaceInstance& inst, const KappaReport& r, std::int64_t a,
                                const GrowthOptions& opts);

struct IitakaResult {
  std::int64_t degree = 0;
  ExtInt image_dim = ExtInt::neg_inf();
  std::vector<IntVec> saturated_lattice;  // sat(L'_k); M_F = Z^n / this
  std::size_t fiber_rank = 0;
  ExtInt fiber_kappa = ExtInt::neg_inf();
  std::vector<std::int64_t> degrees_checked;
};
// Throws CrossCheckError("increase degree bound") when 2k exceeds the
// bound, the hull dimension at 2k differs, or some degree within the bound
// has a larger hull than degree k.
IitakaResult iitaka_analysis(const SectionSystem& sys, std::int64_t k);
// Largest k in N with 2k <= K; nullopt when there is none.
std::optional<std::int64_t> iitaka_degree(const SectionSystem& sys);
InequalityVerdict verify_iitaka(const FiberSpaceInstance& inst, const SectionSystem& sys, const KappaReport& r);

struct FibrationOptions {
  GrowthOptions growth;
  std::vector<std::int64_t> strides{2, 3, 5};
  bool addti = true;
};

struct FibrationRun {
  KappaReport report;
  std::optional<IitakaResult> iitaka;
  std::vector<InequalityVerdict> verdicts;
  bool all_hold() const;
};

// Every verdict that applies to the instance.
FibrationRun run_fibration(const FiberSpaceInstance& inst, const FibrationOptions& opts);

std::string to_string(Relation r);
std::string to_string(Variant v);

}  // namespace kodaira
