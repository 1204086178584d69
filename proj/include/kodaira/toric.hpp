#pragma once

#include "kodaira/ext_int.hpp"
#include "kodaira/metric.hpp"
#include "kodaira/polytope.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace kodaira {

// Smooth complete fan. Rays are primitive; every maximal cone is a Z-basis.
struct ToricVariety {
  std::size_t n = 0;
  std::vector<IntVec> rays;
  std::vector<std::vector<std::size_t>> max_cones;
  std::string name;

  static ToricVariety projective_space(std::size_t n);
  // Rays of x padded with zeros, then rays of y.
  static ToricVariety product(const ToricVariety& x, const ToricVariety& y);
  static ToricVariety hirzebruch(std::int64_t a);
  // Validates and throws InputError when the fan is not smooth and complete.
  static ToricVariety from_fan(std::size_t n, std::vector<IntVec> rays, std::vector<std::vector<std::size_t>> cones,
                               std::string name = "custom");

  std::size_t ray_count() const { return rays.size(); }
  void validate() const;
};

// Torus-invariant Q-divisor sum b_ρ D_ρ.
struct ToricDivisorData {
  std::vector<Rational> coeffs;

  static ToricDivisorData zero(std::size_t rays) { return {std::vector<Rational>(rays)}; }
  static ToricDivisorData canonical(const ToricVariety& x);
  // Smallest k0 >= 1 with k0·b integral.
  Integer k0() const;
  bool integral() const { return k0() == 1; }
  ToricDivisorData scaled(const Rational& f) const;
  friend ToricDivisorData operator+(const ToricDivisorData& a, const ToricDivisorData& b);
};

// {u : <u, v_ρ> >= -k·b_ρ}. Throws InputError("needs multiple of k₀") when
// k·D is not integral.
Polytope divisor_polytope(const ToricVariety& x, const ToricDivisorData& d, const Integer& k);
std::uint64_t h0(const ToricVariety& x, const ToricDivisorData& d);

bool is_nef(const ToricVariety& x, const ToricDivisorData& d);
bool is_ample(const ToricVariety& x, const ToricDivisorData& d);
// First ample integral divisor in a fixed small search order.
ToricDivisorData find_ample(const ToricVariety& x);

// Degree-k data: divisor k·k0·M + E twisted by the multiplier ideal of h at
// level k·k0.
Polytope section_polytope(const ToricVariety& x, const ToricDivisorData& m, const SingularMetricData& h,
                          std::int64_t k, const ToricDivisorData* e = nullptr);
std::vector<LatticePoint> sections_of(const ToricVariety& x, const ToricDivisorData& m,
                                      const SingularMetricData& h, std::int64_t k,
                                      const ToricDivisorData* e = nullptr);

// Exponent sets A_k for k = 1..K, held either explicitly or as the lattice
// points of one polytope per degree. Degree 0 is the origin.
class SectionSystem {
 public:
  static SectionSystem from_sets(std::size_t n, std::vector<std::vector<LatticePoint>> sets);
  // polys[k] for k = 1..K; polys[0] is ignored.
  static SectionSystem from_polytopes(std::size_t n, Integer k0, std::vector<Polytope> polys);

  std::size_t n() const { return n_; }
  const Integer& k0() const { return k0_; }
  std::int64_t max_degree() const { return static_cast<std::int64_t>(counts_.size()) - 1; }
  std::uint64_t count(std::int64_t k) const { return counts_.at(static_cast<std::size_t>(k)); }
  // Lexicographic order; stops when visit returns false.
  void for_each(std::int64_t k, const std::function<bool(const LatticePoint&)>& visit) const;
  std::vector<LatticePoint> points(std::int64_t k) const;
  // Affine dimension of A_k, -1 when empty.
  int affine_dim(std::int64_t k) const;
  // N = {k in 1..K : A_k nonempty}.
  std::vector<std::int64_t> support() const;

 private:
  std::size_t n_ = 0;
  Integer k0_ = 1;
  std::vector<std::uint64_t> counts_;
  std::vector<std::vector<LatticePoint>> sets_;
  std::vector<Polytope> polys_;
};

SectionSystem section_system(const ToricVariety& x, const ToricDivisorData& m, const SingularMetricData& h,
                             std::int64_t max_degree, const ToricDivisorData* e = nullptr);

struct KappaValue {
  ExtInt value = ExtInt::neg_inf();
  std::int64_t degree = 0;  // witness degree, 0 when -inf
};

struct Kappa3Value {
  ExtInt value = ExtInt::neg_inf();
  std::int64_t degree = 0;
  std::optional<double> slope;
};

KappaValue kappa1(const SectionSystem& sys);
KappaValue kappa2(const SectionSystem& sys);
// Throws CrossCheckError("degree bound too small") when the hull dimension at
// the top degree and the log-log slope disagree.
Kappa3Value kappa3(const SectionSystem& sys);

struct GrowthFit {
  std::optional<double> slope;
  ExtInt order = ExtInt::neg_inf();
  std::int64_t period = 1;  // quasi-period used by the difference test
};
// Least-squares slope of log count against log degree over the nonempty
// samples, rounded. Order -inf when every count is zero; throws
// CrossCheckError("degree bound too small") with fewer than two nonempty
// samples.
GrowthFit growth_order(const std::vector<std::pair<std::int64_t, std::uint64_t>>& samples);

// Degree of a polynomial from equally spaced values: the smallest d whose
// (d+1)-st differences vanish. -inf for all-zero values; nullopt when the
// values do not certify a degree (too few samples, or zeros mixed with
// nonzero values).
std::optional<ExtInt> difference_order(const std::vector<std::uint64_t>& values);

struct GrowthOptions {
  std::int64_t max_degree = 24;
  std::int64_t stride = 1;
};

// Exact asymptotic dimension of the degree-k polytopes for k → ∞ along
// multiples of stride, found by checking for every face of the limit
// polytope whether the bounded-order terms leave the face reachable.
ExtInt asymptotic_dimension(const ToricVariety& x, const ToricDivisorData& m, const SingularMetricData& h,
                            const ToricDivisorData* e, std::int64_t stride);

// Quasi-period in k of the section counts: lcm of the multiplier residue
// periods and of the vertex denominators of the k-linear part.
std::int64_t count_period(const ToricVariety& x, const ToricDivisorData& m, const SingularMetricData& h);

// Smallest K for which every residue class in [ceil(K/2), K] holds n+2
// samples at the given stride.
std::int64_t certifying_degree(const ToricVariety& x, const ToricDivisorData& m, const SingularMetricData& h,
                               std::int64_t stride = 1);

// opts with the degree bound raised to certifying_degree when below it.
GrowthOptions certified(const GrowthOptions& opts, const ToricVariety& x, const ToricDivisorData& m,
                        const SingularMetricData& h);

// Growth order of count(k) at degrees k = stride·j, j in [ceil(K/2), K],
// for a count that is quasi-polynomial in k of degree < min_samples - 1 with
// the given period. In each residue class the trailing run of samples that
// are all zero or all nonzero must hold min_samples values; it is checked
// with difference_order and the largest degree wins. Throws
// CrossCheckError("degree bound too small") otherwise; needed_degree goes
// into the message.
GrowthFit periodic_growth(const std::function<std::uint64_t(std::int64_t)>& count, std::int64_t period,
                          const GrowthOptions& opts, std::int64_t needed_degree, std::size_t min_samples);

// periodic_growth on the counts of section_polytope(x, m, h, k, e).
GrowthFit empirical_growth(const ToricVariety& x, const ToricDivisorData& m, const SingularMetricData& h,
                           const ToricDivisorData* e, const GrowthOptions& opts);

// {u : <u, v_ρ> >= -m_ρ + γ_ρ}.
Polytope limit_polytope(const ToricVariety& x, const ToricDivisorData& m, const SingularMetricData& h);

struct SigmaResult {
  ExtInt exact = ExtInt::neg_inf();
  ExtInt empirical = ExtInt::neg_inf();
  std::vector<GrowthFit> per_multiple;  // E = 1·P, 2·P, 3·P
};

// Perturbation by multiples of an ample divisor; exact value dim Q_∞.
// Throws CrossCheckError when the empirical growth disagrees.
SigmaResult kappa_sigma(const ToricVariety& x, const ToricDivisorData& m, const SingularMetricData& h,
                        const ToricDivisorData& ample, const GrowthOptions& opts = {});
// Perturbation restricted to multiples of `pulled_back`, the pullback of an
// ample divisor of the base.
SigmaResult kappa_sigma_hor(const ToricVariety& x, const ToricDivisorData& m, const SingularMetricData& h,
                            const ToricDivisorData& pulled_back, const GrowthOptions& opts = {});

}  // namespace kodaira
