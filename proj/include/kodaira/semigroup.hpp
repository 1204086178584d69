#pragma once

#include "kodaira/lattice.hpp"
#include "kodaira/polytope.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace kodaira {

// A graded sub-semigroup of Z^n × Z>=0. Points carry n+1 coordinates, the
// last one being the level.
class GradedSemigroup {
 public:
  // Semigroup generated by finitely many points of positive level.
  static GradedSemigroup from_generators(std::size_t n, std::vector<LatticePoint> generators);
  // Degreewise data: levels[k] = A_k ⊂ Z^n for k = 0..K (levels[0] is ignored).
  // With product_closed set, A_k + A_l ⊂ A_{k+l} is spot-checked and a
  // violation throws InputError.
  static GradedSemigroup from_levels(std::size_t n, std::vector<std::vector<LatticePoint>> levels,
                                     bool product_closed);

  std::size_t ambient_rank() const { return n_; }
  bool is_degreewise() const { return degreewise_; }
  bool product_closed() const { return product_closed_; }
  // Degree bound K for degreewise data; nullopt for generator sources.
  std::optional<std::int64_t> degree_bound() const;

  // Card of the level-k slice. Throws InputError past the degree bound.
  std::uint64_t hilbert(std::int64_t k) const;

  // All points of positive level that define the group and the cone.
  const std::vector<LatticePoint>& spanning_points() const { return points_; }

 private:
  GradedSemigroup() = default;
  const std::vector<LatticePoint>& level_set(std::int64_t k) const;

  std::size_t n_ = 0;
  bool degreewise_ = false;
  bool product_closed_ = true;
  std::vector<LatticePoint> points_;
  std::vector<std::vector<LatticePoint>> levels_;
  // Generator sources: memoised level sets, filled lazily.
  mutable std::vector<std::vector<LatticePoint>> cache_;
};

struct Regularization {
  std::size_t n = 0;
  std::vector<IntVec> group_basis;
  Polytope cone = Polytope::empty(0);
  bool strongly_convex = false;
  Integer m = 0;
  IntVec level_generator;  // element of G of level m
  std::vector<IntVec> boundary_lattice;  // basis of G ∩ (Z^n × {0})
  std::optional<Integer> ind;
  Polytope okounkov_body = Polytope::empty(0);  // C ∩ {last = 1}

  std::size_t group_rank() const { return group_basis.size(); }
  // Card of G ∩ C at level k.
  std::uint64_t hilbert_reg(std::int64_t k) const;
  // G ∩ C ∩ {last = k}, as polytope in coordinates of the boundary lattice
  // offset by (k/m)·level_generator. Empty when m does not divide k.
  Polytope level_slice(std::int64_t k) const;
};

// Throws DegenerateError("empty semigroup") when no level is inhabited.
Regularization regularize(const GradedSemigroup& sg);

struct GrowthReport {
  int q = 0;
  Integer m = 0;
  std::int64_t k_max = 0;
  Rational volume;             // lattice volume of the Okounkov body
  Rational a_q_predicted;      // m^q · volume
  Rational a_q_empirical;      // hilbert_reg(m·k_max) / k_max^q
  Rational relative_gap;
  // Vol_q(Δ)/ind with Euclidean volume; only when Δ is full-dimensional and
  // ind is defined.
  std::optional<Rational> euclidean_over_ind;
};

GrowthReport growth_law_check(const GradedSemigroup& sg, std::int64_t k_max);
GrowthReport growth_law_check(const Regularization& reg, std::int64_t k_max);

}  // namespace kodaira
