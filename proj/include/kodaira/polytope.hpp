#pragma once

#include "kodaira/ext_int.hpp"
#include "kodaira/numeric.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace kodaira {

// <u, normal> >= bound
struct Constraint {
  IntVec normal;
  Rational bound;

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

// Generators of a polyhedral cone: cone = span(lineality) + cone(rays).
struct ConeGenerators {
  std::vector<IntVec> lineality;
  std::vector<IntVec> rays;  // primitive, extreme modulo lineality
};

// Double description: generators of {x ∈ R^dim : <row, x> >= 0 for all rows}.
ConeGenerators cone_from_inequalities(const std::vector<IntVec>& rows, std::size_t dim);

// A rational polyhedron in H-representation together with its exactly
// computed V-representation. Values are immutable once built.
class Polytope {
 public:
  static Polytope from_constraints(std::size_t ambient_dim, std::vector<Constraint> constraints);
  // Convex hull of finitely many rational points; no points gives the empty
  // polytope.
  static Polytope convex_hull(std::size_t ambient_dim, const std::vector<RatVec>& points);
  // The closed convex cone with apex 0 generated by the vectors.
  static Polytope cone(std::size_t ambient_dim, const std::vector<IntVec>& generators);
  static Polytope empty(std::size_t ambient_dim);

  std::size_t ambient_dim() const { return ambient_dim_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  // Lexicographically sorted. For an unbounded polyhedron these are the
  // minimal-face points returned by the conversion.
  const std::vector<RatVec>& vertices() const { return vertices_; }
  const std::vector<IntVec>& recession_rays() const { return rays_; }
  std::size_t lineality_dim() const { return lineality_.size(); }
  const std::vector<IntVec>& lineality() const { return lineality_; }

  bool is_empty() const { return vertices_.empty(); }
  bool is_bounded() const { return rays_.empty() && lineality_.empty(); }
  ExtInt dim() const { return dim_; }

  bool contains(const RatVec& point) const;
  Polytope intersected_with(const std::vector<Constraint>& extra) const;

 private:
  Polytope() = default;
  std::size_t ambient_dim_ = 0;
  std::vector<Constraint> constraints_;
  std::vector<RatVec> vertices_;
  std::vector<IntVec> rays_;
  std::vector<IntVec> lineality_;
  ExtInt dim_ = ExtInt::neg_inf();
};

// Integer points of a bounded polytope in lexicographic order. Throws
// InputError("unbounded") for unbounded input.
std::vector<LatticePoint> lattice_points(const Polytope& poly);
std::uint64_t count_lattice_points(const Polytope& poly);
// Visits the integer points in lexicographic order until visit returns false.
void for_each_lattice_point(const Polytope& poly, const std::function<bool(const LatticePoint&)>& visit);

// Volume of `poly` measured in the coordinates of `direction_basis`, a basis
// of a lattice spanning the direction space of poly's affine hull.
Rational lattice_volume(const Polytope& poly, const std::vector<IntVec>& direction_basis);

}  // namespace kodaira
