#pragma once

#include "kodaira/numeric.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace kodaira {

// Dense row-major integer matrix.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  static IntMatrix identity(std::size_t n);
  // All rows must share one length; an empty list yields a 0×cols matrix.
  static IntMatrix from_rows(const std::vector<IntVec>& rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  IntVec row(std::size_t r) const;
  std::vector<IntVec> row_list() const;
  IntMatrix transpose() const;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix& a, const IntMatrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

struct HermiteResult {
  IntMatrix hermite_form;  // = transform * input
  IntMatrix transform;     // unimodular
  std::size_t rank = 0;    // number of nonzero rows, which come first
};

// Row Hermite normal form: pivots positive and strictly to the right of the
// previous row's pivot, entries above a pivot reduced into [0, pivot).
HermiteResult hnf(const IntMatrix& mat);

Integer determinant(const IntMatrix& square);

// Rank over Q of a list of rational vectors.
std::size_t rank_of(const std::vector<RatVec>& vectors);
std::size_t rank_of(const std::vector<IntVec>& vectors);

// Incrementally tracks the Q-span of the vectors added so far.
class SpanTracker {
 public:
  explicit SpanTracker(std::size_t dim) : dim_(dim) {}
  // Returns true when v was independent of the current span.
  bool add(const RatVec& v);
  bool add(const LatticePoint& v);
  bool contains(const RatVec& v) const;
  std::size_t rank() const { return basis_.size(); }
  std::size_t dim() const { return dim_; }

 private:
  RatVec reduce(RatVec v) const;
  std::size_t dim_;
  std::vector<RatVec> basis_;         // echelon, pivot entry 1
  std::vector<std::size_t> pivots_;
};

// Affine dimension of a finite point set; -1 stands for the empty set and is
// converted to ExtInt by callers.
int affine_rank(const std::vector<LatticePoint>& points);
int affine_rank(const std::vector<RatVec>& points);

// Basis (rows) of {y ∈ Z^n : A y = 0}. The basis is saturated and extends to
// a basis of Z^n.
std::vector<IntVec> integer_kernel(const std::vector<IntVec>& rows, std::size_t n);

// Basis of span_R(generators) ∩ Z^n.
std::vector<IntVec> saturation(const std::vector<IntVec>& generators, std::size_t n);

// Solves sum_i c_i basis_i = v over Q. Returns nullopt when v is not in the
// span. The basis must be linearly independent.
std::optional<RatVec> coordinates_in(const std::vector<IntVec>& basis, const RatVec& v);

struct RankIndex {
  std::size_t rank = 0;
  std::optional<Integer> index;  // nullopt = infinite
};

// Rank of the subgroup G generated by `generators` and its index in the
// lattice spanned by `ambient_basis`; the index is infinite unless the ranks
// agree. Throws InputError("not in ambient lattice") for a generator outside
// the ambient lattice.
RankIndex subgroup_rank_index(const std::vector<IntVec>& generators,
                              const std::vector<IntVec>& ambient_basis);

// Grows a Z-basis (HNF rows) of the group generated by the vectors added so
// far; members of the current group are skipped cheaply.
class LatticeAccumulator {
 public:
  explicit LatticeAccumulator(std::size_t n) : n_(n) {}
  void add(const IntVec& v);
  bool contains(const IntVec& v) const;
  // True once the group is all of Z^n.
  bool is_standard() const;
  const std::vector<IntVec>& basis() const { return basis_; }

 private:
  std::size_t n_;
  std::vector<IntVec> basis_;
};

// Z-basis (HNF rows) of the group generated by the vectors.
std::vector<IntVec> lattice_basis(const std::vector<IntVec>& generators, std::size_t n);

}  // namespace kodaira
