#include "kodaira/lattice.hpp"

#include <algorithm>
#include <utility>

namespace kodaira {

namespace mp = boost::multiprecision;

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<IntVec>& rows, std::size_t cols) {
  IntMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw InputError("ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

IntVec IntMatrix::row(std::size_t r) const {
  return IntVec(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

std::vector<IntVec> IntMatrix::row_list() const {
  std::vector<IntVec> out;
  out.reserve(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out.push_back(row(r));
  return out;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw Error("matrix product dimension mismatch");
  IntMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += a(i, k) * b(k, j);
    }
  return out;
}

namespace {

// Extended gcd with g >= 0: s*a + t*b = g.
void ext_gcd(const Integer& a, const Integer& b, Integer& g, Integer& s, Integer& t) {
  Integer old_r = a, r = b, old_s = 1, s1 = 0, old_t = 0, t1 = 1;
  while (r != 0) {
    Integer q = old_r / r;
    Integer tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s1;
    old_s = s1;
    s1 = tmp;
    tmp = old_t - q * t1;
    old_t = t1;
    t1 = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  g = old_r;
  s = old_s;
  t = old_t;
}

// Replaces rows (i, j) of m by (s*Ri + t*Rj, u*Ri + v*Rj).
void combine_rows(IntMatrix& m, std::size_t i, std::size_t j, const Integer& s, const Integer& t,
                  const Integer& u, const Integer& v) {
  for (std::size_t c = 0; c < m.cols(); ++c) {
    Integer a = m(i, c);
    Integer b = m(j, c);
    m(i, c) = s * a + t * b;
    m(j, c) = u * a + v * b;
  }
}

void swap_rows(IntMatrix& m, std::size_t i, std::size_t j) {
  for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(i, c), m(j, c));
}

}  // namespace

namespace {

HermiteResult hnf_impl(const IntMatrix& mat, bool with_transform) {
  HermiteResult res{mat, IntMatrix::identity(with_transform ? mat.rows() : 0), 0};
  if (!with_transform) res.transform = IntMatrix(mat.rows(), 0);
  IntMatrix& h = res.hermite_form;
  IntMatrix& u = res.transform;
  std::size_t row = 0;
  for (std::size_t col = 0; col < h.cols() && row < h.rows(); ++col) {
    for (std::size_t r = row + 1; r < h.rows(); ++r) {
      if (h(r, col) == 0) continue;
      if (h(row, col) == 0) {
        swap_rows(h, row, r);
        swap_rows(u, row, r);
        continue;
      }
      Integer g, s, t;
      Integer a = h(row, col);
      Integer b = h(r, col);
      ext_gcd(a, b, g, s, t);
      Integer ua = -b / g;
      Integer va = a / g;
      combine_rows(h, row, r, s, t, ua, va);
      combine_rows(u, row, r, s, t, ua, va);
    }
    if (h(row, col) == 0) continue;
    if (h(row, col) < 0) {
      for (std::size_t c = 0; c < h.cols(); ++c) h(row, c) = -h(row, c);
      for (std::size_t c = 0; c < u.cols(); ++c) u(row, c) = -u(row, c);
    }
    const Integer pivot = h(row, col);
    for (std::size_t i = 0; i < row; ++i) {
      Integer q = floor_of(Rational(h(i, col), pivot));
      if (q == 0) continue;
      for (std::size_t c = 0; c < h.cols(); ++c) h(i, c) -= q * h(row, c);
      for (std::size_t c = 0; c < u.cols(); ++c) u(i, c) -= q * u(row, c);
    }
    ++row;
  }
  res.rank = row;
  return res;
}

}  // namespace

HermiteResult hnf(const IntMatrix& mat) {
  return hnf_impl(mat, true);
}

Integer determinant(const IntMatrix& square) {
  if (square.rows() != square.cols()) throw Error("determinant of non-square matrix");
  std::size_t n = square.rows();
  if (n == 0) return 1;
  // Bareiss fraction-free elimination.
  IntMatrix m = square;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      swap_rows(m, k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

RatVec SpanTracker::reduce(RatVec v) const {
  for (std::size_t b = 0; b < basis_.size(); ++b) {
    const Rational f = v[pivots_[b]];
    if (f == 0) continue;
    for (std::size_t i = 0; i < dim_; ++i)
      if (basis_[b][i] != 0) v[i] -= f * basis_[b][i];
  }
  return v;
}

bool SpanTracker::add(const RatVec& v) {
  if (basis_.size() == dim_) return false;
  RatVec r = reduce(v);
  std::size_t p = 0;
  while (p < dim_ && r[p] == 0) ++p;
  if (p == dim_) return false;
  const Rational lead = r[p];
  for (auto& x : r) x /= lead;
  // Keep the basis fully reduced so that reduce() stays a single pass.
  for (auto& b : basis_) {
    const Rational f = b[p];
    if (f == 0) continue;
    for (std::size_t i = 0; i < dim_; ++i) b[i] -= f * r[i];
  }
  basis_.push_back(std::move(r));
  pivots_.push_back(p);
  return true;
}

bool SpanTracker::add(const LatticePoint& v) {
  return add(to_rat_vec(v));
}

bool SpanTracker::contains(const RatVec& v) const {
  RatVec r = reduce(v);
  return std::all_of(r.begin(), r.end(), [](const Rational& x) { return x == 0; });
}

std::size_t rank_of(const std::vector<RatVec>& vectors) {
  if (vectors.empty()) return 0;
  SpanTracker t(vectors.front().size());
  for (const auto& v : vectors) t.add(v);
  return t.rank();
}

std::size_t rank_of(const std::vector<IntVec>& vectors) {
  if (vectors.empty()) return 0;
  SpanTracker t(vectors.front().size());
  for (const auto& v : vectors) t.add(to_rat_vec(v));
  return t.rank();
}

int affine_rank(const std::vector<LatticePoint>& points) {
  if (points.empty()) return -1;
  const std::size_t n = points.front().size();
  SpanTracker t(n);
  RatVec diff(n);
  for (std::size_t i = 1; i < points.size() && t.rank() < n; ++i) {
    bool same = true;
    for (std::size_t j = 0; j < n; ++j) {
      diff[j] = points[i][j] - points[0][j];
      same = same && diff[j] == 0;
    }
    if (!same) t.add(diff);
  }
  return static_cast<int>(t.rank());
}

int affine_rank(const std::vector<RatVec>& points) {
  if (points.empty()) return -1;
  const std::size_t n = points.front().size();
  SpanTracker t(n);
  RatVec diff(n);
  for (std::size_t i = 1; i < points.size() && t.rank() < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) diff[j] = points[i][j] - points[0][j];
    t.add(diff);
  }
  return static_cast<int>(t.rank());
}

std::vector<IntVec> integer_kernel(const std::vector<IntVec>& rows, std::size_t n) {
  if (rows.empty()) {
    std::vector<IntVec> basis;
    for (std::size_t i = 0; i < n; ++i) {
      IntVec e(n, 0);
      e[i] = 1;
      basis.push_back(e);
    }
    return basis;
  }
  // Row-reduce A^T: rows of the transform paired with zero rows of the
  // Hermite form span the integer left kernel of A^T.
  IntMatrix at = IntMatrix::from_rows(rows, n).transpose();
  HermiteResult h = hnf(at);
  std::vector<IntVec> basis;
  for (std::size_t r = h.rank; r < at.rows(); ++r) basis.push_back(h.transform.row(r));
  if (!basis.empty()) basis = hnf(IntMatrix::from_rows(basis, n)).hermite_form.row_list();
  return basis;
}

std::vector<IntVec> saturation(const std::vector<IntVec>& generators, std::size_t n) {
  std::vector<IntVec> nonzero;
  for (const auto& g : generators)
    if (std::any_of(g.begin(), g.end(), [](const Integer& x) { return x != 0; })) nonzero.push_back(g);
  if (nonzero.empty()) return {};
  auto orth = integer_kernel(nonzero, n);
  auto sat = integer_kernel(orth, n);
  return sat;
}

std::optional<RatVec> coordinates_in(const std::vector<IntVec>& basis, const RatVec& v) {
  const std::size_t q = basis.size();
  const std::size_t n = v.size();
  // Solve the n×q system B^T c = v by Gaussian elimination on [B^T | v].
  std::vector<RatVec> aug(n, RatVec(q + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < q; ++j) aug[i][j] = Rational(basis[j][i]);
    aug[i][q] = v[i];
  }
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < q && row < n; ++col) {
    std::size_t p = row;
    while (p < n && aug[p][col] == 0) ++p;
    if (p == n) continue;
    std::swap(aug[row], aug[p]);
    const Rational lead = aug[row][col];
    for (auto& x : aug[row]) x /= lead;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == row || aug[i][col] == 0) continue;
      const Rational f = aug[i][col];
      for (std::size_t j = 0; j <= q; ++j) aug[i][j] -= f * aug[row][j];
    }
    pivot_col.push_back(col);
    ++row;
  }
  if (row < q) throw Error("coordinates_in: basis is linearly dependent");
  for (std::size_t i = row; i < n; ++i)
    if (aug[i][q] != 0) return std::nullopt;
  RatVec c(q);
  for (std::size_t r = 0; r < row; ++r) c[pivot_col[r]] = aug[r][q];
  return c;
}

RankIndex subgroup_rank_index(const std::vector<IntVec>& generators,
                              const std::vector<IntVec>& ambient_basis) {
  const std::size_t q = ambient_basis.size();
  if (q > 0 && rank_of(ambient_basis) != q) throw InputError("ambient basis is linearly dependent");
  std::vector<IntVec> coords;
  coords.reserve(generators.size());
  for (const auto& g : generators) {
    auto c = q == 0 ? std::optional<RatVec>(RatVec{}) : coordinates_in(ambient_basis, to_rat_vec(g));
    if (q == 0 && std::any_of(g.begin(), g.end(), [](const Integer& x) { return x != 0; })) c.reset();
    if (!c) throw InputError("not in ambient lattice");
    IntVec row;
    for (const auto& x : *c) {
      if (mp::denominator(x) != 1) throw InputError("not in ambient lattice");
      row.push_back(mp::numerator(x));
    }
    coords.push_back(std::move(row));
  }
  RankIndex out;
  if (q == 0) {
    out.index = Integer(1);
    return out;
  }
  if (coords.empty()) return out;
  HermiteResult h = hnf(IntMatrix::from_rows(coords, q));
  out.rank = h.rank;
  if (h.rank == q) {
    Integer idx = 1;
    for (std::size_t i = 0; i < q; ++i) idx *= h.hermite_form(i, i);
    out.index = mp::abs(idx);
  }
  return out;
}

bool LatticeAccumulator::contains(const IntVec& v) const {
  IntVec rest = v;
  std::size_t col = 0;
  for (const auto& row : basis_) {
    while (row[col] == 0) {
      if (rest[col] != 0) return false;
      ++col;
    }
    if (rest[col] % row[col] != 0) return false;
    const Integer q = rest[col] / row[col];
    if (q != 0)
      for (std::size_t c = col; c < n_; ++c) rest[c] -= q * row[c];
    ++col;
  }
  for (; col < n_; ++col)
    if (rest[col] != 0) return false;
  return true;
}

bool LatticeAccumulator::is_standard() const {
  if (basis_.size() != n_) return false;
  for (std::size_t i = 0; i < n_; ++i)
    if (basis_[i][i] != 1) return false;
  return true;
}

void LatticeAccumulator::add(const IntVec& v) {
  if (v.size() != n_) throw Error("vector has wrong length");
  if (contains(v)) return;
  std::vector<IntVec> block = basis_;
  block.push_back(v);
  HermiteResult h = hnf_impl(IntMatrix::from_rows(block, n_), false);
  basis_.clear();
  for (std::size_t r = 0; r < h.rank; ++r) basis_.push_back(h.hermite_form.row(r));
}

std::vector<IntVec> lattice_basis(const std::vector<IntVec>& generators, std::size_t n) {
  LatticeAccumulator acc(n);
  for (const auto& g : generators) acc.add(g);
  return acc.basis();
}

}  // namespace kodaira
