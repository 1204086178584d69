#include "kodaira/semigroup.hpp"

#include <algorithm>
#include <numeric>

namespace kodaira {

namespace {

constexpr std::size_t kClosureSampleCap = 4096;

LatticePoint shifted(const LatticePoint& p, const LatticePoint& g, std::size_t n) {
  LatticePoint out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = p[i] + g[i];
  return out;
}

void sort_unique(std::vector<LatticePoint>& pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
}

std::vector<IntVec> unit_vectors(std::size_t count, std::size_t len) {
  std::vector<IntVec> out;
  for (std::size_t i = 0; i < count; ++i) {
    IntVec e(len, 0);
    e[i] = 1;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace

GradedSemigroup GradedSemigroup::from_generators(std::size_t n, std::vector<LatticePoint> generators) {
  for (const auto& g : generators) {
    if (g.size() != n + 1) throw InputError("generator has wrong length");
    if (g.back() <= 0) throw InputError("generator level must be positive");
  }
  GradedSemigroup sg;
  sg.n_ = n;
  sg.points_ = std::move(generators);
  sort_unique(sg.points_);
  sg.cache_.push_back({LatticePoint(n, 0)});
  return sg;
}

GradedSemigroup GradedSemigroup::from_levels(std::size_t n, std::vector<std::vector<LatticePoint>> levels,
                                             bool product_closed) {
  if (levels.empty()) levels.emplace_back();
  GradedSemigroup sg;
  sg.n_ = n;
  sg.degreewise_ = true;
  sg.product_closed_ = product_closed;
  levels[0] = {LatticePoint(n, 0)};
  for (std::size_t k = 1; k < levels.size(); ++k) {
    for (const auto& p : levels[k]) {
      if (p.size() != n) throw InputError("level point has wrong length");
      LatticePoint q = p;
      q.push_back(static_cast<std::int64_t>(k));
      sg.points_.push_back(std::move(q));
    }
    sort_unique(levels[k]);
  }
  sg.levels_ = std::move(levels);

  if (product_closed) {
    const std::size_t top = sg.levels_.size() - 1;
    for (std::size_t k = 1; k <= top; ++k) {
      for (std::size_t l = k; k + l <= top; ++l) {
        const auto& a = sg.levels_[k];
        const auto& b = sg.levels_[l];
        const auto& target = sg.levels_[k + l];
        const std::size_t pairs = a.size() * b.size();
        const std::size_t step = std::max<std::size_t>(1, pairs / kClosureSampleCap);
        for (std::size_t idx = 0; idx < pairs; idx += step) {
          LatticePoint s = shifted(a[idx / b.size()], b[idx % b.size()], n);
          if (!std::binary_search(target.begin(), target.end(), s))
            throw InputError("degreewise data is not product-closed at levels " + std::to_string(k) + "+" +
                             std::to_string(l));
        }
      }
    }
  }
  return sg;
}

std::optional<std::int64_t> GradedSemigroup::degree_bound() const {
  if (!degreewise_) return std::nullopt;
  return static_cast<std::int64_t>(levels_.size()) - 1;
}

const std::vector<LatticePoint>& GradedSemigroup::level_set(std::int64_t k) const {
  if (k < 0) throw InputError("negative degree");
  if (degreewise_) {
    if (k >= static_cast<std::int64_t>(levels_.size()))
      throw InputError("degree " + std::to_string(k) + " beyond bound " + std::to_string(levels_.size() - 1));
    return levels_[static_cast<std::size_t>(k)];
  }
  while (static_cast<std::int64_t>(cache_.size()) <= k) {
    const std::int64_t level = static_cast<std::int64_t>(cache_.size());
    std::vector<LatticePoint> next;
    for (const auto& g : points_) {
      if (g.back() > level) continue;
      for (const auto& p : cache_[static_cast<std::size_t>(level - g.back())]) next.push_back(shifted(p, g, n_));
    }
    sort_unique(next);
    cache_.push_back(std::move(next));
  }
  return cache_[static_cast<std::size_t>(k)];
}

std::uint64_t GradedSemigroup::hilbert(std::int64_t k) const {
  return level_set(k).size();
}

Polytope Regularization::level_slice(std::int64_t k) const {
  const std::size_t q = boundary_lattice.size();
  if (k < 0 || Integer(k) % m != 0) return Polytope::empty(q);
  const Integer t = Integer(k) / m;
  std::vector<Constraint> cs;
  for (const auto& c : cone.constraints()) {
    IntVec normal(q);
    for (std::size_t i = 0; i < q; ++i) normal[i] = dot(boundary_lattice[i], c.normal);
    cs.push_back({std::move(normal), Rational(-t * dot(level_generator, c.normal)) + c.bound});
  }
  return Polytope::from_constraints(q, std::move(cs));
}

std::uint64_t Regularization::hilbert_reg(std::int64_t k) const {
  if (k == 0) return 1;
  return count_lattice_points(level_slice(k));
}

Regularization regularize(const GradedSemigroup& sg) {
  const auto& pts = sg.spanning_points();
  if (pts.empty()) throw DegenerateError("empty semigroup");
  const std::size_t n = sg.ambient_rank();

  // Put the level first so that the HNF isolates one element of minimal
  // positive level and a basis of the level-0 part.
  std::vector<IntVec> rotated;
  rotated.reserve(pts.size());
  for (const auto& p : pts) {
    IntVec v(n + 1);
    v[0] = p[n];
    for (std::size_t i = 0; i < n; ++i) v[i + 1] = p[i];
    rotated.push_back(std::move(v));
  }
  std::vector<IntVec> basis_rot = lattice_basis(rotated, n + 1);

  Regularization reg;
  reg.n = n;
  for (const auto& b : basis_rot) {
    IntVec v(n + 1);
    for (std::size_t i = 0; i < n; ++i) v[i] = b[i + 1];
    v[n] = b[0];
    reg.group_basis.push_back(std::move(v));
  }
  reg.m = reg.group_basis.front()[n];
  reg.level_generator = reg.group_basis.front();
  reg.boundary_lattice.assign(reg.group_basis.begin() + 1, reg.group_basis.end());

  std::vector<IntVec> gens;
  gens.reserve(pts.size());
  for (const auto& p : pts) gens.push_back(to_int_vec(p));
  reg.cone = Polytope::cone(n + 1, gens);
  reg.strongly_convex = reg.cone.lineality_dim() == 0;

  if (reg.boundary_lattice.size() == n)
    reg.ind = subgroup_rank_index(reg.boundary_lattice, unit_vectors(n, n + 1)).index;

  IntVec level(n + 1, 0);
  level[n] = 1;
  IntVec neg_level(n + 1, 0);
  neg_level[n] = -1;
  reg.okounkov_body = reg.cone.intersected_with({{level, 1}, {neg_level, -1}});
  return reg;
}

GrowthReport growth_law_check(const Regularization& reg, std::int64_t k_max) {
  if (!reg.strongly_convex) throw DegenerateError("cone is not strongly convex");
  if (k_max <= 0) throw InputError("k_max must be positive");
  GrowthReport out;
  out.q = static_cast<int>(reg.boundary_lattice.size());
  out.m = reg.m;
  out.k_max = k_max;
  out.volume = lattice_volume(reg.okounkov_body, reg.boundary_lattice);
  Integer mq = 1;
  Integer kq = 1;
  for (int i = 0; i < out.q; ++i) {
    mq *= reg.m;
    kq *= k_max;
  }
  out.a_q_predicted = out.volume * mq;
  const std::int64_t level = to_int64(reg.m * k_max);
  out.a_q_empirical = Rational(Integer(reg.hilbert_reg(level))) / kq;
  out.relative_gap = abs(out.a_q_empirical - out.a_q_predicted) / out.a_q_predicted;
  if (static_cast<std::size_t>(out.q) == reg.n && reg.ind)
    out.euclidean_over_ind = lattice_volume(reg.okounkov_body, unit_vectors(reg.n, reg.n + 1)) / *reg.ind;
  return out;
}

GrowthReport growth_law_check(const GradedSemigroup& sg, std::int64_t k_max) {
  return growth_law_check(regularize(sg), k_max);
}

}  // namespace kodaira
