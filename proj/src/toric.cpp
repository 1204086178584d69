#include "kodaira/toric.hpp"

#include "kodaira/lattice.hpp"

#include <numeric>
#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

namespace kodaira {

namespace {

// Solves <x, rows_i> = rhs_i for a square nonsingular system.
std::optional<RatVec> solve_square(const std::vector<IntVec>& rows, const RatVec& rhs) {
  const std::size_t d = rows.size();
  std::vector<RatVec> a(d, RatVec(d + 1));
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) a[r][c] = Rational(rows[r][c]);
    a[r][d] = rhs[r];
  }
  for (std::size_t c = 0; c < d; ++c) {
    std::size_t p = c;
    while (p < d && a[p][c] == 0) ++p;
    if (p == d) return std::nullopt;
    std::swap(a[p], a[c]);
    for (std::size_t r = 0; r < d; ++r) {
      if (r == c || a[r][c] == 0) continue;
      const Rational f = a[r][c] / a[c][c];
      for (std::size_t j = c; j <= d; ++j) a[r][j] -= f * a[c][j];
    }
  }
  RatVec out(d);
  for (std::size_t c = 0; c < d; ++c) out[c] = a[c][d] / a[c][c];
  return out;
}

std::vector<IntVec> cone_rows(const ToricVariety& x, const std::vector<std::size_t>& cone) {
  std::vector<IntVec> rows;
  for (auto i : cone) rows.push_back(x.rays[i]);
  return rows;
}

// Vertex of the divisor polytope attached to a maximal cone.
RatVec cone_vertex(const ToricVariety& x, const ToricDivisorData& d, const std::vector<std::size_t>& cone) {
  RatVec rhs;
  for (auto i : cone) rhs.push_back(-d.coeffs[i]);
  return *solve_square(cone_rows(x, cone), rhs);
}

void check_divisor(const ToricVariety& x, const ToricDivisorData& d) {
  if (d.coeffs.size() != x.ray_count()) throw InputError("divisor has wrong number of coefficients");
}

Rational frac_of(const Rational& q) {
  return q - Rational(floor_of(q));
}

}  // namespace

ToricVariety ToricVariety::projective_space(std::size_t n) {
  if (n == 0) throw InputError("projective space needs dimension >= 1");
  std::vector<IntVec> rays;
  IntVec last(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    IntVec e(n, 0);
    e[i] = 1;
    rays.push_back(e);
  }
  rays.push_back(last);
  std::vector<std::vector<std::size_t>> cones;
  for (std::size_t skip = n + 1; skip-- > 0;) {
    std::vector<std::size_t> c;
    for (std::size_t i = 0; i <= n; ++i)
      if (i != skip) c.push_back(i);
    cones.push_back(c);
  }
  return from_fan(n, rays, cones, "P" + std::to_string(n));
}

ToricVariety ToricVariety::product(const ToricVariety& x, const ToricVariety& y) {
  const std::size_t n = x.n + y.n;
  std::vector<IntVec> rays;
  for (const auto& r : x.rays) {
    IntVec v(n, 0);
    std::copy(r.begin(), r.end(), v.begin());
    rays.push_back(v);
  }
  for (const auto& r : y.rays) {
    IntVec v(n, 0);
    std::copy(r.begin(), r.end(), v.begin() + static_cast<std::ptrdiff_t>(x.n));
    rays.push_back(v);
  }
  std::vector<std::vector<std::size_t>> cones;
  for (const auto& cx : x.max_cones)
    for (const auto& cy : y.max_cones) {
      std::vector<std::size_t> c = cx;
      for (auto i : cy) c.push_back(i + x.ray_count());
      cones.push_back(c);
    }
  return from_fan(n, rays, cones, x.name + "x" + y.name);
}

ToricVariety ToricVariety::hirzebruch(std::int64_t a) {
  if (a < 0) throw InputError("hirzebruch parameter must be nonnegative");
  return from_fan(2, {{1, 0}, {0, 1}, {-1, a}, {0, -1}}, {{0, 1}, {1, 2}, {2, 3}, {3, 0}},
                  "F" + std::to_string(a));
}

ToricVariety ToricVariety::from_fan(std::size_t n, std::vector<IntVec> rays,
                                    std::vector<std::vector<std::size_t>> cones, std::string name) {
  ToricVariety x;
  x.n = n;
  x.rays = std::move(rays);
  x.max_cones = std::move(cones);
  for (auto& c : x.max_cones) std::sort(c.begin(), c.end());
  x.name = std::move(name);
  x.validate();
  return x;
}

void ToricVariety::validate() const {
  if (n == 0) throw InputError("fan needs lattice rank >= 1");
  std::set<IntVec> distinct;
  for (const auto& r : rays) {
    if (r.size() != n) throw InputError("ray has wrong length");
    IntVec p = r;
    make_primitive(p);
    if (p != r || std::all_of(r.begin(), r.end(), [](const Integer& z) { return z == 0; }))
      throw InputError("ray is not primitive");
    if (!distinct.insert(r).second) throw InputError("repeated ray");
  }
  if (max_cones.empty()) throw InputError("fan has no cones");
  for (const auto& c : max_cones) {
    if (c.size() != n) throw InputError("maximal cone must have n rays");
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] >= rays.size()) throw InputError("cone ray index out of range");
      if (i > 0 && c[i] == c[i - 1]) throw InputError("cone repeats a ray");
    }
    if (abs(determinant(IntMatrix::from_rows(cone_rows(*this, c), n))) != 1)
      throw InputError("fan is not smooth");
  }
  // Every wall lies in exactly two cones, on opposite sides.
  std::map<std::vector<std::size_t>, std::vector<std::pair<std::size_t, std::size_t>>> walls;
  for (std::size_t ci = 0; ci < max_cones.size(); ++ci)
    for (std::size_t drop = 0; drop < n; ++drop) {
      std::vector<std::size_t> wall;
      for (std::size_t j = 0; j < n; ++j)
        if (j != drop) wall.push_back(max_cones[ci][j]);
      walls[wall].emplace_back(ci, max_cones[ci][drop]);
    }
  for (const auto& [wall, users] : walls) {
    if (users.size() != 2) throw InputError("fan is not complete");
    IntVec normal;
    if (n == 1) {
      normal = {1};
    } else {
      auto ker = integer_kernel(cone_rows(*this, wall), n);
      normal = ker.front();
    }
    const Integer s0 = dot(normal, rays[users[0].second]);
    const Integer s1 = dot(normal, rays[users[1].second]);
    if (s0 * s1 >= 0) throw InputError("fan is not complete");
  }
  // A generic point lies in the interior of exactly one cone.
  RatVec p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = Rational(static_cast<long>(1000 + 37 * i * i + 11 * i), 997 + i);
  std::size_t hits = 0;
  for (const auto& c : max_cones) {
    auto coords = coordinates_in(cone_rows(*this, c), p);
    if (coords && std::all_of(coords->begin(), coords->end(), [](const Rational& q) { return q > 0; })) ++hits;
  }
  if (hits != 1) throw InputError("fan is not complete");
}

ToricDivisorData ToricDivisorData::canonical(const ToricVariety& x) {
  return {std::vector<Rational>(x.ray_count(), Rational(-1))};
}

Integer ToricDivisorData::k0() const {
  Integer l = 1;
  for (const auto& c : coeffs) l = lcm_of(l, denominator(c));
  return l;
}

ToricDivisorData ToricDivisorData::scaled(const Rational& f) const {
  ToricDivisorData out = *this;
  for (auto& c : out.coeffs) c *= f;
  return out;
}

ToricDivisorData operator+(const ToricDivisorData& a, const ToricDivisorData& b) {
  if (a.coeffs.size() != b.coeffs.size()) throw InputError("divisor size mismatch");
  ToricDivisorData out = a;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] += b.coeffs[i];
  return out;
}

Polytope divisor_polytope(const ToricVariety& x, const ToricDivisorData& d, const Integer& k) {
  check_divisor(x, d);
  std::vector<Constraint> cs;
  for (std::size_t i = 0; i < x.ray_count(); ++i) {
    const Rational b = d.coeffs[i] * k;
    if (denominator(b) != 1) throw InputError("needs multiple of k₀");
    cs.push_back({x.rays[i], -b});
  }
  return Polytope::from_constraints(x.n, std::move(cs));
}

std::uint64_t h0(const ToricVariety& x, const ToricDivisorData& d) {
  return count_lattice_points(divisor_polytope(x, d, 1));
}

bool is_nef(const ToricVariety& x, const ToricDivisorData& d) {
  check_divisor(x, d);
  for (const auto& c : x.max_cones) {
    const RatVec m = cone_vertex(x, d, c);
    for (std::size_t i = 0; i < x.ray_count(); ++i)
      if (dot(x.rays[i], m) < -d.coeffs[i]) return false;
  }
  return true;
}

bool is_ample(const ToricVariety& x, const ToricDivisorData& d) {
  check_divisor(x, d);
  for (const auto& c : x.max_cones) {
    const RatVec m = cone_vertex(x, d, c);
    for (std::size_t i = 0; i < x.ray_count(); ++i) {
      if (std::binary_search(c.begin(), c.end(), i)) continue;
      if (dot(x.rays[i], m) <= -d.coeffs[i]) return false;
    }
  }
  return true;
}

ToricDivisorData find_ample(const ToricVariety& x) {
  const std::size_t r = x.ray_count();
  constexpr int kMaxCoeff = 6;
  std::vector<Rational> b(r);
  std::optional<ToricDivisorData> found;
  // Coefficient vectors by increasing sum, lexicographically within a sum.
  std::function<bool(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i + 1 == r) {
      if (left > kMaxCoeff) return false;
      b[i] = left;
      ToricDivisorData d{b};
      if (is_ample(x, d)) {
        found = d;
        return true;
      }
      return false;
    }
    for (int c = std::min(left, kMaxCoeff); c >= 0; --c) {
      b[i] = c;
      if (rec(i + 1, left - c)) return true;
    }
    return false;
  };
  for (int total = 1; total <= kMaxCoeff * static_cast<int>(r); ++total)
    if (rec(0, total)) return *found;
  throw DegenerateError("no ample divisor found");
}

Polytope section_polytope(const ToricVariety& x, const ToricDivisorData& m, const SingularMetricData& h,
                          std::int64_t k, const ToricDivisorData* e) {
  check_divisor(x, m);
  if (e) check_divisor(x, *e);
  if (k < 1) throw InputError("degree must be positive");
  const Integer level = m.k0() * k;
  std::vector<Constraint> cs;
  for (std::size_t i = 0; i < x.ray_count(); ++i) {
    Rational b = m.coeffs[i] * level;
    if (e) b += e->coeffs[i];
    if (denominator(b) != 1) throw InputError("needs multiple of k₀");
    cs.push_back({x.rays[i], -b + h.coeff(i, level)});
  }
  return Polytope::from_constraints(x.n, std::move(cs));
}

std::vector<LatticePoint> sections_of(const ToricVariety& x, const ToricDivisorData& m,
                                      const SingularMetricData& h, std::int64_t k, const ToricDivisorData* e) {
  return lattice_points(section_polytope(x, m, h, k, e));
}

SectionSystem SectionSystem::from_sets(std::size_t n, std::vector<std::vector<LatticePoint>> sets) {
  SectionSystem sys;
  sys.n_ = n;
  if (sets.empty()) sets.emplace_back();
  sets[0] = {LatticePoint(n, 0)};
  for (auto& s : sets) {
    for (const auto& p : s)
      if (p.size() != n) throw InputError("exponent has wrong length");
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    sys.counts_.push_back(s.size());
  }
  sys.sets_ = std::move(sets);
  return sys;
}

SectionSystem SectionSystem::from_polytopes(std::size_t n, Integer k0, std::vector<Polytope> polys) {
  SectionSystem sys;
  sys.n_ = n;
  sys.k0_ = std::move(k0);
  if (polys.empty()) polys.push_back(Polytope::empty(n));
  polys[0] = Polytope::from_constraints(n, {});
  sys.counts_.push_back(1);
  for (std::size_t k = 1; k < polys.size(); ++k) {
    if (polys[k].ambient_dim() != n) throw InputError("polytope has wrong dimension");
    sys.counts_.push_back(count_lattice_points(polys[k]));
  }
  sys.polys_ = std::move(polys);
  return sys;
}

void SectionSystem::for_each(std::int64_t k, const std::function<bool(const LatticePoint&)>& visit) const {
  if (k < 0 || k > max_degree()) throw InputError("degree beyond bound");
  if (k == 0) {
    visit(LatticePoint(n_, 0));
    return;
  }
  if (!sets_.empty()) {
    for (const auto& p : sets_[static_cast<std::size_t>(k)])
      if (!visit(p)) return;
    return;
  }
  for_each_lattice_point(polys_[static_cast<std::size_t>(k)], visit);
}

std::vector<LatticePoint> SectionSystem::points(std::int64_t k) const {
  std::vector<LatticePoint> out;
  for_each(k, [&](const LatticePoint& p) {
    out.push_back(p);
    return true;
  });
  return out;
}

int SectionSystem::affine_dim(std::int64_t k) const {
  if (count(k) == 0) return -1;
  std::size_t cap = n_;
  if (sets_.empty() && k > 0) cap = static_cast<std::size_t>(polys_[static_cast<std::size_t>(k)].dim().value());
  SpanTracker span(n_);
  LatticePoint first;
  RatVec diff(n_);
  for_each(k, [&](const LatticePoint& p) {
    if (first.empty()) {
      first = p;
      return span.rank() < cap;
    }
    for (std::size_t j = 0; j < n_; ++j) diff[j] = p[j] - first[j];
    span.add(diff);
    return span.rank() < cap;
  });
  return static_cast<int>(span.rank());
}

std::vector<std::int64_t> SectionSystem::support() const {
  std::vector<std::int64_t> out;
  for (std::size_t k = 1; k < counts_.size(); ++k)
    if (counts_[k] > 0) out.push_back(static_cast<std::int64_t>(k));
  return out;
}

SectionSystem section_system(const ToricVariety& x, const ToricDivisorData& m, const SingularMetricData& h,
                             std::int64_t max_degree, const ToricDivisorData* e) {
  if (max_degree < 1) throw InputError("degree bound must be positive");
  std::vector<Polytope> polys(static_cast<std::size_t>(max_degree) + 1, Polytope::empty(x.n));
  for (std::int64_t k = 1; k <= max_degree; ++k) polys[k] = section_polytope(x, m, h, k, e);
  return SectionSystem::from_polytopes(x.n, m.k0(), std::move(polys));
}

KappaValue kappa1(const SectionSystem& sys) {
  KappaValue out;
  const std::size_t n = sys.n();
  LatticeAccumulator acc(n);
  IntVec d(n);
  for (auto k : sys.support()) {
    const std::size_t before = acc.basis().size();
    LatticePoint first;
    sys.for_each(k, [&](const LatticePoint& p) {
      if (first.empty()) {
        first = p;
        return true;
      }
      for (std::size_t j = 0; j < n; ++j) d[j] = p[j] - first[j];
      acc.add(d);
      return !acc.is_standard();
    });
    if (out.degree == 0 || acc.basis().size() > before) out.degree = k;
  }
  if (out.degree == 0) return out;
  std::vector<IntVec> ambient;
  for (std::size_t i = 0; i < n; ++i) {
    IntVec e(n, 0);
    e[i] = 1;
    ambient.push_back(e);
  }
  out.value = static_cast<int>(subgroup_rank_index(acc.basis(), ambient).rank);
  return out;
}

KappaValue kappa2(const SectionSystem& sys) {
  KappaValue out;
  for (auto k : sys.support()) {
    const int d = sys.affine_dim(k);
    if (out.value < ExtInt(d)) {
      out.value = d;
      out.degree = k;
    }
  }
  return out;
}

GrowthFit growth_order(const std::vector<std::pair<std::int64_t, std::uint64_t>>& samples) {
  GrowthFit fit;
  std::vector<std::pair<double, double>> pts;
  for (auto [k, c] : samples)
    if (c > 0) pts.emplace_back(std::log(static_cast<double>(k)), std::log(static_cast<double>(c)));
  if (pts.empty()) return fit;
  if (pts.size() < 2) throw CrossCheckError("degree bound too small");
  double mx = 0, my = 0;
  for (auto [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxy = 0, sxx = 0;
  for (auto [x, y] : pts) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  const double slope = sxx == 0 ? 0.0 : sxy / sxx;
  fit.slope = slope;
  fit.order = static_cast<int>(std::max<long long>(0, std::llround(slope)));
  return fit;
}

Kappa3Value kappa3(const SectionSystem& sys) {
  Kappa3Value out;
  const auto n = sys.support();
  if (n.empty()) return out;
  out.degree = n.back();
  out.value = sys.affine_dim(out.degree);
  const std::int64_t top = sys.max_degree();
  std::vector<std::pair<std::int64_t, std::uint64_t>> samples;
  for (auto k : n)
    if (2 * k >= top) samples.emplace_back(k, sys.count(k));
  GrowthFit fit = growth_order(samples);
  out.slope = fit.slope;
  if (fit.order != out.value) throw CrossCheckError("degree bound too small");
  return out;
}

ExtInt asymptotic_dimension(const ToricVariety& x, const ToricDivisorData& m, const SingularMetricData& h,
                            const ToricDivisorData* e, std::int64_t stride) {
  check_divisor(x, m);
  if (e) check_divisor(x, *e);
  if (stride < 1) throw InputError("stride must be positive");
  const std::size_t r = x.ray_count();
  const Integer k0 = m.k0();
  std::vector<Rational> alpha(r), mu(r);
  Integer period = 1;
  for (std::size_t i = 0; i < r; ++i) {
    mu[i] = h.weight(i);
    alpha[i] = (coeff_limit(mu[i]) - m.coeffs[i]) * k0;
    if (mu[i] >= 1) period = lcm_of(period, denominator(Rational(mu[i] * k0)));
  }
  if (e && !e->integral()) throw InputError("needs multiple of k₀");

  std::vector<Constraint> q_cs;
  for (std::size_t i = 0; i < r; ++i) q_cs.push_back({x.rays[i], alpha[i]});
  const Polytope q = Polytope::from_constraints(x.n, q_cs);
  if (q.is_empty()) return ExtInt::neg_inf();

  // Faces of Q keyed by their tight constraint sets.
  std::map<std::vector<std::size_t>, int> faces;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << r); ++mask) {
    std::vector<Constraint> extra;
    for (std::size_t i = 0; i < r; ++i)
      if (mask >> i & 1) {
        IntVec neg = x.rays[i];
        for (auto& z : neg) z = -z;
        extra.push_back({neg, -alpha[i]});
      }
    const Polytope f = q.intersected_with(extra);
    if (f.is_empty()) continue;
    std::vector<std::size_t> tight;
    for (std::size_t i = 0; i < r; ++i) {
      bool all = true;
      for (const auto& v : f.vertices()) all = all && dot(x.rays[i], v) == alpha[i];
      if (all) tight.push_back(i);
    }
    faces.emplace(tight, f.dim().value());
  }

  ExtInt best = ExtInt::neg_inf();
  std::set<Integer> residues;
  for (Integer j = 1; j <= period; ++j) residues.insert((j * stride) % period);
  for (const auto& res : residues) {
    std::vector<Rational> beta(r);
    for (std::size_t i = 0; i < r; ++i) {
      beta[i] = e ? Rational(-e->coeffs[i]) : Rational(0);
      if (mu[i] >= 1) beta[i] += 1 - frac_of(mu[i] * k0 * res);
    }
    for (const auto& [tight, dim] : faces) {
      if (best >= ExtInt(dim)) continue;
      std::vector<Constraint> cs;
      for (auto i : tight) cs.push_back({x.rays[i], beta[i]});
      if (!Polytope::from_constraints(x.n, cs).is_empty()) best = dim;
    }
  }
  return best;
}

std::optional<ExtInt> difference_order(const std::vector<std::uint64_t>& values) {
  const bool all_zero = std::all_of(values.begin(), values.end(), [](std::uint64_t v) { return v == 0; });
  if (all_zero) return ExtInt::neg_inf();
  if (std::find(values.begin(), values.end(), std::uint64_t{0}) != values.end()) return std::nullopt;
  std::vector<Integer> row(values.begin(), values.end());
  for (int d = 0; row.size() >= 2; ++d) {
    std::vector<Integer> next;
    for (std::size_t i = 1; i < row.size(); ++i) next.push_back(row[i] - row[i - 1]);
    if (std::all_of(next.begin(), next.end(), [](const Integer& z) { return z == 0; })) return ExtInt(d);
    row = std::move(next);
  }
  return std::nullopt;
}

std::int64_t count_period(const ToricVariety& x, const ToricDivisorData& m, const SingularMetricData& h) {
  const Integer k0 = m.k0();
  const std::size_t r = x.ray_count();
  Integer period = 1;
  RatVec alpha(r);
  for (std::size_t i = 0; i < r; ++i) {
    const Rational mu = h.weight(i);
    // Unclamped coefficients stay linear in k below mu = 1 as well.
    const Rational slope = h.clamp ? coeff_limit(mu) : Rational(mu - 1);
    alpha[i] = (slope - m.coeffs[i]) * k0;
    if (mu >= 1 || (!h.clamp && mu > 0)) period = lcm_of(period, denominator(Rational(mu * k0)));
  }
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (pick.size() == x.n) {
      std::vector<IntVec> rows;
      RatVec rhs;
      for (auto i : pick) {
        rows.push_back(x.rays[i]);
        rhs.push_back(alpha[i]);
      }
      auto sol = solve_square(rows, rhs);
      if (!sol) return;
      for (std::size_t i = 0; i < r; ++i)
        if (dot(x.rays[i], *sol) < alpha[i]) return;
      for (const auto& q : *sol) period = lcm_of(period, denominator(q));
      return;
    }
    for (std::size_t i = start; i < r; ++i) {
      pick.push_back(i);
      rec(i + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return to_int64(period);
}

std::int64_t certifying_degree(const ToricVariety& x, const ToricDivisorData& m, const SingularMetricData& h,
                               std::int64_t stride) {
  if (stride < 1) throw InputError("stride must be positive");
  const std::int64_t full = count_period(x, m, h);
  const std::int64_t period = full / std::gcd(full, stride);
  return 2 * period * static_cast<std::int64_t>(x.n + 2);
}

GrowthOptions certified(const GrowthOptions& opts, const ToricVariety& x, const ToricDivisorData& m,
                        const SingularMetricData& h) {
  GrowthOptions out = opts;
  out.max_degree = std::max(opts.max_degree, certifying_degree(x, m, h, opts.stride));
  return out;
}

GrowthFit periodic_growth(const std::function<std::uint64_t(std::int64_t)>& count, std::int64_t full_period,
                          const GrowthOptions& opts, std::int64_t needed_degree, std::size_t min_samples) {
  if (opts.stride < 1) throw InputError("stride must be positive");
  if (opts.max_degree < 2) throw InputError("degree bound must be at least 2");
  // Along degrees stride·j the period in j shrinks by the common factor.
  const std::int64_t period = full_period / std::gcd(full_period, opts.stride);
  const std::int64_t lo = (opts.max_degree + 1) / 2;
  std::vector<std::pair<std::int64_t, std::uint64_t>> samples;
  for (std::int64_t j = lo; j <= opts.max_degree; ++j) samples.emplace_back(j * opts.stride, count(j * opts.stride));
  GrowthFit fit;
  fit.period = period;
  std::size_t nonempty = 0;
  for (const auto& s : samples) nonempty += s.second > 0;
  if (nonempty >= 2) fit.slope = growth_order(samples).slope;
  for (std::int64_t residue = 0; residue < period; ++residue) {
    std::vector<std::uint64_t> values;
    for (std::size_t i = static_cast<std::size_t>(residue); i < samples.size(); i += static_cast<std::size_t>(period))
      values.push_back(samples[i].second);
    // Trailing run on which emptiness no longer changes.
    std::size_t start = values.size();
    while (start > 0 && (values[start - 1] == 0) == (values.back() == 0)) --start;
    values.erase(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(start));
    std::optional<ExtInt> order;
    if (values.size() >= min_samples) order = difference_order(values);
    if (!order)
      throw CrossCheckError("degree bound too small (try --max-degree " +
                            std::to_string(std::max(2 * opts.max_degree, needed_degree)) + ")");
    fit.order = max(fit.order, *order);
  }
  return fit;
}

GrowthFit empirical_growth(const ToricVariety& x, const ToricDivisorData& m, const SingularMetricData& h,
                           const ToricDivisorData* e, const GrowthOptions& opts) {
  return periodic_growth([&](std::int64_t k) { return count_lattice_points(section_polytope(x, m, h, k, e)); },
                         count_period(x, m, h), opts, certifying_degree(x, m, h, opts.stride), x.n + 2);
}

Polytope limit_polytope(const ToricVariety& x, const ToricDivisorData& m, const SingularMetricData& h) {
  check_divisor(x, m);
  std::vector<Constraint> cs;
  for (std::size_t i = 0; i < x.ray_count(); ++i) cs.push_back({x.rays[i], h.limit(i) - m.coeffs[i]});
  return Polytope::from_constraints(x.n, std::move(cs));
}

namespace {

SigmaResult perturbed(const ToricVariety& x, const ToricDivisorData& m, const SingularMetricData& h,
                      const ToricDivisorData& direction, const GrowthOptions& opts, ExtInt exact,
                      const char* label) {
  if (!direction.integral()) throw InputError("perturbation divisor must be integral");
  SigmaResult out;
  out.exact = exact;
  for (int mult = 1; mult <= 3; ++mult) {
    const ToricDivisorData e = direction.scaled(mult);
    out.per_multiple.push_back(empirical_growth(x, m, h, &e, opts));
    out.empirical = max(out.empirical, out.per_multiple.back().order);
  }
  if (out.exact != out.empirical)
    throw CrossCheckError(std::string(label) + " exact " + out.exact.str() + " but empirical " +
                          out.empirical.str());
  return out;
}

}  // namespace

SigmaResult kappa_sigma(const ToricVariety& x, const ToricDivisorData& m, const SingularMetricData& h,
                        const ToricDivisorData& ample, const GrowthOptions& opts) {
  if (!is_ample(x, ample)) throw InputError("perturbation divisor is not ample");
  return perturbed(x, m, h, ample, opts, limit_polytope(x, m, h).dim(), "kappa_sigma");
}

SigmaResult kappa_sigma_hor(const ToricVariety& x, const ToricDivisorData& m, const SingularMetricData& h,
                            const ToricDivisorData& pulled_back, const GrowthOptions& opts) {
  ExtInt exact = ExtInt::neg_inf();
  for (int mult = 1; mult <= 3; ++mult) {
    const ToricDivisorData e = pulled_back.scaled(mult);
    exact = max(exact, asymptotic_dimension(x, m, h, &e, opts.stride));
  }
  return perturbed(x, m, h, pulled_back, opts, exact, "kappa_sigma_hor");
}

}  // namespace kodaira
