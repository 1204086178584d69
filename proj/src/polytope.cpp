#include "kodaira/polytope.hpp"

#include "kodaira/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <utility>

namespace kodaira {

namespace mp = boost::multiprecision;

namespace {

// Incidence set over processed constraints.
class Bits {
 public:
  void push(bool b) {
    if (size_ % 64 == 0) words_.push_back(0);
    if (b) words_.back() |= std::uint64_t{1} << (size_ % 64);
    ++size_;
  }
  Bits operator&(const Bits& o) const {
    Bits r = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] &= o.words_[i];
    return r;
  }
  bool subset_of(const Bits& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if ((words_[i] & ~o.words_[i]) != 0) return false;
    return true;
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }

 private:
  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
};

struct DDRay {
  IntVec v;
  Bits tight;
};

bool is_zero(const IntVec& v) {
  return std::all_of(v.begin(), v.end(), [](const Integer& x) { return x == 0; });
}

IntVec combine(const Integer& s, const IntVec& a, const Integer& t, const IntVec& b) {
  IntVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i] - t * b[i];
  make_primitive(out);
  return out;
}

bool lex_less(const RatVec& a, const RatVec& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

ConeGenerators cone_from_inequalities(const std::vector<IntVec>& rows, std::size_t dim) {
  std::vector<IntVec> lin;
  for (std::size_t i = 0; i < dim; ++i) {
    IntVec e(dim, 0);
    e[i] = 1;
    lin.push_back(std::move(e));
  }
  std::vector<DDRay> rays;
  std::size_t processed = 0;

  for (const IntVec& a : rows) {
    if (a.size() != dim) throw Error("constraint dimension mismatch");
    if (is_zero(a)) {
      for (auto& r : rays) r.tight.push(true);
      ++processed;
      continue;
    }
    auto hit = std::find_if(lin.begin(), lin.end(), [&](const IntVec& l) { return dot(a, l) != 0; });
    if (hit != lin.end()) {
      // The row cuts the lineality space: one lineality direction becomes a
      // ray and everything else is moved into the hyperplane <a, x> = 0.
      IntVec l = *hit;
      lin.erase(hit);
      Integer al = dot(a, l);
      if (al < 0) {
        for (auto& x : l) x = -x;
        al = -al;
      }
      for (auto& q : lin) {
        Integer aq = dot(a, q);
        if (aq != 0) q = combine(al, q, aq, l);
      }
      for (auto& r : rays) {
        Integer ar = dot(a, r.v);
        if (ar != 0) r.v = combine(al, r.v, ar, l);
        r.tight.push(true);
      }
      DDRay nr{std::move(l), {}};
      for (std::size_t i = 0; i < processed; ++i) nr.tight.push(true);
      nr.tight.push(false);
      rays.push_back(std::move(nr));
      ++processed;
      continue;
    }
    std::vector<Integer> s(rays.size());
    for (std::size_t i = 0; i < rays.size(); ++i) s[i] = dot(a, rays[i].v);
    std::vector<DDRay> next;
    next.reserve(rays.size());
    for (std::size_t i = 0; i < rays.size(); ++i) {
      if (s[i] < 0) continue;
      DDRay r = rays[i];
      r.tight.push(s[i] == 0);
      next.push_back(std::move(r));
    }
    const std::size_t pointed_dim = dim - lin.size();
    for (std::size_t p = 0; p < rays.size(); ++p) {
      if (s[p] <= 0) continue;
      for (std::size_t n = 0; n < rays.size(); ++n) {
        if (s[n] >= 0) continue;
        Bits common = rays[p].tight & rays[n].tight;
        if (pointed_dim >= 2 && common.count() + 2 < pointed_dim) continue;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
          if (r == p || r == n) continue;
          if (common.subset_of(rays[r].tight)) adjacent = false;
        }
        if (!adjacent) continue;
        DDRay nr{combine(s[p], rays[n].v, s[n], rays[p].v), common};
        nr.tight.push(true);
        next.push_back(std::move(nr));
      }
    }
    rays = std::move(next);
    ++processed;
  }

  ConeGenerators out;
  out.lineality = std::move(lin);
  for (auto& r : rays) out.rays.push_back(std::move(r.v));
  return out;
}

namespace {

IntVec homogenized_row(const Constraint& c) {
  // <v, u> - bound * t >= 0, scaled by the bound's denominator.
  const Integer den = mp::denominator(c.bound);
  IntVec row;
  row.reserve(c.normal.size() + 1);
  for (const auto& x : c.normal) row.push_back(x * den);
  row.push_back(-mp::numerator(c.bound));
  make_primitive(row);
  return row;
}

}  // namespace

Polytope Polytope::from_constraints(std::size_t ambient_dim, std::vector<Constraint> constraints) {
  Polytope p;
  p.ambient_dim_ = ambient_dim;
  for (const auto& c : constraints)
    if (c.normal.size() != ambient_dim) throw InputError("constraint normal has wrong dimension");
  p.constraints_ = std::move(constraints);

  std::vector<IntVec> rows;
  rows.reserve(p.constraints_.size() + 1);
  IntVec t_row(ambient_dim + 1, 0);
  t_row[ambient_dim] = 1;
  rows.push_back(t_row);
  for (const auto& c : p.constraints_) rows.push_back(homogenized_row(c));

  ConeGenerators gens = cone_from_inequalities(rows, ambient_dim + 1);
  for (const auto& r : gens.rays) {
    const Integer& t = r[ambient_dim];
    if (t > 0) {
      RatVec v(ambient_dim);
      for (std::size_t i = 0; i < ambient_dim; ++i) v[i] = Rational(r[i], t);
      p.vertices_.push_back(std::move(v));
    } else {
      p.rays_.emplace_back(r.begin(), r.end() - 1);
    }
  }
  if (p.vertices_.empty()) {
    p.rays_.clear();
    p.dim_ = ExtInt::neg_inf();
    return p;
  }
  for (const auto& l : gens.lineality) p.lineality_.emplace_back(l.begin(), l.end() - 1);
  std::sort(p.vertices_.begin(), p.vertices_.end(), lex_less);
  p.vertices_.erase(std::unique(p.vertices_.begin(), p.vertices_.end()), p.vertices_.end());
  std::sort(p.rays_.begin(), p.rays_.end());

  SpanTracker span(ambient_dim);
  for (std::size_t i = 1; i < p.vertices_.size(); ++i) {
    RatVec d(ambient_dim);
    for (std::size_t j = 0; j < ambient_dim; ++j) d[j] = p.vertices_[i][j] - p.vertices_[0][j];
    span.add(d);
  }
  for (const auto& r : p.rays_) span.add(to_rat_vec(r));
  for (const auto& l : p.lineality_) span.add(to_rat_vec(l));
  p.dim_ = ExtInt(static_cast<int>(span.rank()));
  return p;
}

Polytope Polytope::empty(std::size_t ambient_dim) {
  Constraint infeasible{IntVec(ambient_dim, 0), Rational(1)};
  return from_constraints(ambient_dim, {infeasible});
}

namespace {

std::vector<Constraint> facets_from_generators(std::size_t n, const std::vector<RatVec>& points,
                                               const std::vector<IntVec>& directions) {
  // Dual cone {(a, b) : <a, p> + b >= 0, <a, r> >= 0}; its generators are the
  // facet inequalities <a, u> >= -b (rays) and equations (lineality).
  std::vector<IntVec> rows;
  rows.reserve(points.size() + directions.size());
  for (const auto& p : points) {
    if (p.size() != n) throw InputError("point has wrong dimension");
    RatVec h(p);
    h.push_back(Rational(1));
    rows.push_back(clear_denominators(h));
  }
  for (const auto& d : directions) {
    if (d.size() != n) throw InputError("generator has wrong dimension");
    IntVec h(d);
    h.push_back(0);
    rows.push_back(std::move(h));
  }
  // Rows far from the centroid first: later interior rows then cut nothing.
  std::vector<double> spread(rows.size(), 0.0);
  {
    std::vector<std::vector<double>> pts;
    for (const auto& p : points) {
      std::vector<double> x;
      for (const auto& c : p) x.push_back(c.convert_to<double>());
      pts.push_back(std::move(x));
    }
    for (const auto& d : directions) {
      std::vector<double> x;
      double len = 0;
      for (const auto& c : d) {
        x.push_back(c.convert_to<double>());
        len += x.back() * x.back();
      }
      if (len > 0)
        for (auto& c : x) c /= std::sqrt(len);
      pts.push_back(std::move(x));
    }
    std::vector<double> mid(n, 0.0);
    for (const auto& x : pts)
      for (std::size_t i = 0; i < n; ++i) mid[i] += x[i] / static_cast<double>(pts.size());
    for (std::size_t r = 0; r < pts.size(); ++r)
      for (std::size_t i = 0; i < n; ++i) spread[r] += (pts[r][i] - mid[i]) * (pts[r][i] - mid[i]);
  }
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return spread[a] > spread[b]; });
  std::vector<IntVec> sorted;
  sorted.reserve(rows.size());
  for (auto i : order) sorted.push_back(std::move(rows[i]));
  ConeGenerators dual = cone_from_inequalities(sorted, n + 1);
  std::vector<Constraint> out;
  auto emit = [&](const IntVec& g, bool negate) {
    IntVec a(g.begin(), g.end() - 1);
    Integer b = g[n];
    if (negate) {
      for (auto& x : a) x = -x;
      b = -b;
    }
    if (is_zero(a)) return;
    out.push_back({std::move(a), Rational(-b)});
  };
  for (const auto& r : dual.rays) emit(r, false);
  for (const auto& l : dual.lineality) {
    emit(l, false);
    emit(l, true);
  }
  std::sort(out.begin(), out.end(), [](const Constraint& x, const Constraint& y) {
    if (x.normal != y.normal) return x.normal < y.normal;
    return x.bound < y.bound;
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

Polytope Polytope::convex_hull(std::size_t ambient_dim, const std::vector<RatVec>& points) {
  if (points.empty()) return empty(ambient_dim);
  return from_constraints(ambient_dim, facets_from_generators(ambient_dim, points, {}));
}

Polytope Polytope::cone(std::size_t ambient_dim, const std::vector<IntVec>& generators) {
  std::vector<RatVec> apex{RatVec(ambient_dim, Rational(0))};
  return from_constraints(ambient_dim, facets_from_generators(ambient_dim, apex, generators));
}

bool Polytope::contains(const RatVec& point) const {
  for (const auto& c : constraints_)
    if (dot(c.normal, point) < c.bound) return false;
  return true;
}

Polytope Polytope::intersected_with(const std::vector<Constraint>& extra) const {
  std::vector<Constraint> all = constraints_;
  all.insert(all.end(), extra.begin(), extra.end());
  return from_constraints(ambient_dim_, std::move(all));
}

namespace {

struct IntConstraint {
  std::vector<std::int64_t> coef;
  __int128 bound = 0;
  std::size_t last = 0;  // last coordinate with a nonzero coefficient
  bool constant = false;
};

__int128 floor_div(__int128 a, __int128 b) {
  __int128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

__int128 ceil_div(__int128 a, __int128 b) {
  return -floor_div(-a, b);
}

// Calls visit(prefix, lo, hi) for every maximal run of lattice points that
// share the first n-1 coordinates; runs are produced in lexicographic order.
// Enumeration stops once visit returns false.
template <typename Visit>
void enumerate_runs(const Polytope& poly, Visit&& visit) {
  if (poly.is_empty()) return;
  if (!poly.is_bounded()) throw InputError("unbounded");
  const std::size_t n = poly.ambient_dim();

  std::vector<IntConstraint> cons;
  for (const auto& c : poly.constraints()) {
    IntConstraint ic;
    const Integer den = mp::denominator(c.bound);
    ic.coef.resize(n);
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) {
      ic.coef[i] = to_int64(c.normal[i] * den);
      if (ic.coef[i] != 0) {
        ic.last = i;
        any = true;
      }
    }
    ic.bound = to_int64(mp::numerator(c.bound));
    ic.constant = !any;
    if (ic.constant) {
      if (ic.bound > 0) return;
      continue;
    }
    cons.push_back(std::move(ic));
  }
  if (n == 0) {
    visit(LatticePoint{}, 0, -1);
    return;
  }
  bool stopped = false;

  std::vector<std::int64_t> lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    Rational mn = poly.vertices().front()[i], mx = mn;
    for (const auto& v : poly.vertices()) {
      mn = std::min(mn, v[i]);
      mx = std::max(mx, v[i]);
    }
    lo[i] = to_int64(ceil_of(mn));
    hi[i] = to_int64(floor_of(mx));
    if (lo[i] > hi[i]) return;
  }

  LatticePoint prefix(n, 0);
  std::vector<__int128> partial(cons.size(), 0);

  auto recurse = [&](auto&& self, std::size_t depth) -> void {
    if (depth + 1 == n) {
      __int128 a = lo[depth], b = hi[depth];
      for (std::size_t c = 0; c < cons.size(); ++c) {
        const auto& ic = cons[c];
        if (ic.last != depth) continue;
        const __int128 w = ic.coef[depth];
        const __int128 rest = ic.bound - partial[c];
        if (w > 0) {
          a = std::max(a, ceil_div(rest, w));
        } else {
          b = std::min(b, floor_div(rest, w));
        }
        if (a > b) return;
      }
      prefix[depth] = 0;
      stopped = !visit(prefix, static_cast<std::int64_t>(a), static_cast<std::int64_t>(b));
      return;
    }
    for (std::int64_t x = lo[depth]; x <= hi[depth] && !stopped; ++x) {
      prefix[depth] = x;
      bool ok = true;
      for (std::size_t c = 0; c < cons.size(); ++c) {
        partial[c] += static_cast<__int128>(cons[c].coef[depth]) * x;
        if (cons[c].last == depth && partial[c] < cons[c].bound) ok = false;
      }
      if (ok) self(self, depth + 1);
      for (std::size_t c = 0; c < cons.size(); ++c)
        partial[c] -= static_cast<__int128>(cons[c].coef[depth]) * x;
    }
  };
  recurse(recurse, 0);
}

}  // namespace

std::vector<LatticePoint> lattice_points(const Polytope& poly) {
  std::vector<LatticePoint> out;
  const std::size_t n = poly.ambient_dim();
  enumerate_runs(poly, [&](const LatticePoint& prefix, std::int64_t lo, std::int64_t hi) {
    if (n == 0) {
      out.push_back(prefix);
      return true;
    }
    LatticePoint p = prefix;
    for (std::int64_t x = lo; x <= hi; ++x) {
      p[n - 1] = x;
      out.push_back(p);
    }
    return true;
  });
  return out;
}

void for_each_lattice_point(const Polytope& poly, const std::function<bool(const LatticePoint&)>& visit) {
  const std::size_t n = poly.ambient_dim();
  enumerate_runs(poly, [&](const LatticePoint& prefix, std::int64_t lo, std::int64_t hi) {
    if (n == 0) return visit(prefix);
    LatticePoint p = prefix;
    for (std::int64_t x = lo; x <= hi; ++x) {
      p[n - 1] = x;
      if (!visit(p)) return false;
    }
    return true;
  });
}

std::uint64_t count_lattice_points(const Polytope& poly) {
  std::uint64_t total = 0;
  const std::size_t n = poly.ambient_dim();
  enumerate_runs(poly, [&](const LatticePoint&, std::int64_t lo, std::int64_t hi) {
    total += n == 0 ? 1 : static_cast<std::uint64_t>(hi - lo + 1);
    return true;
  });
  return total;
}

namespace {

using Simplex = std::vector<std::size_t>;

void triangulate(const std::vector<std::size_t>& face, int d,
                 const std::vector<std::vector<std::size_t>>& tight_sets,
                 const std::vector<RatVec>& verts, std::vector<Simplex>& out) {
  if (d == 0) {
    out.push_back({face.front()});
    return;
  }
  const std::size_t apex = face.front();
  std::set<std::vector<std::size_t>> facets;
  for (const auto& tight : tight_sets) {
    std::vector<std::size_t> sub;
    std::set_intersection(face.begin(), face.end(), tight.begin(), tight.end(), std::back_inserter(sub));
    if (sub.size() == face.size() || sub.empty()) continue;
    if (std::binary_search(sub.begin(), sub.end(), apex)) continue;
    std::vector<RatVec> pts;
    for (auto i : sub) pts.push_back(verts[i]);
    if (affine_rank(pts) != d - 1) continue;
    facets.insert(std::move(sub));
  }
  for (const auto& f : facets) {
    std::vector<Simplex> sub;
    triangulate(f, d - 1, tight_sets, verts, sub);
    for (auto& s : sub) {
      s.push_back(apex);
      out.push_back(std::move(s));
    }
  }
}

}  // namespace

Rational lattice_volume(const Polytope& poly, const std::vector<IntVec>& direction_basis) {
  if (poly.is_empty()) throw InputError("lattice_volume of an empty polytope");
  if (!poly.is_bounded()) throw InputError("unbounded");
  const std::size_t n = poly.ambient_dim();
  const std::size_t q = direction_basis.size();
  for (const auto& b : direction_basis)
    if (b.size() != n) throw InputError("basis vector has wrong dimension");
  if (static_cast<int>(q) != poly.dim().value() || rank_of(direction_basis) != q) {
    throw InputError("basis does not span direction space");
  }
  if (q == 0) return Rational(1);

  const RatVec& v0 = poly.vertices().front();
  std::vector<RatVec> coords;
  for (const auto& v : poly.vertices()) {
    RatVec d(n);
    for (std::size_t j = 0; j < n; ++j) d[j] = v[j] - v0[j];
    auto c = coordinates_in(direction_basis, d);
    if (!c) throw InputError("basis does not span direction space");
    coords.push_back(std::move(*c));
  }

  Polytope local = Polytope::convex_hull(q, coords);
  const auto& verts = local.vertices();
  std::vector<std::vector<std::size_t>> tight_sets;
  for (const auto& c : local.constraints()) {
    std::vector<std::size_t> t;
    for (std::size_t i = 0; i < verts.size(); ++i)
      if (dot(c.normal, verts[i]) == c.bound) t.push_back(i);
    tight_sets.push_back(std::move(t));
  }
  std::vector<std::size_t> all(verts.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  std::vector<Simplex> simplices;
  triangulate(all, static_cast<int>(q), tight_sets, verts, simplices);

  Rational total = 0;
  Integer factorial = 1;
  for (std::size_t i = 2; i <= q; ++i) factorial *= static_cast<unsigned>(i);
  for (const auto& s : simplices) {
    std::vector<RatVec> rows;
    for (std::size_t i = 1; i < s.size(); ++i) {
      RatVec r(q);
      for (std::size_t j = 0; j < q; ++j) r[j] = verts[s[i]][j] - verts[s[0]][j];
      rows.push_back(std::move(r));
    }
    // Rational determinant by elimination.
    Rational det = 1;
    for (std::size_t col = 0; col < q; ++col) {
      std::size_t p = col;
      while (p < q && rows[p][col] == 0) ++p;
      if (p == q) {
        det = 0;
        break;
      }
      if (p != col) {
        std::swap(rows[p], rows[col]);
        det = -det;
      }
      det *= rows[col][col];
      for (std::size_t i = col + 1; i < q; ++i) {
        const Rational f = rows[i][col] / rows[col][col];
        if (f == 0) continue;
        for (std::size_t j = col; j < q; ++j) rows[i][j] -= f * rows[col][j];
      }
    }
    total += mp::abs(det);
  }
  return total / Rational(factorial);
}

}  // namespace kodaira
