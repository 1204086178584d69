#include "kodaira/curve.hpp"

#include <numeric>

namespace kodaira {

CurveDivisorClass CurveDivisorClass::general(std::int64_t degree) {
  CurveDivisorClass c;
  c.degree = degree;
  return c;
}

CurveDivisorClass CurveDivisorClass::trivial() {
  CurveDivisorClass c;
  c.kind = Kind::trivial;
  return c;
}

CurveDivisorClass CurveDivisorClass::canonical(const CurveModel& curve, std::int64_t k) {
  CurveDivisorClass c;
  c.kind = Kind::canonical_multiple;
  c.canonical_k = k;
  c.degree = k * (2 * curve.genus - 2);
  return c;
}

CurveDivisorClass CurveDivisorClass::marked(std::vector<MarkedPoint> points) {
  CurveDivisorClass c;
  c.kind = Kind::marked_points;
  for (const auto& p : points) c.degree += p.multiplicity;
  c.points = std::move(points);
  return c;
}

CurveDivisorClass CurveDivisorClass::multiple(std::int64_t k) const {
  CurveDivisorClass c = *this;
  c.degree = degree * k;
  c.canonical_k = canonical_k * k;
  for (auto& p : c.points) p.multiplicity *= k;
  if (kind == Kind::trivial) c.degree = 0;
  return c;
}

std::uint64_t h0(const CurveModel& c, const CurveDivisorClass& cls) {
  const std::int64_t g = c.genus;
  if (g < 0) throw InputError("genus must be nonnegative");
  using Kind = CurveDivisorClass::Kind;
  if (cls.kind == Kind::canonical_multiple && g >= 2) {
    const std::int64_t k = cls.canonical_k;
    if (k < 0) return 0;
    if (k == 0) return 1;
    if (k == 1) return static_cast<std::uint64_t>(g);
    return static_cast<std::uint64_t>((2 * k - 1) * (g - 1));
  }
  const std::int64_t d = cls.degree;
  if (d < 0) return 0;
  if (d > 2 * g - 2) return static_cast<std::uint64_t>(d - g + 1);
  if (d == 0) {
    bool trivial = cls.kind == Kind::trivial || cls.kind == Kind::canonical_multiple;
    if (cls.kind == Kind::marked_points) {
      trivial = true;
      for (const auto& p : cls.points) trivial = trivial && p.multiplicity == 0;
    }
    return trivial ? 1 : 0;
  }
  throw InputError("h⁰ not determined by degree");
}

namespace {

SectionSystem orders_system(const std::vector<std::uint64_t>& counts) {
  std::vector<std::vector<LatticePoint>> sets(counts.size());
  for (std::size_t k = 1; k < counts.size(); ++k)
    for (std::uint64_t i = 0; i < counts[k]; ++i) sets[k].push_back({static_cast<std::int64_t>(i)});
  return SectionSystem::from_sets(1, std::move(sets));
}

}  // namespace

ExtInt kappa_curve(const CurveModel& c, const CurveDivisorClass& cls, std::int64_t max_degree) {
  if (max_degree < 1) throw InputError("degree bound must be positive");
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(max_degree) + 1);
  for (std::int64_t k = 1; k <= max_degree; ++k) counts[static_cast<std::size_t>(k)] = h0(c, cls.multiple(k));
  return kappa2(orders_system(counts)).value;
}

void CurveSystem::validate() const {
  if (curve.genus < 0) throw InputError("genus must be nonnegative");
  metric.validate(points);
}

Integer CurveSystem::degree(const Integer& k0, std::int64_t k, std::int64_t extra) const {
  const Integer level = k0 * k;
  Integer d = level * (2 * curve.genus - 2 + line_degree) + extra;
  for (const auto& e : metric.entries) d -= metric.coeff(e.divisor, level);
  return d;
}

std::uint64_t CurveSystem::count(const Integer& k0, std::int64_t k, std::int64_t extra) const {
  const Integer level = k0 * k;
  bool twisted = extra != 0 || line_degree != 0;
  for (const auto& e : metric.entries) twisted = twisted || metric.coeff(e.divisor, level) != 0;
  if (!twisted) return h0(curve, CurveDivisorClass::canonical(curve, to_int64(level)));
  return h0(curve, CurveDivisorClass::general(to_int64(degree(k0, k, extra))));
}

SectionSystem CurveSystem::sections(const Integer& k0, std::int64_t max_degree, std::int64_t extra) const {
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(max_degree) + 1);
  for (std::int64_t k = 1; k <= max_degree; ++k) counts[static_cast<std::size_t>(k)] = count(k0, k, extra);
  return orders_system(counts);
}

std::int64_t CurveSystem::ample_degree() const {
  std::int64_t weighted = 0;
  for (const auto& e : metric.entries) weighted += e.mu > 0;
  return 2 * curve.genus + 1 + weighted;
}

Rational CurveSystem::limit_slope(const Integer& k0) const {
  Rational s = 2 * curve.genus - 2 + line_degree;
  for (const auto& e : metric.entries) s -= coeff_limit(e.mu);
  return s * k0;
}

std::int64_t CurveSystem::count_period(const Integer& k0) const {
  Integer period = 1;
  for (const auto& e : metric.entries)
    if (e.mu >= 1 || (!metric.clamp && e.mu > 0)) period = lcm_of(period, denominator(Rational(e.mu * k0)));
  return to_int64(period);
}

SigmaResult kappa_sigma(const CurveSystem& y, const Integer& k0, const GrowthOptions& opts) {
  y.validate();
  SigmaResult out;
  const Rational slope = y.limit_slope(k0);
  out.exact = slope > 0 ? ExtInt(1) : slope == 0 ? ExtInt(0) : ExtInt::neg_inf();
  const std::int64_t period = y.count_period(k0);
  const std::int64_t needed = 2 * (period / std::gcd(period, opts.stride)) * 3;
  for (std::int64_t mult = 1; mult <= 3; ++mult) {
    const std::int64_t extra = mult * y.ample_degree();
    out.per_multiple.push_back(
        periodic_growth([&](std::int64_t k) { return y.count(k0, k, extra); }, period, opts, needed, 3));
    out.empirical = max(out.empirical, out.per_multiple.back().order);
  }
  if (out.exact != out.empirical)
    throw CrossCheckError("curve kappa_sigma exact " + out.exact.str() + " but empirical " + out.empirical.str());
  return out;
}

ExtInt kappa_canonical(const CurveModel& c) {
  if (c.genus >= 2) return 1;
  if (c.genus == 1) return 0;
  return ExtInt::neg_inf();
}

}  // namespace kodaira
