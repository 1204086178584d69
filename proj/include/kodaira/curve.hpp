#pragma once

#include "kodaira/ext_int.hpp"
#include "kodaira/metric.hpp"
#include "kodaira/toric.hpp"

#include <cstdint>
#include <vector>

namespace kodaira {

// Abstract smooth projective curve; only the genus is known.
struct CurveModel {
  std::int64_t genus = 0;
};

struct MarkedPoint {
  std::size_t point = 0;
  std::int64_t multiplicity = 0;
};

// Divisor class known by degree and kind.
struct CurveDivisorClass {
  enum class Kind { general, trivial, canonical_multiple, marked_points };

  Kind kind = Kind::general;
  std::int64_t degree = 0;
  std::int64_t canonical_k = 0;     // canonical_multiple only
  std::vector<MarkedPoint> points;  // marked_points only

  static CurveDivisorClass general(std::int64_t degree);
  static CurveDivisorClass trivial();
  static CurveDivisorClass canonical(const CurveModel& c, std::int64_t k);
  static CurveDivisorClass marked(std::vector<MarkedPoint> points);

  // k times the class; trivial and canonical classes keep their kind.
  CurveDivisorClass multiple(std::int64_t k) const;
};

// Riemann–Roch where the degree decides h⁰. Throws InputError("h⁰ not
// determined by degree") for 0 < d <= 2g-2 outside canonical multiples.
std::uint64_t h0(const CurveModel& c, const CurveDivisorClass& cls);

// Growth of h⁰(k·cls) for k = 1..K: -inf, 0 or 1.
ExtInt kappa_curve(const CurveModel& c, const CurveDivisorClass& cls, std::int64_t max_degree = 24);

// A class on a curve with marked points 0..points-1 of the form
// b·(K_Y + L_Y), deg L_Y = line_degree, twisted at level k·b by the
// multiplier coefficients of a metric with weights at marked points.
struct CurveSystem {
  CurveModel curve;
  std::size_t points = 0;
  std::int64_t line_degree = 0;
  SingularMetricData metric;

  void validate() const;
  // Degree of k0·k·(K_Y + L_Y) - sum c_{k0·k}(mu_p)·p + extra.
  Integer degree(const Integer& k0, std::int64_t k, std::int64_t extra = 0) const;
  // h⁰ of that class; an untwisted multiple of K_Y keeps its kind.
  std::uint64_t count(const Integer& k0, std::int64_t k, std::int64_t extra = 0) const;
  // Vanishing orders at a general point: {0, ..., h⁰-1}.
  SectionSystem sections(const Integer& k0, std::int64_t max_degree, std::int64_t extra = 0) const;
  // Degree of an ample class large enough that every perturbed degree is
  // past 2g-2: 2g + 1 + number of weighted points.
  std::int64_t ample_degree() const;
  // Slope of the degree in k, k0·(2g - 2 + line_degree - sum max(mu - 1, 0)).
  Rational limit_slope(const Integer& k0) const;
  // Quasi-period of the counts in k.
  std::int64_t count_period(const Integer& k0) const;
};

// Growth order after adding multiples of ample_degree(); exact from the
// limit slope, cross-checked against counts as for toric varieties.
SigmaResult kappa_sigma(const CurveSystem& y, const Integer& k0, const GrowthOptions& opts = {});

// κ(Y, K_Y): 1 for g >= 2, 0 for g = 1, -inf for g = 0.
ExtInt kappa_canonical(const CurveModel& c);

}  // namespace kodaira
