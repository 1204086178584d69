#include "kodaira/metric.hpp"

#include <set>

namespace kodaira {

Integer multiplier_coeff(const Rational& mu, const Integer& k, bool clamp) {
  Integer c = floor_of(mu * k) - k + 1;
  if (clamp && c < 0) return 0;
  return c;
}

Rational coeff_limit(const Rational& mu) {
  return mu > 1 ? Rational(mu - 1) : Rational(0);
}

void SingularMetricData::validate(std::size_t divisor_count) const {
  std::set<std::size_t> seen;
  for (const auto& e : entries) {
    if (e.mu < 0) throw InputError("metric weight must be nonnegative");
    if (e.divisor >= divisor_count) throw InputError("metric divisor index out of range");
    if (!seen.insert(e.divisor).second) throw InputError("metric divisor listed twice");
  }
}

Rational SingularMetricData::weight(std::size_t divisor) const {
  for (const auto& e : entries)
    if (e.divisor == divisor) return e.mu;
  return 0;
}

Integer SingularMetricData::coeff(std::size_t divisor, const Integer& k) const {
  for (const auto& e : entries)
    if (e.divisor == divisor) return multiplier_coeff(e.mu, k, clamp);
  return 0;
}

Rational SingularMetricData::limit(std::size_t divisor) const {
  return coeff_limit(weight(divisor));
}

SingularMetricData SingularMetricData::restricted(const std::vector<std::optional<std::size_t>>& remap) const {
  SingularMetricData out;
  out.clamp = clamp;
  for (const auto& e : entries)
    if (e.divisor < remap.size() && remap[e.divisor]) out.entries.push_back({*remap[e.divisor], e.mu});
  return out;
}

SubadditivityReport subadditivity_scan(const std::vector<Rational>& mu_grid, std::int64_t k_max, bool clamp) {
  SubadditivityReport report;
  for (const auto& mu : mu_grid) {
    std::vector<Integer> c(static_cast<std::size_t>(2 * k_max + 1));
    for (std::int64_t k = 1; k <= 2 * k_max; ++k) c[k] = multiplier_coeff(mu, k, clamp);
    for (std::int64_t k = 1; k <= k_max; ++k)
      for (std::int64_t l = k; l <= k_max; ++l) {
        ++report.checked;
        if (c[k + l] > c[k] + c[l]) report.violations.push_back({mu, k, l, c[k], c[l], c[k + l]});
      }
  }
  return report;
}

}  // namespace kodaira
