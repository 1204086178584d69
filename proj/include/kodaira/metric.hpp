#pragma once

#include "kodaira/numeric.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace kodaira {

// c_k = max(floor(k·mu) - k + 1, 0). With clamp off the max is dropped; that
// variant exists only to exercise the cross-checks.
Integer multiplier_coeff(const Rational& mu, const Integer& k, bool clamp = true);

// lim c_k / k = max(mu - 1, 0).
Rational coeff_limit(const Rational& mu);

// Weight mu >= 0 along one prime divisor, identified by index (a ray of a
// toric variety or a marked point of a curve).
struct MetricEntry {
  std::size_t divisor = 0;
  Rational mu;
};

struct SingularMetricData {
  std::vector<MetricEntry> entries;
  bool clamp = true;

  // Throws InputError on negative weights or repeated divisors.
  void validate(std::size_t divisor_count) const;
  bool empty() const { return entries.empty(); }
  Rational weight(std::size_t divisor) const;
  Integer coeff(std::size_t divisor, const Integer& k) const;
  Rational limit(std::size_t divisor) const;
  // Entries whose divisor has a target in remap, reindexed.
  SingularMetricData restricted(const std::vector<std::optional<std::size_t>>& remap) const;
};

struct SubadditivityViolation {
  Rational mu;
  std::int64_t k = 0;
  std::int64_t l = 0;
  Integer c_k, c_l, c_kl;
};

struct SubadditivityReport {
  std::size_t checked = 0;
  std::vector<SubadditivityViolation> violations;
};

SubadditivityReport subadditivity_scan(const std::vector<Rational>& mu_grid, std::int64_t k_max,
                                       bool clamp = true);

}  // namespace kodaira
