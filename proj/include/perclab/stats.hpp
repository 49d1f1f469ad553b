#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace perclab {

struct EstimateResult {
  double point = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::int64_t successes = 0;
  std::int64_t replicates = 0;
  std::uint64_t seed = 0;
};

// Wilson score interval for a binomial proportion; z defaults to the
// two-sided 95% quantile.
inline EstimateResult wilson_interval(std::int64_t successes, std::int64_t n,
                                      std::uint64_t seed = 0,
                                      double z = 1.959963984540054) {
  if (n <= 0) throw std::invalid_argument("wilson_interval: n must be positive");
  if (successes < 0 || successes > n)
    throw std::invalid_argument("wilson_interval: successes out of range");
  double phat = static_cast<double>(successes) / static_cast<double>(n);
  double z2 = z * z;
  double denom = 1.0 + z2 / static_cast<double>(n);
  double center = phat + z2 / (2.0 * static_cast<double>(n));
  double half = z * std::sqrt(phat * (1.0 - phat) / static_cast<double>(n) +
                              z2 / (4.0 * static_cast<double>(n) * static_cast<double>(n)));
  EstimateResult r;
  r.point = phat;
  r.ci_low = (center - half) / denom;
  r.ci_high = (center + half) / denom;
  r.successes = successes;
  r.replicates = n;
  r.seed = seed;
  return r;
}

inline double binomial_std_error(double phat, std::int64_t n) {
  return std::sqrt(phat * (1.0 - phat) / static_cast<double>(n));
}

}  // namespace perclab
