#include "crntime/stats.hpp"

#include <boost/math/distributions/beta.hpp>
#include <cmath>
#include <limits>

#include "crntime/error.hpp"

namespace crntime {

Moments moments(std::span<const double> values) {
  Moments m;
  m.count = values.size();
  if (values.empty()) return m;
  double sum = 0.0;
  for (double v : values) sum += v;
  m.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - m.mean) * (v - m.mean);
    m.variance = ss / static_cast<double>(values.size() - 1);
  }
  return m;
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  if (frac == 0.0 || lo == hi) return sorted[lo];
  if (std::isinf(sorted[hi])) return std::numeric_limits<double>::infinity();
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double clopper_pearson_upper(std::size_t hits, std::size_t trials, double confidence) {
  if (trials == 0) throw DomainError("clopper_pearson_upper: trials must be positive");
  if (hits > trials) throw DomainError("clopper_pearson_upper: hits exceed trials");
  if (hits == trials) return 1.0;
  const double alpha = 1.0 - confidence;
  if (hits == 0) return 1.0 - std::pow(alpha, 1.0 / static_cast<double>(trials));
  const boost::math::beta_distribution<double> dist(static_cast<double>(hits) + 1.0,
                                                    static_cast<double>(trials - hits));
  return boost::math::quantile(dist, confidence);
}

}  // namespace crntime
