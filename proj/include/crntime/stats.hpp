#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace crntime {

struct Moments {
  std::size_t count = 0;
  double mean = 0.0;
  /// Unbiased sample variance; 0 when count < 2.
  double variance = 0.0;
};

/// Two-pass mean and variance in index order (deterministic).
Moments moments(std::span<const double> values);

/// Linear-interpolation quantile (Hyndman-Fan type 7) of an ascending,
/// possibly +inf-terminated sample. Returns +inf when the quantile falls on
/// or next to an infinite entry.
double quantile_sorted(std::span<const double> sorted, double q);

/// One-sided upper confidence bound on a binomial proportion
/// (Clopper-Pearson) at the given confidence level.
double clopper_pearson_upper(std::size_t hits, std::size_t trials, double confidence);

}  // namespace crntime
