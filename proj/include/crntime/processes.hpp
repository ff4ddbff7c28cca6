#pragma once

#include <cstdint>

#include "crntime/rng.hpp"

namespace crntime {

/// Pure-death chain started at N with per-unit decay rate lambda, observed
/// at time t.
struct DecayParams {
  std::uint64_t N = 1;
  double lambda = 1.0;
  double t = 1.0;
};

/// Biased walk on the integers with constant forward and reverse rates.
struct WalkParams {
  double f_hat = 1.0;
  double r_hat = 1.0;
  double t = 1.0;
};

/// Walk on the naturals from 0: forward rate delta_f·N everywhere, reverse
/// rate lambda_r·j from state j >= 1.
struct ReflectingParams {
  std::uint64_t N = 1;
  double delta_f = 1.0;
  double lambda_r = 1.0;
  double t = 1.0;
};

struct ReflectingSample {
  std::int64_t value_at_t = 0;
  std::int64_t running_max = 0;
};

/// Validates parameters; throws DomainError.
void validate(const DecayParams& p);
void validate(const WalkParams& p);
void validate(const ReflectingParams& p);

/// D(t) by sequential exponential holding times of rate lambda·j.
std::int64_t sample_decay(const DecayParams& p, Rng& rng);

/// U(t) = F - R, simulated event by event.
std::int64_t sample_walk_z(const WalkParams& p, Rng& rng);

/// Terminal state and running maximum over [0, t].
ReflectingSample sample_walk_reflecting(const ReflectingParams& p, Rng& rng);

/// Number of arrivals of a rate-`rate` Poisson process in [0, 1], by
/// summing exponential gaps; distributed Poisson(rate).
std::int64_t sample_poisson(double rate, Rng& rng);

}  // namespace crntime
