#include "crntime/processes.hpp"

#include <algorithm>
#include <cmath>

#include "crntime/error.hpp"

namespace crntime {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(name) + " must be positive and finite");
  }
}

}  // namespace

void validate(const DecayParams& p) {
  if (p.N == 0) throw DomainError("N must be positive");
  require_positive(p.lambda, "lambda");
  require_positive(p.t, "t");
}

void validate(const WalkParams& p) {
  require_positive(p.f_hat, "f_hat");
  require_positive(p.r_hat, "r_hat");
  require_positive(p.t, "t");
}

void validate(const ReflectingParams& p) {
  if (p.N == 0) throw DomainError("N must be positive");
  require_positive(p.delta_f, "delta_f");
  require_positive(p.lambda_r, "lambda_r");
  require_positive(p.t, "t");
}

std::int64_t sample_decay(const DecayParams& p, Rng& rng) {
  validate(p);
  auto state = static_cast<std::int64_t>(p.N);
  double clock = 0.0;
  while (state > 0) {
    clock += rng.exponential(p.lambda * static_cast<double>(state));
    if (clock > p.t) break;
    --state;
  }
  return state;
}

std::int64_t sample_walk_z(const WalkParams& p, Rng& rng) {
  validate(p);
  const double total = p.f_hat + p.r_hat;
  const double forward = p.f_hat / total;
  std::int64_t state = 0;
  double clock = 0.0;
  while (true) {
    clock += rng.exponential(total);
    if (clock > p.t) break;
    state += rng.uniform_open() < forward ? 1 : -1;
  }
  return state;
}

ReflectingSample sample_walk_reflecting(const ReflectingParams& p, Rng& rng) {
  validate(p);
  const double birth = p.delta_f * static_cast<double>(p.N);
  ReflectingSample out;
  std::int64_t state = 0;
  double clock = 0.0;
  while (true) {
    const double death = p.lambda_r * static_cast<double>(state);
    const double total = birth + death;
    clock += rng.exponential(total);
    if (clock > p.t) break;
    if (rng.uniform_open() * total < birth) {
      ++state;
      out.running_max = std::max(out.running_max, state);
    } else {
      --state;
    }
  }
  out.value_at_t = state;
  return out;
}

std::int64_t sample_poisson(double rate, Rng& rng) {
  require_positive(rate, "rate");
  std::int64_t count = 0;
  double clock = 0.0;
  while (true) {
    clock += rng.exponential(rate);
    if (clock > 1.0) return count;
    ++count;
  }
}

}  // namespace crntime
