#include "crntime/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "crntime/analysis.hpp"
#include "crntime/error.hpp"
#include "crntime/parallel.hpp"
#include "crntime/processes.hpp"
#include "crntime/rng.hpp"
#include "crntime/stats.hpp"

namespace crntime {

namespace {

constexpr double kLog2e = std::numbers::log2e;

void require(bool ok, const std::string& message) {
  if (!ok) throw DomainError(message);
}

bool positive(double x) { return x > 0.0 && std::isfinite(x); }

}  // namespace

LogBound log_bound_decay(std::uint64_t N, double lambda, double t, double delta) {
  require(N >= 1, "decay bound: N must be at least 1");
  require(positive(lambda) && positive(t), "decay bound: lambda and t must be positive");
  require(delta > 0.0 && delta < 1.0, "decay bound: delta must lie in (0, 1)");
  // log2(2δe^{λt}) = 1 + log2 δ + λt·log2 e
  const double log2_base = 1.0 + std::log2(delta) + lambda * t * kLog2e;
  const double exponent = delta * static_cast<double>(N) - 1.0;
  return {exponent * log2_base};
}

std::string to_string(PoissonSide side) { return side == PoissonSide::Upper ? "upper" : "lower"; }

LogBound log_bound_poisson(double lambda, double n, PoissonSide side) {
  require(positive(lambda), "poisson bound: lambda must be positive");
  if (side == PoissonSide::Upper) {
    require(n > lambda && std::isfinite(n), "poisson bound: upper tail requires n > lambda");
  } else {
    require(n > 0.0 && n < lambda, "poisson bound: lower tail requires 0 < n < lambda");
  }
  // ln[e^{-λ}(eλ/n)^n] = -λ + n(1 + ln λ - ln n)
  const double nats = -lambda + n * (1.0 + std::log(lambda) - std::log(n));
  return {nats * kLog2e};
}

LogBound log_bound_poisson_gamma(double lambda, double gamma) {
  require(positive(lambda), "poisson bound: lambda must be positive");
  require(positive(gamma) && gamma != 1.0, "poisson bound: gamma must be positive and != 1");
  // γλ·ln(e^{1-1/γ}/γ) = γλ(1 - 1/γ - ln γ)
  const double nats = gamma * lambda * (1.0 - 1.0 / gamma - std::log(gamma));
  return {nats * kLog2e};
}

LogBound log_bound_walk(double f_hat, double r_hat, double t, double eps_hat) {
  require(positive(f_hat) && positive(r_hat), "walk bound: rates must be positive");
  require(f_hat > r_hat, "walk bound: requires f_hat > r_hat");
  require(positive(t) && positive(eps_hat), "walk bound: t and eps_hat must be positive");
  const double d = f_hat - r_hat;
  const double exponent = eps_hat * eps_hat * d * d * t / (8.0 * f_hat);
  return {1.0 - kLog2e * exponent};
}

LogBound log_bound_reflecting(double delta_f, double lambda_r, double delta_r, std::uint64_t N) {
  if (!positive(delta_f) || !positive(delta_r) || !positive(lambda_r)) {
    throw HypothesisError("reflecting bound: delta_f, delta_r and lambda_r must be positive");
  }
  if (lambda_r < 1.0) throw HypothesisError("reflecting bound: hypothesis lambda_r >= 1 fails");
  if (delta_r > delta_f / (4.0 * lambda_r)) {
    throw HypothesisError("reflecting bound: hypothesis delta_r <= delta_f/(4 lambda_r) fails");
  }
  if (static_cast<double>(N) < 6.0 / delta_f) {
    throw HypothesisError("reflecting bound: hypothesis N >= 6/delta_f fails");
  }
  return {-delta_f * static_cast<double>(N) / 22.0 + 1.0};
}

// ---------------------------------------------------------------------------
// Theorem constants

double TheoremConstants::log2_recurrence_factor() const {
  return std::log2(k_hat) - 4.0 - std::log2(lambda) - log2_c;
}

TheoremConstants compute_theorem_constants(const Crn& crn, double alpha, double c_hat,
                                           const SpeciesSet& initial_support) {
  require(!crn.reactions().empty(), "theorem constants need at least one reaction");
  require(alpha > 0.0 && alpha <= 1.0, "alpha must lie in (0, 1]");
  require(positive(c_hat), "c_hat must be positive");
  require(!initial_support.empty(), "theorem constants need a nonempty initial support");

  TheoremConstants k;
  k.alpha = alpha;
  k.c_hat_input = c_hat;
  k.species_count = crn.species_count();
  k.k_hat = std::numeric_limits<double>::infinity();
  for (const auto& rx : crn.reactions()) {
    k.K_hat += rx.rate;
    k.k_hat = std::min(k.k_hat, rx.rate);
  }
  k.c_hat = std::max({c_hat, 1.0, 1.0 / k.K_hat});
  k.lambda = k.c_hat * k.K_hat;
  k.m = stage_decomposition(crn, initial_support).m;
  k.t = static_cast<double>(k.m + 1);
  k.log2_c = 2.0 + k.lambda * k.t * kLog2e;

  const double q = k.log2_recurrence_factor();
  k.log2_delta.push_back(std::log2(alpha) - k.log2_c);
  for (std::size_t i = 0; i < k.m; ++i) {
    k.log2_delta.push_back(2.0 * k.log2_delta.back() + q);
  }

  const auto species = static_cast<double>(k.species_count);
  k.log2_lower_base =
      std::log2(alpha) + std::log2(k.k_hat) - 4.0 - std::log2(k.lambda) - 2.0 * k.log2_c;
  k.log2_delta_m_lower = std::ldexp(k.log2_lower_base, static_cast<int>(k.species_count) - 1);

  const double inner = std::log2(alpha) + std::log2(k.k_hat) - 8.0 - std::log2(k.K_hat) -
                       std::log2(k.c_hat) - 2.0 * k.K_hat * k.c_hat * species * kLog2e;
  k.log2_epsilon_prime =
      std::log2(k.k_hat) - std::log2(88.0) + std::ldexp(inner, static_cast<int>(k.species_count));
  k.log2_epsilon = k.log2_epsilon_prime - 1.0;

  k.log2_n_required = -std::numeric_limits<double>::infinity();
  auto add = [&](std::string description, double value, std::string warning = {}) {
    if (warning.empty()) k.log2_n_required = std::max(k.log2_n_required, value);
    k.n_thresholds.push_back({std::move(description), value, std::move(warning)});
  };
  for (std::size_t i = 0; i < k.log2_delta.size(); ++i) {
    add("n >= 2/delta_" + std::to_string(i) + "^2", 1.0 - 2.0 * k.log2_delta[i]);
  }
  const double log2_species = std::log2(species);
  add("n >= (2 + 2 log2|species|)/eps'", std::log2(2.0 + 2.0 * log2_species) - k.log2_epsilon_prime,
      "insufficient for |species|*2^(-eps' n + 2) <= 2^(-eps' n/2); see the 4 + 2 log2 form");
  add("n >= (4 + 2 log2|species|)/eps'", std::log2(4.0 + 2.0 * log2_species) - k.log2_epsilon_prime);
  add("n > (alpha k_hat/(16 lambda c^2))^(2^(|species|-1))", k.log2_delta_m_lower,
      "vacuous: the right-hand side is below 1");
  return k;
}

TheoremConstants compute_theorem_constants(const Crn& crn, double alpha, double c_hat,
                                           const Configuration& init) {
  if (init.is_zero()) throw DomainError("theorem constants need a nonzero initial configuration");
  return compute_theorem_constants(crn, alpha, c_hat, support(init));
}

// ---------------------------------------------------------------------------
// Monte Carlo validation

std::string case_name(const BoundCase& c) {
  static constexpr const char* names[] = {"decay", "poisson", "walk", "reflecting"};
  return names[c.index()];
}

LogBound analytic_bound(const BoundCase& c) {
  struct Visitor {
    LogBound operator()(const DecayCase& d) const {
      return log_bound_decay(d.N, d.lambda, d.t, d.delta);
    }
    LogBound operator()(const PoissonCase& p) const {
      return log_bound_poisson(p.lambda, p.n, p.side);
    }
    LogBound operator()(const WalkCase& w) const {
      return log_bound_walk(w.f_hat, w.r_hat, w.t, w.eps_hat);
    }
    LogBound operator()(const ReflectingCase& r) const {
      return log_bound_reflecting(r.delta_f, r.lambda_r, r.delta_r, r.N);
    }
  };
  return std::visit(Visitor{}, c);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Dominates: return "Dominates";
    case Verdict::Violated: return "Violated";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

namespace {

/// Whether one draw lands in the tail event the bound controls.
bool tail_event(const BoundCase& c, Rng& rng) {
  struct Visitor {
    Rng& rng;
    bool operator()(const DecayCase& d) const {
      const auto value = sample_decay({d.N, d.lambda, d.t}, rng);
      return static_cast<double>(value) < d.delta * static_cast<double>(d.N);
    }
    bool operator()(const PoissonCase& p) const {
      const auto value = static_cast<double>(sample_poisson(p.lambda, rng));
      return p.side == PoissonSide::Upper ? value >= p.n : value <= p.n;
    }
    bool operator()(const WalkCase& w) const {
      const auto value = sample_walk_z({w.f_hat, w.r_hat, w.t}, rng);
      return static_cast<double>(value) < (1.0 - w.eps_hat) * (w.f_hat - w.r_hat) * w.t;
    }
    bool operator()(const ReflectingCase& r) const {
      const auto s = sample_walk_reflecting({r.N, r.delta_f, r.lambda_r, 1.0}, rng);
      return static_cast<double>(s.running_max) < r.delta_r * static_cast<double>(r.N);
    }
  };
  return std::visit(Visitor{rng}, c);
}

}  // namespace

BoundReport monte_carlo_validate(const BoundCase& c, std::size_t trials, std::uint64_t seed,
                                 unsigned threads) {
  if (trials < kMinValidationTrials) {
    throw DomainError("monte carlo validation needs at least " +
                      std::to_string(kMinValidationTrials) + " trials");
  }
  const LogBound bound = analytic_bound(c);
  std::vector<unsigned char> hits(trials, 0);
  parallel_for(trials, threads, [&](std::size_t i) {
    Rng rng = Rng::substream(seed, i);
    hits[i] = tail_event(c, rng) ? 1 : 0;
  });

  BoundReport report;
  report.log2_bound = bound.log2;
  report.trials = trials;
  report.vacuous = bound.vacuous();
  for (unsigned char h : hits) report.empirical_hits += h;
  report.upper_confidence = clopper_pearson_upper(report.empirical_hits, trials, 0.99);
  const double p = bound.probability();
  if (p < 10.0 / static_cast<double>(trials)) {
    report.verdict = Verdict::Inconclusive;
  } else if (report.upper_confidence <= p) {
    report.verdict = Verdict::Dominates;
  } else {
    report.verdict = Verdict::Violated;
  }
  return report;
}

}  // namespace crntime
