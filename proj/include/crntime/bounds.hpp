#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "crntime/model.hpp"

namespace crntime {

/// A probability bound carried as its base-2 logarithm.
struct LogBound {
  double log2 = 0.0;

  /// The bound is >= 1 and says nothing.
  bool vacuous() const noexcept { return log2 >= 0.0; }
  double probability() const noexcept { return std::exp2(log2); }
};

/// Pr[D(t) < δN] < (2δe^{λt})^{δN-1}.
LogBound log_bound_decay(std::uint64_t N, double lambda, double t, double delta);

enum class PoissonSide { Upper, Lower };

std::string to_string(PoissonSide side);

/// e^{-λ}(eλ/n)^n, bounding Pr[P(λ) >= n] (Upper, n > λ) or
/// Pr[P(λ) <= n] (Lower, 0 < n < λ).
LogBound log_bound_poisson(double lambda, double n, PoissonSide side);

/// The same bound in the form (e^{1-1/γ}/γ)^{γλ} with n = γλ, γ ≠ 1.
LogBound log_bound_poisson_gamma(double lambda, double gamma);

/// Pr[U(t) < (1-ε)(f-r)t] < 2 exp(-ε²(f-r)²t / (8f)); requires f > r > 0.
LogBound log_bound_walk(double f_hat, double r_hat, double t, double eps_hat);

/// Pr[max_{[0,1]} W < δ_r N] < 2^{-δ_f N/22 + 1}. Throws HypothesisError
/// naming the failed condition unless λ_r >= 1, δ_r <= δ_f/(4λ_r) and
/// N >= 6/δ_f.
LogBound log_bound_reflecting(double delta_f, double lambda_r, double delta_r, std::uint64_t N);

struct NThreshold {
  std::string description;
  double log2_value = 0.0;  ///< log2 of the minimum n
  std::string warning;      ///< empty unless the condition is flagged
};

/// Constants of the constant-time production argument, all small
/// probabilities and fractions in log2 space.
struct TheoremConstants {
  double alpha = 0.0;
  double c_hat_input = 0.0;
  double c_hat = 0.0;  ///< max(input, 1, 1/K̂)
  double K_hat = 0.0;  ///< sum of rate constants
  double k_hat = 0.0;  ///< minimum rate constant
  double lambda = 0.0;  ///< ĉ·K̂
  std::size_t m = 0;
  std::size_t species_count = 0;
  double log2_c = 0.0;  ///< c = 4e^{λ(m+1)}
  /// log2 δ_0..δ_m with δ_0 = α/c and δ_{i+1} = k̂δ_i²/(16λc).
  std::vector<double> log2_delta;
  /// log2 of (αk̂/(16λc²)), the base of the doubly exponential lower bounds.
  double log2_lower_base = 0.0;
  /// 2^{|Λ|-1}·log2_lower_base.
  double log2_delta_m_lower = 0.0;
  double log2_epsilon_prime = 0.0;
  double log2_epsilon = 0.0;
  double t = 0.0;  ///< m + 1
  std::vector<NThreshold> n_thresholds;
  /// Max over the unflagged thresholds.
  double log2_n_required = 0.0;

  /// log2 q for the recurrence log2 δ_{i+1} = 2 log2 δ_i + log2 q.
  double log2_recurrence_factor() const;
};

/// Throws DomainError for an empty reaction list, alpha outside (0, 1],
/// nonpositive ĉ, or an empty initial support.
TheoremConstants compute_theorem_constants(const Crn& crn, double alpha, double c_hat,
                                           const SpeciesSet& initial_support);
TheoremConstants compute_theorem_constants(const Crn& crn, double alpha, double c_hat,
                                           const Configuration& init);

// ---------------------------------------------------------------------------
// Monte Carlo dominance checks

struct DecayCase {
  std::uint64_t N = 1;
  double lambda = 1.0;
  double t = 1.0;
  double delta = 0.5;
};

struct PoissonCase {
  double lambda = 1.0;
  double n = 1.0;
  PoissonSide side = PoissonSide::Upper;
};

struct WalkCase {
  double f_hat = 2.0;
  double r_hat = 1.0;
  double t = 1.0;
  double eps_hat = 0.5;
};

struct ReflectingCase {
  double delta_f = 1.0;
  double lambda_r = 1.0;
  double delta_r = 0.25;
  std::uint64_t N = 6;
};

using BoundCase = std::variant<DecayCase, PoissonCase, WalkCase, ReflectingCase>;

std::string case_name(const BoundCase& c);

/// The analytic bound matching the case.
LogBound analytic_bound(const BoundCase& c);

enum class Verdict { Dominates, Violated, Inconclusive };

std::string to_string(Verdict v);

struct BoundReport {
  double log2_bound = 0.0;
  std::size_t empirical_hits = 0;
  std::size_t trials = 0;
  double upper_confidence = 0.0;  ///< one-sided 99% Clopper-Pearson
  Verdict verdict = Verdict::Inconclusive;
  bool vacuous = false;
};

inline constexpr std::size_t kMinValidationTrials = 10'000;

/// Samples the process behind `c` `trials` times (draw i on substream
/// (seed, i)) and counts the tail event the bound controls. Inconclusive
/// when the bound is below 10/trials; otherwise Dominates iff the upper
/// confidence limit does not exceed the bound.
BoundReport monte_carlo_validate(const BoundCase& c, std::size_t trials, std::uint64_t seed,
                                 unsigned threads = 0);

}  // namespace crntime
