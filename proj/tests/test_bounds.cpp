#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "crntime/bounds.hpp"
#include "crntime/error.hpp"
#include "crntime/harness.hpp"
#include "crntime/stats.hpp"

using namespace crntime;

namespace {

const double kE = std::exp(1.0);

}  // namespace

TEST_CASE("decay bound") {
  CHECK(log_bound_decay(100, 1.0, 1.0, 0.1).log2 == doctest::Approx(9.0 * std::log2(0.2 * kE)));
  CHECK(log_bound_decay(100, 1.0, 1.0, 0.1).log2 == doctest::Approx(-7.913).epsilon(1e-3));
  const LogBound vac = log_bound_decay(100, 1.0, 1.0, 0.5);
  CHECK(vac.vacuous());
  CHECK(vac.log2 >= 0.0);
  double last = log_bound_decay(20, 0.5, 1.0, 0.1).log2;
  for (std::uint64_t n = 40; n <= 5000; n *= 2) {
    const double b = log_bound_decay(n, 0.5, 1.0, 0.1).log2;
    CHECK(b < last);
    last = b;
  }
  // No underflow for huge N.
  CHECK(std::isfinite(log_bound_decay(std::uint64_t{1} << 50, 1.0, 1.0, 0.01).log2));
  CHECK_THROWS_AS(log_bound_decay(0, 1.0, 1.0, 0.1), DomainError);
  CHECK_THROWS_AS(log_bound_decay(10, 1.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(log_bound_decay(10, 0.0, 1.0, 0.5), DomainError);
}

TEST_CASE("poisson bound") {
  const double direct = std::log2(std::exp(-10.0) * std::pow(kE / 2.0, 20.0));
  CHECK(log_bound_poisson(10.0, 20.0, PoissonSide::Upper).log2 == doctest::Approx(direct));
  CHECK(direct == doctest::Approx(-5.573).epsilon(1e-3));
  for (double eps : {1e-2, 1e-4}) {
    CHECK(std::abs(log_bound_poisson(10.0, 10.0 * (1 + eps), PoissonSide::Upper).log2) < 1e-2);
    CHECK(std::abs(log_bound_poisson(10.0, 10.0 * (1 - eps), PoissonSide::Lower).log2) < 1e-2);
  }
  const double gamma_form = std::log2(std::pow(std::exp(1.0 - 1.0 / 2.0) / 2.0, 2.0 * 10.0));
  CHECK(log_bound_poisson_gamma(10.0, 2.0).log2 == doctest::Approx(gamma_form));
  CHECK(log_bound_poisson(10.0, 20.0, PoissonSide::Upper).log2 == doctest::Approx(gamma_form));
  CHECK(log_bound_poisson_gamma(10.0, 0.5).log2 ==
        doctest::Approx(log_bound_poisson(10.0, 5.0, PoissonSide::Lower).log2));
  CHECK_THROWS_AS(log_bound_poisson(10.0, 5.0, PoissonSide::Upper), DomainError);
  CHECK_THROWS_AS(log_bound_poisson(10.0, 15.0, PoissonSide::Lower), DomainError);
  CHECK_THROWS_AS(log_bound_poisson(10.0, 0.0, PoissonSide::Lower), DomainError);
}

TEST_CASE("walk bound") {
  const LogBound a = log_bound_walk(2.0, 1.0, 8.0, 1.0);
  CHECK(a.log2 == doctest::Approx(1.0 - 0.5 * std::log2(kE)));
  CHECK(a.log2 == doctest::Approx(0.2787).epsilon(1e-3));
  CHECK(a.vacuous());
  const double t1 = log_bound_walk(3.0, 1.0, 1.0, 0.5).log2;
  const double t4 = log_bound_walk(3.0, 1.0, 4.0, 0.5).log2;
  CHECK((1.0 - t4) == doctest::Approx(4.0 * (1.0 - t1)));
  const double b = log_bound_walk(100.0, 25.0, 1.0, 2.0 / 3.0).log2;
  CHECK(b == doctest::Approx(1.0 - std::log2(kE) * (4.0 / 9.0) * 5625.0 / 800.0));
  CHECK(b == doctest::Approx(-3.508).epsilon(1e-3));
  CHECK_THROWS_AS(log_bound_walk(1.0, 1.0, 1.0, 0.5), DomainError);
  CHECK_THROWS_AS(log_bound_walk(1.0, 2.0, 1.0, 0.5), DomainError);
}

TEST_CASE("reflecting bound and hypotheses") {
  CHECK(log_bound_reflecting(0.22, 1.0, 0.05, 1000).log2 == doctest::Approx(-9.0));
  const LogBound edge = log_bound_reflecting(0.22, 1.0, 0.05, 100);
  CHECK(edge.log2 == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(edge.vacuous());
  CHECK_THROWS_AS(log_bound_reflecting(0.22, 1.0, 0.06, 1000), HypothesisError);
  CHECK_THROWS_AS(log_bound_reflecting(0.22, 0.5, 0.01, 1000), HypothesisError);
  CHECK_THROWS_AS(log_bound_reflecting(0.22, 1.0, 0.05, 20), HypothesisError);
  try {
    log_bound_reflecting(0.22, 1.0, 0.06, 1000);
  } catch (const HypothesisError& e) {
    CHECK(std::string(e.what()).find("delta_r") != std::string::npos);
  }
}

TEST_CASE("theorem constants on the chain") {
  const Crn chain = chain_crn(3);
  Configuration init(chain.species_count());
  init.set(0, 1000);
  const auto k = compute_theorem_constants(chain, 1.0, 1.0, init);
  CHECK(k.K_hat == 6.0);
  CHECK(k.k_hat == 1.0);
  CHECK(k.m == 3);
  CHECK(k.t == 4.0);
  CHECK(k.lambda == 6.0);
  CHECK(k.log2_c == doctest::Approx(std::log2(4.0) + 24.0 / std::log(2.0)));
  REQUIRE(k.log2_delta.size() == 4);
}

TEST_CASE("theorem constants against direct evaluation") {
  // Small enough that every constant is representable as a double.
  const Crn leader = leader_election_crn();
  const double alpha = 0.5;
  const auto k = compute_theorem_constants(leader, alpha, 1.0, Configuration({10, 0}));
  const double lambda = 1.0, c = 4.0 * std::exp(lambda * 2.0);
  CHECK(k.m == 1);
  CHECK(std::exp2(k.log2_c) == doctest::Approx(c));
  const double d0 = alpha / c;
  const double d1 = 1.0 * d0 * d0 / (16.0 * lambda * c);
  CHECK(std::exp2(k.log2_delta[0]) == doctest::Approx(d0));
  CHECK(std::exp2(k.log2_delta[1]) == doctest::Approx(d1));
  const double lower = std::pow(alpha * 1.0 / (16.0 * lambda * c * c), std::pow(2.0, 2 - 1));
  CHECK(std::exp2(k.log2_delta_m_lower) == doctest::Approx(lower));
  const double eps_prime =
      (1.0 / 88.0) * std::pow(alpha / (256.0 * std::exp(2.0 * 1.0 * 1.0 * 2.0)), std::pow(2.0, 2));
  CHECK(std::exp2(k.log2_epsilon_prime) == doctest::Approx(eps_prime));
  CHECK(std::exp2(k.log2_epsilon) == doctest::Approx(eps_prime / 2.0));
  CHECK(d1 > lower);

  bool flagged = false;
  for (const auto& t : k.n_thresholds) flagged |= !t.warning.empty();
  CHECK(flagged);
  CHECK(k.log2_n_required >= std::log2(4.0 + 2.0) - k.log2_epsilon_prime - 1e-9);
}

TEST_CASE("c_hat is raised to at least 1 and 1/K") {
  const Crn slow = parse_crn("X -> Y ; k=0.25").crn;
  const auto k = compute_theorem_constants(slow, 1.0, 0.5, Configuration({4, 0}));
  CHECK(k.c_hat == 4.0);
  CHECK(k.lambda == doctest::Approx(1.0));
}

TEST_CASE("a CRN with nothing new to produce has a one-rung ladder") {
  const Crn crn = parse_crn("X + Y -> 2X").crn;
  const auto k = compute_theorem_constants(crn, 0.5, 1.0, Configuration({3, 3}));
  CHECK(k.m == 0);
  CHECK(k.t == 1.0);
  CHECK(k.log2_delta.size() == 1);
}

TEST_CASE("delta ladder recurrence and closed form") {
  const Crn chain = chain_crn(5);
  Configuration init(chain.species_count());
  init.set(0, 1);
  const auto k = compute_theorem_constants(chain, 0.3, 2.0, init);
  const double q = std::log2(k.k_hat) - 4.0 - std::log2(k.lambda) - k.log2_c;
  CHECK(k.log2_recurrence_factor() == doctest::Approx(q));
  for (std::size_t i = 0; i < k.log2_delta.size(); ++i) {
    const double closed = std::ldexp(k.log2_delta[0], int(i)) + (std::ldexp(1.0, int(i)) - 1.0) * q;
    CHECK(k.log2_delta[i] == doctest::Approx(closed).epsilon(1e-12));
    CHECK(k.log2_delta[i] > std::ldexp(k.log2_lower_base, int(i)));
    if (i > 0) CHECK(k.log2_delta[i] == doctest::Approx(2.0 * k.log2_delta[i - 1] + q));
  }
}

TEST_CASE("theorem constant errors") {
  const Crn crn = leader_election_crn();
  CHECK_THROWS_AS(compute_theorem_constants(crn, 0.0, 1.0, Configuration({1, 0})), DomainError);
  CHECK_THROWS_AS(compute_theorem_constants(crn, 1.5, 1.0, Configuration({1, 0})), DomainError);
  CHECK_THROWS_AS(compute_theorem_constants(crn, 0.5, 1.0, Configuration(2)), DomainError);
  CHECK_THROWS_AS(compute_theorem_constants(crn, 0.5, 1.0, SpeciesSet{}), DomainError);
  const Crn empty = CrnBuilder().species("A").build();
  CHECK_THROWS_AS(compute_theorem_constants(empty, 0.5, 1.0, SpeciesSet{0}), DomainError);
}

TEST_CASE("Clopper-Pearson upper limit") {
  CHECK(clopper_pearson_upper(0, 100, 0.99) == doctest::Approx(1.0 - std::pow(0.01, 0.01)));
  CHECK(clopper_pearson_upper(100, 100, 0.99) == 1.0);
  // Upper limit u solves P[Bin(n, u) <= k] = 0.01.
  const std::size_t n = 50, hits = 7;
  const double u = clopper_pearson_upper(hits, n, 0.99);
  double cdf = 0.0;
  for (std::size_t j = 0; j <= hits; ++j) {
    cdf += std::exp(std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0) +
                    j * std::log(u) + (n - j) * std::log1p(-u));
  }
  CHECK(cdf == doctest::Approx(0.01).epsilon(1e-6));
}

TEST_CASE("Monte Carlo validation verdicts") {
  const auto vac = monte_carlo_validate(DecayCase{200, 1.0, 1.0, 0.25}, 100000, 1);
  CHECK(vac.vacuous);
  CHECK(vac.verdict == Verdict::Dominates);
  CHECK(vac.log2_bound == doctest::Approx(49.0 * std::log2(0.5 * kE)));

  const auto tiny = monte_carlo_validate(DecayCase{2000, 1.0, 1.0, 0.05}, 10000, 2);
  CHECK(tiny.verdict == Verdict::Inconclusive);

  const auto walk = monte_carlo_validate(WalkCase{100.0, 25.0, 1.0, 2.0 / 3.0}, 100000, 3);
  CHECK(walk.verdict == Verdict::Dominates);
  CHECK(walk.upper_confidence <= std::exp2(-3.508));
  CHECK(walk.trials == 100000);

  CHECK_THROWS_AS(monte_carlo_validate(WalkCase{}, 100, 1), DomainError);
  CHECK_THROWS_AS(monte_carlo_validate(ReflectingCase{0.22, 1.0, 0.2, 1000}, 10000, 1),
                  HypothesisError);
}

TEST_CASE("the decay lemma fails when 2 delta e^(lambda t) > 1 and delta N < 1") {
  // N=1, delta=0.5, lambda t=2: the true tail 1 - e^-2 exceeds the bound e^-1.
  const auto r = monte_carlo_validate(DecayCase{1, 2.0, 1.0, 0.5}, 10000, 4);
  CHECK(r.log2_bound == doctest::Approx(-0.5 * std::log2(2.0 * 0.5 * std::exp(2.0))));
  CHECK(r.verdict == Verdict::Violated);
}

TEST_CASE("validation is independent of the thread count") {
  const BoundCase c = PoissonCase{20.0, 30.0, PoissonSide::Upper};
  const auto a = monte_carlo_validate(c, 20000, 5, 1);
  const auto b = monte_carlo_validate(c, 20000, 5, 3);
  CHECK(a.empirical_hits == b.empirical_hits);
  CHECK(a.upper_confidence == b.upper_confidence);
}
