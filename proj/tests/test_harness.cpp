#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "crntime/error.hpp"
#include "crntime/harness.hpp"
#include "crntime/io.hpp"

using namespace crntime;

TEST_CASE("leader election timing") {
  const auto two = leader_election_experiment(2, 4000, 1);
  CHECK(two.analytic_mean == 2.0);
  CHECK(std::abs(two.mean - 2.0) < 4.0 * two.stddev / std::sqrt(4000.0));

  const auto hundred = leader_election_experiment(100, 1000, 2);
  CHECK(hundred.analytic_mean == 198.0);
  CHECK(std::abs(hundred.mean - 198.0) / 198.0 < 0.05);

  const auto single = leader_election_experiment(10, 1, 3);
  CHECK(single.times.size() == 1);
  CHECK(single.ci95_half_width == 0.0);
  CHECK(single.mean == single.times[0]);

  CHECK_THROWS_AS(leader_election_experiment(1, 10, 1), DomainError);
}

TEST_CASE("chain CRN shape") {
  const Crn c = chain_crn(3);
  CHECK(c.species_count() == 4);
  CHECK(c.reaction_count() == 6);
  CHECK_THROWS_AS(chain_crn(0), DomainError);
}

TEST_CASE("chain experiment") {
  const auto fast = chain_experiment(1, 1000, 200, 1.0, 1);
  CHECK(fast.produced_fraction == 1.0);
  CHECK(fast.production.p90 < 0.05);

  const auto small = chain_experiment(1, 2, 2000, 10.0, 2);
  // Two decays at total rate 2 race one dimerisation at rate 1/2: success 1/5.
  CHECK(small.produced_fraction == doctest::Approx(0.2).epsilon(0.2));

  double last = 1.0;
  for (std::size_t m = 1; m <= 4; ++m) {
    const auto r = chain_experiment(m, 60, 400, 3.0, 3);
    CHECK(r.produced_fraction <= last + 0.05);
    last = r.produced_fraction;
  }
  CHECK_THROWS_AS(chain_experiment(1, 1, 10, 1.0, 1), DomainError);
}

TEST_CASE("scaling a template keeps proportions") {
  const Configuration t({1, 3});
  CHECK(scale_configuration(t, 100) == Configuration({25, 75}));
  CHECK(scale_configuration(t, 10) == Configuration({2, 8}));
  CHECK(scale_configuration(Configuration({1, 1, 1}), 10) == Configuration({4, 3, 3}));
  CHECK_THROWS_AS(scale_configuration(Configuration(2), 10), DomainError);
}

TEST_CASE("constant time scan") {
  const Crn xy = parse_crn("X -> Y").crn;
  const std::vector<Count> grid{100, 1000, 10000};
  const auto scan = constant_time_scan(xy, Configuration({1, 0}), 0.5, grid, 400, std::nullopt, 1);
  CHECK(scan.t_cap == 2.0);
  REQUIRE(scan.rows.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    const double n = static_cast<double>(grid[i]);
    CHECK(scan.rows[i].median == doctest::Approx(std::log(2.0) / n).epsilon(0.25));
    CHECK(scan.rows[i].produced_count == 400);
  }
  CHECK(scan.rows[1].median < scan.rows[0].median);
  CHECK(scan.rows[2].median < scan.rows[1].median);

  const std::vector<Count> one{50};
  CHECK(constant_time_scan(xy, Configuration({1, 0}), 0.5, one, 10, 1.0, 1).rows.size() == 1);

  const Crn leader = leader_election_crn();
  const std::vector<Count> lgrid{100, 1000, 10000};
  const auto ls = constant_time_scan(leader, Configuration({1, 0}), 1.0, lgrid, 300, std::nullopt, 2);
  for (std::size_t i = 1; i < ls.rows.size(); ++i) {
    CHECK(ls.rows[i].median <= 1.1 * ls.rows[i - 1].median);
  }

  const std::vector<Count> tiny{3};
  CHECK_THROWS_AS(constant_time_scan(xy, Configuration({1, 99}), 0.5, grid, 10, 1.0, 1), DomainError);
  CHECK_THROWS_AS(constant_time_scan(xy, Configuration({1, 3}), 0.1, tiny, 10, 1.0, 1), DomainError);
  CHECK_THROWS_AS(constant_time_scan(xy, Configuration({1, 0}), 0.5, {}, 10, 1.0, 1), DomainError);
}

TEST_CASE("experiments are deterministic across thread counts") {
  std::ostringstream a, b;
  const std::vector<LeaderElectionStats> ra{leader_election_experiment(50, 200, 7, 1)};
  const std::vector<LeaderElectionStats> rb{leader_election_experiment(50, 200, 7, 4)};
  write_leader_csv(a, ra);
  write_leader_csv(b, rb);
  CHECK(a.str() == b.str());

  const Crn xy = parse_crn("X -> Y").crn;
  const std::vector<Count> grid{100, 1000};
  CHECK(to_json(constant_time_scan(xy, Configuration({1, 0}), 0.5, grid, 100, 1.0, 3, 1)).dump() ==
        to_json(constant_time_scan(xy, Configuration({1, 0}), 0.5, grid, 100, 1.0, 3, 4)).dump());
}

TEST_CASE("digest identifies the network") {
  CHECK(crn_digest(chain_crn(2)) == crn_digest(chain_crn(2)));
  CHECK(crn_digest(chain_crn(2)) != crn_digest(chain_crn(3)));
  CHECK(crn_digest(chain_crn(2)).size() == 16);
}
