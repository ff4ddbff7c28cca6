#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "crntime/error.hpp"
#include "crntime/harness.hpp"
#include "crntime/model.hpp"

using namespace crntime;

namespace {

Crn one(std::string_view line) { return parse_crn(line).crn; }

}  // namespace

TEST_CASE("parse the three reference reactions") {
  const Crn abc = one("A + 2B -> A + 3C ; k=4.7");
  REQUIRE(abc.species().names() == std::vector<std::string>{"A", "B", "C"});
  REQUIRE(abc.reaction_count() == 1);
  CHECK(abc.reactions()[0].reactants == std::vector<Count>{1, 2, 0});
  CHECK(abc.reactions()[0].products == std::vector<Count>{1, 0, 3});
  CHECK(abc.reactions()[0].rate == 4.7);

  const Crn decay = one("X -> 0 ; k=1");
  CHECK(decay.reactions()[0].reactants == std::vector<Count>{1});
  CHECK(decay.reactions()[0].products == std::vector<Count>{0});
  CHECK(decay.reactions()[0].rate == 1.0);

  const Crn leader = one("L + L -> L + N");
  CHECK(leader.reactions()[0].reactants == std::vector<Count>{2, 0});
  CHECK(leader.reactions()[0].products == std::vector<Count>{1, 1});
  CHECK(leader.reactions()[0].rate == 1.0);
}

TEST_CASE("parse header, labels, comments and init") {
  const auto parsed = parse_crn(
      "# comment\n"
      "species: Z, A\n"
      "A -> Z ; k=0.5 ; label=convert  # trailing\n"
      "init: A = 3\n"
      "init: Z = 0\n");
  CHECK(parsed.crn.species().names() == std::vector<std::string>{"Z", "A"});
  CHECK(parsed.crn.reactions()[0].label == "convert");
  REQUIRE(parsed.init);
  CHECK((*parsed.init)[1] == 3);
  CHECK(parsed.init->total() == 3);
}

TEST_CASE("parse errors carry line and column") {
  auto message = [](std::string_view text) {
    try {
      parse_crn(text);
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("X -> Y\nX -> -> Y\n").find("line 2") != std::string::npos);
  CHECK(message("X -> Y ; k=0\n").find("column") != std::string::npos);
  CHECK(message("X -> Y ; k=-1\n") != "no error");
  CHECK(message("X -> X\n") != "no error");
  CHECK(message("X -> Y\ninit: X = 1\ninit: X = 2\n").find("line 3") != std::string::npos);
  CHECK(message("X -> Y ; rate=2\n") != "no error");
  CHECK(message("X -> Y ; k=1 ; k=2\n") != "no error");
  CHECK(message("0X -> Y\n") != "no error");
  CHECK(message("species: A, A\n") != "no error");
}

TEST_CASE("format round-trips") {
  for (const char* text : {"A + 2B -> A + 3C ; k=4.7", "X -> 0 ; k=1", "L + L -> L + N"}) {
    const Crn crn = one(text);
    CHECK(parse_crn(format_crn(crn)).crn == crn);
  }
  const Crn empty = CrnBuilder().species("A").species("B").build();
  const std::string doc = format_crn(empty);
  CHECK(doc == "species: A, B\n");
  CHECK(parse_crn(doc).crn == empty);

  const Crn chain = chain_crn(3);
  CHECK(parse_crn(format_crn(chain)).crn == chain);

  Configuration init(chain.species_count());
  init.set(0, 17);
  const auto again = parse_crn(format_crn(chain, init));
  CHECK(again.crn == chain);
  REQUIRE(again.init);
  CHECK(*again.init == init);
}

TEST_CASE("rates survive formatting bit for bit") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> dist(1e-6, 1e6);
  for (int i = 0; i < 200; ++i) {
    const double k = dist(gen);
    const Crn crn = CrnBuilder().reaction({{"A", 1}}, {{"B", 2}}, k).build();
    CHECK(parse_crn(format_crn(crn)).crn.reactions()[0].rate == k);
  }
}

TEST_CASE("applicability and application") {
  const Crn crn = one("A + 2B -> A + 3C ; k=4.7");
  const Reaction& rx = crn.reactions()[0];
  const Configuration c({1, 2, 0});
  CHECK(is_applicable(c, rx));
  CHECK_FALSE(is_applicable(Configuration({1, 1, 0}), rx));
  CHECK_FALSE(is_applicable(Configuration(3), rx));
  const Configuration after = apply_reaction(c, rx);
  CHECK(after == Configuration({1, 0, 3}));
  CHECK(after.total() == 4);
  CHECK_THROWS_AS(apply_reaction(Configuration({1, 1, 0}), rx), NotApplicableError);

  const Crn decay = one("X -> 0");
  const Configuration x4 = apply_reaction(Configuration(std::vector<Count>{5}), decay.reactions()[0]);
  CHECK(x4 == Configuration(std::vector<Count>{4}));
  CHECK(x4.total() == 4);

  const Crn leader = one("L + L -> L + N");
  CHECK(apply_reaction(Configuration({2, 0}), leader.reactions()[0]) == Configuration({1, 1}));
}

TEST_CASE("support") {
  CHECK(support(Configuration({0, 3})) == SpeciesSet{1});
  CHECK(support(Configuration(4)).empty());
  CHECK(support(Configuration({1, 1, 1})) == SpeciesSet{0, 1, 2});
}

TEST_CASE("random application keeps totals consistent") {
  std::mt19937_64 gen(11);
  const Crn crn = parse_crn(
                      "A + B -> C\n"
                      "C -> A + 2B\n"
                      "2A -> 0\n"
                      "B -> A\n")
                      .crn;
  Configuration c({5, 5, 5});
  for (int step = 0; step < 500; ++step) {
    std::vector<std::size_t> ok;
    for (std::size_t j = 0; j < crn.reaction_count(); ++j) {
      if (is_applicable(c, crn.reactions()[j])) ok.push_back(j);
    }
    if (ok.empty()) break;
    const Reaction& rx = crn.reactions()[ok[gen() % ok.size()]];
    const Configuration next = apply_reaction(c, rx);
    Count sum = 0;
    for (Count v : next.counts()) sum += v;
    CHECK(next.total() == sum);
    CHECK(next.total() + rx.order() == c.total() + rx.product_count());
    c = next;
  }
}

TEST_CASE("assignments") {
  const Crn crn = one("X1 + Y -> Z");
  const Configuration c = parse_assignments(crn, "X1=1000, Y=5");
  CHECK(c == Configuration({1000, 5, 0}));
  CHECK_THROWS_AS(parse_assignments(crn, "Q=1"), Error);
  CHECK_THROWS_AS(parse_assignments(crn, "X1=1,X1=2"), Error);
  CHECK_THROWS_AS(parse_assignments(crn, "X1=abc"), Error);
}

TEST_CASE("configuration arithmetic") {
  Configuration c({1, 2});
  CHECK(c.scaled(3) == Configuration({3, 6}));
  CHECK_THROWS_AS(c.remove(0, 2), NotApplicableError);
  c.add(1, 4);
  CHECK(c.total() == 7);
}
