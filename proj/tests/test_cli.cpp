#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "crntime/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = crntime::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const char* name) { return std::string(CRNTIME_DATA_DIR) + "/" + name; }

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("crntime_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path write_crn(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "input.crn";
  std::ofstream(p) << text;
  return p;
}

bool has(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("validate reports the population protocol") {
  const auto r = run({"validate", data("leader.crn")});
  CHECK(r.code == 0);
  CHECK(has(r.out, "PopulationProtocol, c_hat=1"));
  const auto j = run({"--format", "json", "validate", data("leader.crn")});
  CHECK(nlohmann::json::parse(j.out)["finite_density"]["classification"] == "PopulationProtocol");
}

TEST_CASE("analyze prints the chain stages") {
  const auto r = run({"analyze", data("chain3.crn"), "--init", "X1=1000"});
  CHECK(r.code == 0);
  CHECK(has(r.out, "m=3"));
  CHECK(has(r.out, "stage 3: {X1, X2, X3, X4}"));
  const auto j = run({"--format", "json", "analyze", data("chain3.crn"), "--alpha", "1"});
  CHECK(nlohmann::json::parse(j.out)["stages"]["m"] == 3);
}

TEST_CASE("reflecting bound from the command line") {
  const auto r = run({"bounds", "reflecting", "--delta-f", "0.22", "--lambda-r", "1", "--delta-r",
                      "0.05", "--N", "1000"});
  CHECK(r.code == 0);
  CHECK(has(r.out, "log2 bound: -9"));
}

TEST_CASE("bound validation and samples") {
  const auto dir = scratch("samples");
  const auto r = run({"--seed", "5", "--out-dir", dir.string(), "bounds", "walk", "--f-hat", "100",
                      "--r-hat", "25", "--t", "1", "--eps-hat", "0.6666666666666666", "--validate",
                      "--trials", "10000", "--samples", "50"});
  CHECK(r.code == 0);
  CHECK(has(r.out, "verdict: Dominates"));
  const std::string csv = slurp(dir / "samples.csv");
  CHECK(csv.rfind("draw_index,value\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 51);

  const auto p = run({"--format", "json", "bounds", "poisson", "--lambda", "10", "--n", "20"});
  CHECK(nlohmann::json::parse(p.out)["log2_bound"].get<double>() == doctest::Approx(-5.573).epsilon(1e-3));
  const auto d = run({"bounds", "decay", "--N", "100", "--lambda", "1", "--t", "1", "--delta", "0.5"});
  CHECK(has(d.out, "vacuous"));
}

TEST_CASE("constants") {
  const auto r = run({"--format", "json", "constants", data("leader.crn"), "--alpha", "0.5"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["m"] == 1);
  CHECK(j["c_hat"] == 1.0);
  const auto unknown = run({"constants", data("chain3.crn"), "--alpha", "1"});
  CHECK(unknown.code == 1);
  CHECK(has(unknown.err, "--c-hat"));
  CHECK(run({"constants", data("chain3.crn"), "--alpha", "1", "--c-hat", "1"}).code == 0);
}

TEST_CASE("simulate writes traces and checkpoints") {
  const auto dir = scratch("simulate");
  const auto args = std::vector<std::string>{
      "simulate", data("decay.crn"), "--t-max", "1", "--checkpoints", "0.25,0.5,1",
      "--trace-out", (dir / "trace.csv").string(), "--checkpoints-out", (dir / "cp.csv").string()};
  CHECK(run(args).code == 0);
  const std::string trace = slurp(dir / "trace.csv");
  const std::string cps = slurp(dir / "cp.csv");
  CHECK(trace.rfind("event_index,time,reaction_label\n", 0) == 0);
  CHECK(cps.rfind("time,X\n", 0) == 0);
  CHECK(run(args).code == 0);
  CHECK(slurp(dir / "trace.csv") == trace);
  CHECK(slurp(dir / "cp.csv") == cps);

  const auto leader = run({"simulate", data("leader.crn"), "--init", "L=30", "--until-count", "L=1"});
  CHECK(leader.code == 0);
  CHECK(has(leader.out, "L=1 N=29"));
  CHECK(has(run({"simulate", data("xy.crn"), "--until-appears", "Y"}).out, "events: 1"));
}

TEST_CASE("first production and reachability") {
  const auto f = run({"--format", "json", "first-production", data("xy.crn"), "--target", "Y",
                      "--t-cap", "1", "--trials", "200"});
  CHECK(f.code == 0);
  CHECK(nlohmann::json::parse(f.out)["censored"] == 0);

  const auto r = run({"reachable", data("dimer.crn"), "--compare-closure", "--scale-limit", "3"});
  CHECK(r.code == 0);
  CHECK(has(r.out, "least equal scale: 2"));
  const auto plain = run({"--format", "json", "reachable", data("xy.crn"), "--init", "X=2"});
  CHECK(nlohmann::json::parse(plain.out)["visited"] == 3);
}

TEST_CASE("demos write byte-identical files for any thread count") {
  const auto one = scratch("demo1"), many = scratch("demo4");
  for (const auto& [dir, threads] : {std::pair{one, "1"}, std::pair{many, "4"}}) {
    CHECK(run({"--threads", threads, "--out-dir", dir.string(), "demo", "leader", "--n", "10,50",
               "--trials", "100"}).code == 0);
    CHECK(run({"--threads", threads, "--out-dir", dir.string(), "demo", "chain", "--m", "1,2",
               "--n", "100", "--trials", "100"}).code == 0);
    CHECK(run({"--threads", threads, "--out-dir", dir.string(), "demo", "scan", data("leader.crn"),
               "--alpha", "1", "--n-grid", "100,1000", "--trials", "100"}).code == 0);
  }
  for (const char* f : {"leader.csv", "leader.json", "chain.csv", "chain.json", "scan.csv", "scan.json"}) {
    CAPTURE(f);
    REQUIRE(fs::exists(one / f));
    CHECK(slurp(one / f) == slurp(many / f));
  }
  CHECK(slurp(one / "leader.csv").rfind("n,trial,time\n", 0) == 0);
  CHECK(slurp(one / "chain.csv").rfind("m,n,trial,time_or_censored\n", 0) == 0);
  CHECK(slurp(one / "scan.csv").rfind("n,species,trials,produced_count,median,p90,mean_uncensored\n", 0) == 0);
}

TEST_CASE("usage errors exit 2 with a synopsis") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {},
           {"frobnicate"},
           {"validate"},
           {"bounds"},
           {"bounds", "decay", "--N", "10"},
           {"--format", "xml", "validate", "x.crn"},
           {"bounds", "poisson", "--lambda", "1", "--n", "2", "--side", "middle"},
           {"demo"}}) {
    const auto r = run(args);
    CAPTURE(args.size());
    CHECK(r.code == 2);
    CHECK(has(r.err, "Usage:"));
  }
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("module errors exit 1 with their message") {
  const auto dir = scratch("errors");
  struct Case {
    std::vector<std::string> args;
    std::string message;
  };
  const fs::path bad = write_crn(dir, "X -> Y ; k=0\n");
  const fs::path tri = dir / "tri.crn";
  std::ofstream(tri) << "3X -> Y\ninit: X = 5\n";
  const fs::path noinit = dir / "noinit.crn";
  std::ofstream(noinit) << "X -> Y\n";
  const std::vector<Case> cases{
      {{"validate", (dir / "missing.crn").string()}, "cannot open"},
      {{"validate", bad.string()}, "line 1, column"},
      {{"analyze", data("leader.crn"), "--init", "Q=3"}, "Q"},
      {{"analyze", data("leader.crn"), "--init", "L=0"}, "zero"},
      {{"analyze", data("leader.crn"), "--alpha", "2"}, "alpha"},
      {{"constants", data("growth.crn"), "--alpha", "0.5"}, "--c-hat"},
      {{"constants", noinit.string(), "--alpha", "0.5"}, "initial configuration"},
      {{"simulate", tri.string(), "--t-max", "1"}, "order"},
      {{"simulate", data("xy.crn")}, "stop condition"},
      {{"simulate", data("xy.crn"), "--until-appears", "Q"}, "Q"},
      {{"first-production", data("xy.crn"), "--target", "Q", "--t-cap", "1"}, "unknown target"},
      {{"first-production", data("xy.crn"), "--target", "Y", "--t-cap", "1", "--trials", "0"}, "trials"},
      {{"bounds", "reflecting", "--delta-f", "0.22", "--lambda-r", "1", "--delta-r", "0.2", "--N", "1000"},
       "delta_r"},
      {{"bounds", "walk", "--f-hat", "1", "--r-hat", "2", "--t", "1", "--eps-hat", "0.5"}, "f_hat"},
      {{"bounds", "poisson", "--lambda", "10", "--n", "5"}, "n"},
      {{"bounds", "decay", "--N", "10", "--lambda", "1", "--t", "1", "--delta", "0.1", "--validate",
        "--trials", "100"},
       "10000"},
      {{"demo", "leader", "--n", "1"}, "n >= 2"},
      {{"demo", "chain", "--m", "0"}, "at least 1"},
      {{"demo", "scan", data("xy.crn"), "--init", "X=1,Y=99", "--alpha", "0.5"}, "dense"},
  };
  for (const auto& c : cases) {
    CAPTURE(c.args.front());
    CAPTURE(c.message);
    const auto r = run(c.args);
    CHECK(r.code == 1);
    CHECK(has(r.err, c.message));
  }
}
