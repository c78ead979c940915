#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "linecount/cli.hpp"

using linecount::run_cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("exact cn with both routes") {
  const auto r = run({"exact", "cn", "--n", "3", "--method", "both"});
  CHECK(r.code == 0);
  CHECK(r.out == "zagier 27\nsymbolic 27\n");
  CHECK(run({"exact", "cn", "--n", "5"}).out == "zagier 698005\n");
  CHECK(run({"exact", "cn", "--n", "4", "--method", "symbolic"}).out == "symbolic 2875\n");
}

TEST_CASE("exact rn, en3 and volume") {
  CHECK(run({"exact", "rn", "--n", "10"}).out == "34459425\n");
  const auto en3 = run({"exact", "en3"});
  CHECK(en3.code == 0);
  CHECK(en3.out.find("E_3 = -3 + 6*sqrt(2)") != std::string::npos);
  CHECK(en3.out.find("rho_3 = 3/2") != std::string::npos);
  const auto vol = run({"exact", "volume", "--k", "2", "--m", "4", "--field", "complex"});
  CHECK(vol.code == 0);
  CHECK(vol.out.find("1/12 * pi^(8/2)") != std::string::npos);
  CHECK(run({"exact", "volume", "--k", "4", "--m", "4", "--field", "real"}).code == 1);
}

TEST_CASE("mc json record") {
  const std::vector<std::string> args{"mc",   "en",       "--n",       "3", "--samples", "20000",
                                      "--seed", "42", "--threads", "4", "--format", "json"};
  const auto r = run(args);
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["op"] == "mc en");
  CHECK(j["seed"] == 42);
  CHECK(j["samples"] == 20000);
  CHECK(j["streams"] == 4);
  CHECK(j["value"].get<double>() == doctest::Approx(5.485).epsilon(0.05));
  CHECK(run(args).out == r.out);

  const auto text = run({"mc", "absdetsq", "--n", "3", "--samples", "1000", "--seed", "1"});
  CHECK(text.code == 0);
  CHECK(text.out.find("seed 1") != std::string::npos);
}

TEST_CASE("validation failures exit 1") {
  CHECK(run({}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"mc", "en", "--n", "3", "--samples", "1000"}).code == 1);  // no seed
  CHECK(run({"mc", "en", "--n", "3", "--samples", "10", "--seed", "1"}).code == 1);
  CHECK(run({"mc", "en", "--n", "2", "--samples", "1000", "--seed", "1"}).code == 1);
  CHECK(run({"mc", "en", "--n", "31", "--samples", "1000", "--seed", "1"}).code == 1);
  CHECK(run({"mc", "en", "--n", "3", "--samples", "1000", "--seed", "1", "--threads", "0"}).code == 1);
  CHECK(run({"mc", "bogus", "--n", "3", "--samples", "1000", "--seed", "1"}).code == 1);
  CHECK(run({"exact", "cn", "--n", "3", "--method", "guess"}).code == 1);
  const auto capped = run({"verify", "lemmas", "--n", "7"});
  CHECK(capped.code == 1);
  CHECK(capped.err.find("capped at n = 6") != std::string::npos);
  CHECK(capped.out.empty());
}

TEST_CASE("caps are flag-controlled") {
  CHECK(run({"--mc-cap", "31", "mc", "en", "--n", "31", "--samples", "1000", "--seed", "1"}).code == 0);
  CHECK(run({"--symbolic-cap", "10", "verify", "lemmas", "--n", "3"}).code == 1);
  CHECK(run({"--symbolic-cap", "4", "verify", "lemmas", "--n", "5"}).code == 1);
}

TEST_CASE("verify subcommands") {
  const auto lemmas = run({"verify", "lemmas", "--n", "4"});
  CHECK(lemmas.code == 0);
  CHECK(lemmas.out.find("violations 0") != std::string::npos);
  const auto sgn = run({"verify", "signed", "--n", "5"});
  CHECK(sgn.code == 0);
  CHECK(sgn.out.find("symbolic: rho_n * E det J_n = 105") != std::string::npos);
  CHECK(run({"verify", "signed", "--n", "12"}).code == 0);
  const auto dens = run({"verify", "density", "--samples", "20000", "--seed", "3"});
  CHECK(dens.code == 0);
  const auto j = nlohmann::json::parse(dens.out);
  CHECK(j["seed"] == 3);
  CHECK(j["samples"] == 20000);
  CHECK(run({"verify", "realify", "--trials", "100"}).code == 0);
}

TEST_CASE("sqrtlaw csv") {
  const auto r = run({"sqrtlaw", "--n-min", "3", "--n-max", "4", "--samples", "2000", "--seed", "42",
                      "--threads", "2", "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("n,log_en,log_cn,ratio,lower_bound_ratio,std_error\n3,", 0) == 0);
  CHECK(run({"sqrtlaw", "--n-min", "5", "--n-max", "4", "--samples", "2000", "--seed", "1"}).code == 1);
}

TEST_CASE("dump poly") {
  const auto path = std::filesystem::temp_directory_path() / "linecount_q3.txt";
  const auto r = run({"dump", "poly", "--n", "3", "--out", path.string()});
  CHECK(r.code == 0);
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str().rfind("1 0 0 2 2 0 0\n", 0) == 0);
  std::filesystem::remove(path);
  CHECK(run({"dump", "poly", "--n", "3", "--out", "/nonexistent-dir/x.txt"}).code == 1);
}

TEST_CASE("help exits cleanly") {
  const auto r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("mc") != std::string::npos);
}
