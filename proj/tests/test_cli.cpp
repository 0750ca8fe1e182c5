#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "flipmix/cli.hpp"

using namespace flipmix;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "flipmix");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> body_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  }
  return lines;
}

std::string body(const std::string& text) {
  std::string joined;
  for (const auto& line : body_lines(text)) joined += line + "\n";
  return joined;
}

}  // namespace

TEST_CASE("header lines") {
  const auto r = invoke({"spectrum", "--graph", "complete:3", "--seed", "9"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("# flipmix 0.1.0\n# command: flipmix spectrum --graph complete:3 --seed 9\n# seed: 9\n", 0) == 0);
}

TEST_CASE("spectrum of K4") {
  const auto r = invoke({"spectrum", "--graph", "complete:4"});
  REQUIRE(r.code == 0);
  const auto lines = body_lines(r.out);
  REQUIRE(lines.size() == 17);
  CHECK(lines[0] == "flat_bitmask,eigenvalue_num,eigenvalue_den,multiplicity");
  CHECK(lines[4] == "3,1,6,1");
}

TEST_CASE("tv-exact on K2") {
  const auto r = invoke({"tv-exact", "--graph", "complete:2", "--p", "0.5", "--tmax", "3"});
  REQUIRE(r.code == 0);
  const auto lines = body_lines(r.out);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "t,d_tv");
  CHECK(std::stod(lines[1].substr(2)) == doctest::Approx(0.5));
  for (int t = 1; t <= 3; ++t) CHECK(std::stod(lines[t + 1].substr(2)) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("kn-profile rows decrease") {
  const auto r = invoke({"kn-profile", "--n", "1024", "--p", "0.5", "--gamma", "-2,0,2,8"});
  REQUIRE(r.code == 0);
  const auto lines = body_lines(r.out);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "n,gamma,t,d_tv");
  double previous = 2.0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const double d = std::stod(lines[i].substr(lines[i].rfind(',') + 1));
    CHECK(d < previous);
    previous = d;
  }
}

TEST_CASE("other subcommands produce their tables") {
  CHECK(body_lines(invoke({"bounds", "--graph", "cycle:5", "--tmax", "10"}).out)[0] ==
        "t,exact_dtv,bhr,comaximal");
  CHECK(body_lines(invoke({"sandwich", "--graph", "complete:5"}).out)[0] == "name,lower,upper,eps");
  CHECK(body_lines(invoke({"kn-profile", "--n", "64", "--table", "mixing"}).out)[0] == "n,eps,t_mix");
  CHECK(body_lines(invoke({"couple", "--n", "32", "--replicas", "10"}).out)[0] ==
        "replica,tau1,tau2,tau3,tau");
  CHECK(body_lines(invoke({"couple", "--n", "32", "--replicas", "100", "--t", "10,100"}).out)[0] ==
        "t,p_tail,stderr");
  const auto walk = invoke({"walk-check", "--graph", "bipartite:2,3"});
  CHECK(walk.code == 0);
  CHECK(body_lines(walk.out).size() == 1 + 4 + 5);
}

TEST_CASE("validation errors exit with 1") {
  CHECK(invoke({}).code == 1);
  CHECK(invoke({"nope"}).code == 1);
  CHECK(invoke({"spectrum"}).code == 1);
  CHECK(invoke({"spectrum", "--graph", "complete:1"}).code == 1);
  CHECK(invoke({"spectrum", "--graph", "complete:30"}).code == 1);
  CHECK(invoke({"tv-exact", "--graph", "complete:3", "--tmax", "3", "--p", "2"}).code == 1);
  CHECK(invoke({"tv-exact", "--graph", "complete:3", "--tmax", "3", "--start", "01"}).code == 1);
  CHECK(invoke({"kn-profile", "--n", "8"}).code == 1);
  CHECK(invoke({"couple", "--n", "32", "--replicas", "10", "--t", "5"}).code == 1);
  CHECK(invoke({"bounds", "--graph", "complete:3", "--starts", "some"}).code == 1);
  CHECK(invoke({"sandwich", "--graph", "complete:3", "--eps", "1.5"}).code == 1);
}

TEST_CASE("output file") {
  const char* path = "flipmix_cli_test.csv";
  const auto r = invoke({"spectrum", "--graph", "complete:2", "--out", path});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  CHECK(body_lines(buffer.str()).size() == 5);
  std::remove(path);
}

TEST_CASE("bodies are reproducible and independent of the thread count") {
  const std::vector<std::vector<std::string>> commands{
      {"couple", "--n", "200", "--replicas", "300", "--seed", "5"},
      {"couple", "--n", "200", "--replicas", "300", "--seed", "5", "--gamma", "0,1,2"},
      {"kn-profile", "--n", "64,128"},
      {"bounds", "--graph", "complete:5", "--tmax", "30"},
      {"sandwich", "--graph", "cycle:6"},
  };
  for (const auto& command : commands) {
    auto one = command;
    one.insert(one.end(), {"--threads", "1"});
    auto many = command;
    many.insert(many.end(), {"--threads", "4"});
    const auto a = invoke(command), b = invoke(command), c = invoke(one), d = invoke(many);
    CHECK(body(a.out) == body(b.out));
    CHECK(body(a.out) == body(c.out));
    CHECK(body(a.out) == body(d.out));
  }
  const auto s1 = invoke({"couple", "--n", "200", "--replicas", "50", "--seed", "1"});
  const auto s2 = invoke({"couple", "--n", "200", "--replicas", "50", "--seed", "2"});
  CHECK(body(s1.out) != body(s2.out));
}

TEST_CASE("binary exit codes") {
  const std::string bin = FLIPMIX_BINARY;
  CHECK(std::system((bin + " spectrum --graph complete:3 > /dev/null").c_str()) == 0);
  const int bad = std::system((bin + " spectrum --graph complete:1 > /dev/null 2>&1").c_str());
  CHECK(WEXITSTATUS(bad) == 1);
}
