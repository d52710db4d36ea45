#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdio>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

#include "monoroot/cake.hpp"
#include "monoroot/instances.hpp"
#include "monoroot/root2d.hpp"

using namespace monoroot;
using nlohmann::json;

namespace {

struct Run {
  int status;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(MONOROOT_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  while (const auto n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string data(const std::string& name) { return std::string(MONOROOT_DATA) + "/" + name; }

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string path = std::string(MONOROOT_TMP) + "/" + name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("solve2d matches the library") {
  const Run r = run("solve2d --mode diag --instance " + data("decoupled.json") + " --delta 2^-8");
  REQUIRE(r.status == 0);
  const json j = json::parse(r.out);

  std::ifstream in(data("decoupled.json"));
  auto prob = discretize_instance(instance_from_json(json::parse(in)), -8);
  const GridPoint p = find_root_diag(*prob.sign, prob.grid);
  CHECK(j["root"]["index"].get<std::vector<std::int64_t>>() == p.index);
  CHECK(j["evaluations"].get<std::uint64_t>() == prob.sign->evaluations());
  CHECK(j["value"] == json::array({0, 0}));
}

TEST_CASE("every 2D mode and the recursive solver return roots") {
  for (const std::string mode : {"diag", "exdiag", "sum"}) {
    const std::string family = mode == "diag" ? "random-monotone-2d" : (mode == "exdiag" ? "exdiag-2d" : "sum-2d");
    const Run r = run("solve2d --mode " + mode + " --family " + family + " --seed 4 --delta 2^-7 --trace");
    REQUIRE(r.status == 0);
    const json j = json::parse(r.out);
    CHECK(j["value"] == json::array({0, 0}));
    CHECK(j["trace"]["evaluations"] == j["evaluations"]);
  }
  const Run r = run("solvend --instance " + data("recursive_3d.json") + " --delta 2^-5");
  REQUIRE(r.status == 0);
  CHECK(json::parse(r.out)["value"] == json::array({0, 0, 0}));
  const Run one = run("solve1d --instance " + data("decoupled_1d.json") + " --delta 2^-5");
  REQUIRE(one.status == 0);
  CHECK(json::parse(one.out)["root"]["index"] == json::array({10}));
}

TEST_CASE("cake allocation passes verification") {
  const Run r = run("cake --instance " + data("three_uniform.json"));
  REQUIRE(r.status == 0);
  const json j = json::parse(r.out);
  CHECK(j["verification"]["ok"] == true);
  CHECK(j["assignment"].size() == 3);

  std::ifstream in(data("three_uniform.json"));
  CakeInstance inst = cake_instance_from_json(json::parse(in));
  CakeSolveStats stats;
  solve_three_groups(inst, &stats);
  CHECK(j["queries"].get<std::uint64_t>() == stats.queries);
}

TEST_CASE("bench rows and reproducibility") {
  const Run a = run("bench --family random-monotone-2d --seed 3 --deterministic");
  const Run b = run("bench --family random-monotone-2d --seed 3 --deterministic");
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);
  std::size_t lines = 0;
  for (char c : a.out) lines += c == '\n';
  CHECK(lines == 18);
  const Run two = run("bench --seed 1 --repetitions 2 --deterministic");
  std::size_t rows = 0;
  for (char c : two.out) rows += c == '\n';
  CHECK(rows == 35);
}

TEST_CASE("verify reports") {
  Run r = run("verify --property monotone-profile --construction dd-insufficient --delta 2^-3");
  CHECK(r.status == 0);
  CHECK(json::parse(r.out)["conditions_holding"] == 7);
  r = run("verify --property delta-continuity --instance " + data("decoupled.json") + " --delta 2^-6");
  CHECK(r.status == 0);
  CHECK(json::parse(r.out)["passed"] == true);
  r = run("verify --property positive-switching --instance " + data("decoupled.json") + " --delta 2^-4 --negate 1");
  CHECK(r.status == 1);
  const json j = json::parse(r.out);
  CHECK(j["passed"] == false);
  CHECK(!j["violations"].empty());
}

TEST_CASE("error exits") {
  Run r = run("solve2d --instance " + write_temp("broken.json", "{\"family\": "));
  CHECK(r.status == 2);
  CHECK(json::parse(r.out)["error"]["kind"] == "parse_error");
  r = run("solve2d --family nope");
  CHECK(r.status == 2);
  r = run("solve2d --instance " + data("decoupled.json") + " --delta 0.01");
  CHECK(r.status == 2);
  r = run("solve2d --mode diag --instance " + data("decoupled.json") + " --delta 2^-4 --negate 2");
  CHECK(r.status == 1);
  CHECK(json::parse(r.out)["error"]["hypothesis"] == "positive-switching");
  r = run("frobnicate");
  CHECK(r.status == 2);
}
