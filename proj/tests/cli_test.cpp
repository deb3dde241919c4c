#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "lpi/error.hpp"
#include "lpi/tools/scenario.hpp"
#include "lpi/tools/suites.hpp"

using namespace lpi;
using io::Json;

namespace {

struct Run {
  int code;
  std::string out;
};

Run lpi_cli(const std::string& args) {
  const std::string cmd = std::string(LPI_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("lpi_cli_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

Errc error_of(const Json& doc) {
  try {
    scenario::execute(doc, kDefaultTol);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return Errc::ValidationError;
}

}  // namespace

TEST_CASE("three-interval scenario report") {
  const auto outcome = scenario::execute(suites::three_intervals_scenario(1.0), kDefaultTol);
  CHECK(outcome.ok);
  const Json& results = outcome.report.at("results");
  const Json& tail = results.at(2).at("value").at("values");
  CHECK(tail.at("[0,1]") == 0.0);
  CHECK(tail.at("(1,2]") == 0.0);
  CHECK(tail.at("(2,3]") == 1.0);
  const Json& verdict = results.at(4).at("verdict");
  CHECK(verdict.at("independent") == false);
  CHECK(verdict.at("witness").at("element").at("values").at("(2,3]") == 1.0);
  CHECK(outcome.report.at("refinements").empty());
}

TEST_CASE("empty command list") {
  Json doc = suites::quarters_scenario(2.0);
  doc["commands"] = Json::array();
  const auto outcome = scenario::execute(doc, kDefaultTol);
  CHECK(outcome.ok);
  CHECK(outcome.report.at("results").empty());
  CHECK(outcome.report.at("refinements").empty());
}

TEST_CASE("reference and validation errors") {
  Json doc = suites::three_intervals_scenario(1.0);
  doc["commands"].push_back({{"op", "condexp"}, {"f", "missing"}, {"C", "B"}});
  CHECK(error_of(doc) == Errc::UnknownReference);

  doc = suites::three_intervals_scenario(1.0);
  doc["commands"].push_back({{"op", "indep"}, {"A", "A"}, {"B", "nowhere"}, {"C", "C"}});
  CHECK(error_of(doc) == Errc::UnknownReference);

  doc = suites::three_intervals_scenario(1.0);
  doc["commands"].push_back({{"op", "frobnicate"}});
  CHECK(error_of(doc) == Errc::ValidationError);

  doc = suites::three_intervals_scenario(1.0);
  doc["space"]["cells"][1]["weight"] = -1.0;
  CHECK_THROWS_AS(scenario::execute(doc, kDefaultTol), Error);
}

TEST_CASE("parse errors carry a position") {
  try {
    io::parse("{\"space\": {\"p\": 1,\n  \"cells\": [}");
    FAIL("parse succeeded");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ParseError);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("refinements are threaded and old ids still resolve") {
  const Json doc = io::parse(R"({
    "space": {"p": 2, "cells": [{"id": "a", "weight": 1}, {"id": "b", "weight": 2}, {"id": "c", "weight": 1}]},
    "functions": {"f": {"values": {"a": 3, "b": 1, "c": -1}}, "t": {"values": {"a": 0.25, "b": 0.25, "c": 0}}},
    "sublattices": {"C": {"blocks": [{"cells": ["a", "b"]}]}, "B": {"blocks": [{"cells": ["a"]}, {"cells": ["b"]}]}},
    "commands": [
      {"op": "realize", "f": "f", "C": "C", "as": "g"},
      {"op": "typeeq", "f": "f", "g": "g", "C": "C", "expect": true},
      {"op": "extend", "f": "f", "C": "C", "B": "B", "as": "h"},
      {"op": "indep", "A": "h", "B": "B", "C": "C", "expect": true},
      {"op": "dist", "f": "f", "g": "h", "C": "C", "expect": 0},
      {"op": "maharam", "cells": ["a", "b"], "C": "C", "target": "t"}
    ]})");
  const auto outcome = scenario::execute(doc, kDefaultTol);
  CHECK(outcome.ok);
  CHECK(outcome.report.at("refinements").size() == 3);
  CHECK(outcome.report.contains("space"));
  for (const auto& r : outcome.report.at("results")) CHECK_FALSE(r.contains("error"));
}

TEST_CASE("failed expectation stops the run") {
  Json doc = suites::quarters_scenario(1.0);
  doc["commands"][0]["expect"] = false;
  const auto outcome = scenario::execute(doc, kDefaultTol);
  CHECK_FALSE(outcome.ok);
  CHECK(outcome.report.at("results").size() == 1);
  CHECK(outcome.report.at("status") == "failed");
}

TEST_CASE("cli run: exit codes and determinism") {
  const std::string good = write_temp("good.json", io::dump(suites::three_intervals_scenario(2.0)));
  const Run first = lpi_cli("run " + good), second = lpi_cli("run " + good);
  CHECK(first.code == 0);
  CHECK(first.out == second.out);
  CHECK(io::parse(first.out).at("status") == "ok");

  // A report embedding the scenario replays to the same report.
  const Json wrapped = {{"scenario", suites::three_intervals_scenario(2.0)}};
  CHECK(lpi_cli("run " + write_temp("wrapped.json", io::dump(wrapped))).out == first.out);

  CHECK(lpi_cli("run " + write_temp("bad.json", "{\"space\": [")).code == 2);
  CHECK(lpi_cli("run /nonexistent/scenario.json").code == 2);
  CHECK(lpi_cli("").code == 2);
  CHECK(lpi_cli("verify --trials nope").code == 2);

  Json failing = suites::quarters_scenario(1.0);
  failing["commands"][2]["expect"] = true;
  CHECK(lpi_cli("run " + write_temp("failing.json", io::dump(failing))).code == 1);
}

TEST_CASE("cli verify: default pass, determinism, injected fault") {
  const Run a = lpi_cli("verify --seed 5 --trials 40"), b = lpi_cli("verify --seed 5 --trials 40");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(io::parse(a.out).at("status") == "pass");

  const Run bad = lpi_cli("verify --seed 5 --trials 20 --tol 1e302");
  CHECK(bad.code == 1);
  const Json summary = io::parse(bad.out);
  CHECK(summary.at("status") == "fail");
  bool replayed = false;
  for (const auto& suite : summary.at("suites")) {
    if (suite.at("status") != "fail" || !suite.contains("scenario")) continue;
    // The replay document is a valid scenario in its own right.
    const auto replay = scenario::execute(suite.at("scenario"), 1e302);
    CHECK(replay.report.contains("results"));
    replayed = true;
  }
  CHECK(replayed);
}

TEST_CASE("a wrong expected function is reported at its command") {
  Json wrong = suites::three_intervals_scenario(1.0);
  wrong["commands"][3]["expect"] = wrong["commands"][2]["expect"];
  const auto outcome = scenario::execute(wrong, kDefaultTol);
  CHECK_FALSE(outcome.ok);
  CHECK(outcome.report.at("results").size() == 4);
  CHECK(outcome.report.at("results").back().at("check") == "fail");
}
